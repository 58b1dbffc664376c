// Shared seeded corpus for the integration suites. Every instance is
// rebuilt from its seed alone, so a failing case can be replayed with
// `instance(seed)`.
#![allow(dead_code)]

use geninv_toolkit::genrand::{
    random_matrix, random_matrix_with_rank, random_pair_with_core_ep_structure, random_with_index, Seed,
};
use geninv_toolkit::matcore::{matrix_index, rank, ComplexMatrix, ToleranceConfig};
use rand::Rng;

pub const CORPUS_BASE_SEED: u64 = 0x5eed_0000;

#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub family: &'static str,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub w: ComplexMatrix,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.a.rows()
    }
}

pub fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// `||x - y||_F / max(1, ||y||_F)`
pub fn rel_diff(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    (x - y).frobenius_norm() / y.frobenius_norm().max(1.0)
}

fn planted_rank(m: usize, r: usize, seed: Seed) -> ComplexMatrix {
    let a = random_matrix_with_rank(m, m, r, seed).expect("rank in range");
    assert_eq!(rank(&a, &cfg()).unwrap(), r, "generator self-test: rank, seed {:?}", seed);
    a
}

fn planted_index(m: usize, k: usize, seed: Seed) -> ComplexMatrix {
    let a = random_with_index(m, k, seed).expect("index in range");
    assert_eq!(
        matrix_index(&a, &cfg()).unwrap().index,
        k,
        "generator self-test: index, seed {:?}",
        seed
    );
    a
}

/// Square instance with n in 2..=8. The family cycles with the seed:
/// independent planted ranks, planted index for A, core-EP structured pair,
/// and a full-rank A against a rank-deficient B.
pub fn instance(seed: u64) -> Instance {
    let s = Seed(seed);
    let mut rng = s.derive(0).rng();
    let n = 2 + (seed % 7) as usize;
    let family_id = (seed / 7) % 4;
    let rb = rng.random_range(1..=n);
    let (family, a, b) = match family_id {
        0 => {
            let ra = rng.random_range(1..=n);
            ("ranks", planted_rank(n, ra, s.derive(1)), planted_rank(n, rb, s.derive(2)))
        }
        1 => {
            let k = rng.random_range(0..=n.min(3));
            ("index", planted_index(n, k, s.derive(1)), planted_rank(n, rb, s.derive(2)))
        }
        2 => {
            let t = rng.random_range(1..=n);
            let k = if t == n { 0 } else { rng.random_range(1..=n - t) };
            let (a, b) = random_pair_with_core_ep_structure(n, n, t, k, s.derive(1)).expect("feasible plant");
            ("core-ep-pair", a, b)
        }
        _ => ("full-rank", random_matrix(n, n, s.derive(1)), planted_rank(n, rb, s.derive(2))),
    };
    let w = if rng.random_bool(0.5) {
        let kw = rng.random_range(0..n.min(3));
        planted_index(n, kw, s.derive(3))
    } else {
        let rw = rng.random_range(1..=n);
        planted_rank(n, rw, s.derive(3))
    };
    Instance { seed, family, a, b, w }
}

pub fn corpus(count: u64) -> Vec<Instance> {
    (0..count).map(|i| instance(CORPUS_BASE_SEED + i)).collect()
}

/// `x + eps * E / ||E||_F` for a seeded Gaussian direction E.
pub fn perturb(x: &ComplexMatrix, eps: f64, seed: u64) -> ComplexMatrix {
    let e = random_matrix(x.rows(), x.cols(), Seed(seed));
    x + &e.scale(eps / e.frobenius_norm())
}
