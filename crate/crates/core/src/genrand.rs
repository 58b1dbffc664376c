//! Seeded generators for test instances with planted structure.
//!
//! Every generator draws from its own ChaCha stream seeded from a [`Seed`],
//! so output is a pure function of (seed, parameters).

use nalgebra::linalg::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matcore::{c64, CMat, ComplexMatrix, C64};

/// Planted nonzero singular values are drawn from this interval.
pub const SINGULAR_VALUE_RANGE: (f64, f64) = (0.5, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Seed for the `stream`-th independent sub-generator.
    pub fn derive(self, stream: u64) -> Seed {
        // splitmix64 finalizer
        let mut z = self.0 ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    // fill row-major so the draw order does not depend on storage layout
    let entries: Vec<C64> = (0..rows * cols).map(|_| gaussian(rng)).collect();
    CMat::from_row_iterator(rows, cols, entries)
}

fn unitary_from<R: Rng>(rng: &mut R, n: usize) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let mut q = QR::new(gaussian_mat(rng, n, n)).q();
    // first nonzero entry of each column real positive
    for j in 0..n {
        if let Some(z) = q.column(j).iter().copied().find(|z| z.norm() > 1e-12) {
            let phase = z.conj() / z.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

fn planted_singular_values<R: Rng>(rng: &mut R, count: usize) -> Vec<f64> {
    let (lo, hi) = SINGULAR_VALUE_RANGE;
    let mut s: Vec<f64> = (0..count).map(|_| rng.random_range(lo..=hi)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// m x n matrix `U diag(sigma, 0) V*` with exactly `r` planted singular values.
fn with_rank_from<R: Rng>(rng: &mut R, m: usize, n: usize, r: usize) -> CMat {
    let u = unitary_from(rng, m);
    let v = unitary_from(rng, n);
    let sigma = planted_singular_values(rng, r);
    let mut s = CMat::zeros(m, n);
    for (i, x) in sigma.into_iter().enumerate() {
        s[(i, i)] = c64(x, 0.0);
    }
    u * s * v.adjoint()
}

/// Nilpotent upper shift of size `size` whose only nonzero block is a
/// `k x k` Jordan block in the top-left corner (index k, or 1 when k = 0).
fn shift_block(rows: usize, cols: usize, k: usize) -> CMat {
    let mut out = CMat::zeros(rows, cols);
    for i in 0..k.saturating_sub(1) {
        out[(i, i + 1)] = c64(1.0, 0.0);
    }
    out
}

fn wrap(mat: CMat) -> ComplexMatrix {
    ComplexMatrix::from_mat(mat).expect("generators produce finite nonempty matrices")
}

pub fn random_unitary(n: usize, seed: Seed) -> ComplexMatrix {
    assert!(n >= 1, "random_unitary needs n >= 1");
    wrap(unitary_from(&mut seed.rng(), n))
}

pub fn random_matrix(m: usize, n: usize, seed: Seed) -> ComplexMatrix {
    assert!(m >= 1 && n >= 1, "random_matrix needs a nonempty shape");
    wrap(gaussian_mat(&mut seed.rng(), m, n))
}

pub fn random_matrix_with_rank(m: usize, n: usize, r: usize, seed: Seed) -> Result<ComplexMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::Empty { rows: m, cols: n });
    }
    if r > m.min(n) {
        return Err(Error::RankOutOfRange {
            rank: r,
            max: m.min(n),
        });
    }
    Ok(wrap(with_rank_from(&mut seed.rng(), m, n, r)))
}

/// `Q [T S; 0 N] Q*` with T invertible of size n-k and N the k x k upper shift.
pub fn random_with_index(n: usize, k: usize, seed: Seed) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Empty { rows: 0, cols: 0 });
    }
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let mut rng = seed.rng();
    let t = n - k;
    let q = unitary_from(&mut rng, n);
    let core = with_rank_from(&mut rng, t, t, t);
    let coupling = gaussian_mat(&mut rng, t, k);
    let mut middle = CMat::zeros(n, n);
    middle.view_mut((0, 0), (t, t)).copy_from(&core);
    middle.view_mut((0, t), (t, k)).copy_from(&coupling);
    middle.view_mut((t, t), (k, k)).copy_from(&shift_block(k, k, k));
    Ok(wrap(&q * middle * q.adjoint()))
}

/// Pair `(A, B)` with `A = U [A1 A12; 0 A2] V*`, `B = V [B1 B12; 0 B2] U*`,
/// A1 and B1 invertible t x t, and `A2 B2`, `B2 A2` nilpotent so that
/// `max(Ind(AB), Ind(BA)) = k` and `rank((AB)^k) = t`.
pub fn random_pair_with_core_ep_structure(
    m: usize,
    n: usize,
    t: usize,
    k: usize,
    seed: Seed,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if t == 0 || t > m.min(n) {
        return Err(Error::ParameterMismatch(format!(
            "core size t={t} must lie in 1..={}",
            m.min(n)
        )));
    }
    let (p, q) = (m - t, n - t);
    let feasible = match k {
        0 => p == 0 && q == 0,
        1 => p + q > 0,
        _ => p.min(q) >= k,
    };
    if !feasible {
        return Err(Error::ParameterMismatch(format!(
            "index k={k} cannot be planted with trailing blocks {p}x{q} (m={m}, n={n}, t={t})"
        )));
    }
    let mut rng = seed.rng();
    let u = unitary_from(&mut rng, m);
    let v = unitary_from(&mut rng, n);
    let a1 = with_rank_from(&mut rng, t, t, t);
    let b1 = with_rank_from(&mut rng, t, t, t);
    let a12 = gaussian_mat(&mut rng, t, q);
    let b12 = gaussian_mat(&mut rng, t, p);
    // A2 carries the shift, B2 is an identity-pattern rectangle, so A2 B2 and
    // B2 A2 are both the index-k shift padded with zeros.
    let a2 = shift_block(p, q, k);
    let mut b2 = CMat::zeros(q, p);
    for i in 0..p.min(q) {
        b2[(i, i)] = c64(1.0, 0.0);
    }
    let mut am = CMat::zeros(m, n);
    am.view_mut((0, 0), (t, t)).copy_from(&a1);
    am.view_mut((0, t), (t, q)).copy_from(&a12);
    am.view_mut((t, t), (p, q)).copy_from(&a2);
    let mut bm = CMat::zeros(n, m);
    bm.view_mut((0, 0), (t, t)).copy_from(&b1);
    bm.view_mut((0, t), (t, p)).copy_from(&b12);
    bm.view_mut((t, t), (q, p)).copy_from(&b2);
    let a = &u * am * v.adjoint();
    let b = &v * bm * u.adjoint();
    Ok((wrap(a), wrap(b)))
}
