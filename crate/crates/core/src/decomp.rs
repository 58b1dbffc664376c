//! The two simultaneous factorizations of a matrix pair and the closed-form
//! pseudoinverse of a block upper-triangular matrix.
//!
//! Decompositions are not unique (SVD phases, choice of complementary
//! bases), so callers should compare reconstructions and block identities,
//! never raw factors.

use crate::error::{Error, Result};
use crate::matcore::raw;
use crate::matcore::{c64, CMat, ComplexMatrix, ToleranceConfig};

/// `A = U [S_A A1, S_A A2; 0, 0] V*` and `B = V [S_B B1, S_B B2; 0, 0] U*`
/// with `A1 A1* + A2 A2* = I_r`, `B1 B1* + B2 B2* = I_s`.
#[derive(Debug, Clone)]
pub struct PairSvdDecomposition {
    pub u: CMat,
    pub v: CMat,
    pub sigma_a: Vec<f64>,
    pub sigma_b: Vec<f64>,
    /// r x s
    pub a1: CMat,
    /// r x (n - s)
    pub a2: CMat,
    /// s x r
    pub b1: CMat,
    /// s x (n - r)
    pub b2: CMat,
    pub r: usize,
    pub s: usize,
}

fn diag(values: &[f64]) -> CMat {
    let n = values.len();
    CMat::from_fn(n, n, |i, j| if i == j { c64(values[i], 0.0) } else { c64(0.0, 0.0) })
}

/// `[top_left top_right; 0 bottom_right]` with the given row split.
fn upper_block(top_left: &CMat, top_right: &CMat, bottom_right: &CMat) -> CMat {
    let (t, c1) = top_left.shape();
    let c2 = top_right.ncols();
    let rows = t + bottom_right.nrows();
    let mut out = CMat::zeros(rows, c1 + c2);
    out.view_mut((0, 0), (t, c1)).copy_from(top_left);
    out.view_mut((0, c1), (t, c2)).copy_from(top_right);
    out.view_mut((t, c1), bottom_right.shape()).copy_from(bottom_right);
    out
}

impl PairSvdDecomposition {
    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    pub fn sigma_a_mat(&self) -> CMat {
        diag(&self.sigma_a)
    }

    pub fn sigma_b_mat(&self) -> CMat {
        diag(&self.sigma_b)
    }

    /// `S_A A1`, the r x s block the canonical forms are built from.
    pub fn scaled_a1(&self) -> CMat {
        self.sigma_a_mat() * &self.a1
    }

    pub fn scaled_b1(&self) -> CMat {
        self.sigma_b_mat() * &self.b1
    }

    pub fn reconstruct_a(&self) -> CMat {
        let n = self.n();
        let sa = self.sigma_a_mat();
        let mut mid = CMat::zeros(n, n);
        mid.view_mut((0, 0), (self.r, self.s)).copy_from(&(&sa * &self.a1));
        mid.view_mut((0, self.s), (self.r, n - self.s))
            .copy_from(&(&sa * &self.a2));
        &self.u * mid * self.v.adjoint()
    }

    pub fn reconstruct_b(&self) -> CMat {
        let n = self.n();
        let sb = self.sigma_b_mat();
        let mut mid = CMat::zeros(n, n);
        mid.view_mut((0, 0), (self.s, self.r)).copy_from(&(&sb * &self.b1));
        mid.view_mut((0, self.r), (self.s, n - self.r))
            .copy_from(&(&sb * &self.b2));
        &self.v * mid * self.u.adjoint()
    }

    /// `(||A1 A1* + A2 A2* - I_r||_F, ||B1 B1* + B2 B2* - I_s||_F)`.
    pub fn row_orthonormality_residuals(&self) -> (f64, f64) {
        let ra = &self.a1 * self.a1.adjoint() + &self.a2 * self.a2.adjoint()
            - CMat::identity(self.r, self.r);
        let rb = &self.b1 * self.b1.adjoint() + &self.b2 * self.b2.adjoint()
            - CMat::identity(self.s, self.s);
        (ra.norm(), rb.norm())
    }
}

fn require_same_square(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<usize> {
    a.require_square("A")?;
    b.require_square("B")?;
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{} but B is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.rows())
}

/// Builds the pair factorization from the SVDs of A and B: `U = U_A`,
/// `V = U_B`, `[A1 A2]` the leading r rows of `V_A* U_B` and `[B1 B2]` the
/// leading s rows of `V_B* U_A`.
pub fn pair_svd_decomposition(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<PairSvdDecomposition> {
    let n = require_same_square(a, b)?;
    let svd_a = raw::svd(a.as_mat(), cfg)?;
    let svd_b = raw::svd(b.as_mat(), cfg)?;
    let r = raw::rank(a.as_mat(), cfg)?;
    let s = raw::rank(b.as_mat(), cfg)?;
    if r == 0 {
        return Err(Error::ZeroMatrix("A"));
    }
    if s == 0 {
        return Err(Error::ZeroMatrix("B"));
    }
    let cross_a = svd_a.v.adjoint() * &svd_b.u;
    let cross_b = svd_b.v.adjoint() * &svd_a.u;
    Ok(PairSvdDecomposition {
        u: svd_a.u.clone(),
        v: svd_b.u.clone(),
        sigma_a: svd_a.singular_values[..r].to_vec(),
        sigma_b: svd_b.singular_values[..s].to_vec(),
        a1: cross_a.view((0, 0), (r, s)).into_owned(),
        a2: cross_a.view((0, s), (r, n - s)).into_owned(),
        b1: cross_b.view((0, 0), (s, r)).into_owned(),
        b2: cross_b.view((0, r), (s, n - r)).into_owned(),
        r,
        s,
    })
}

/// `A = U [A1 A12; 0 A2] V*`, `B = V [B1 B12; 0 B2] U*` with A1, B1
/// nonsingular t x t and `A2 B2`, `B2 A2` nilpotent.
#[derive(Debug, Clone)]
pub struct CoreEpPairDecomposition {
    pub u: CMat,
    pub v: CMat,
    pub a1: CMat,
    pub a12: CMat,
    pub a2: CMat,
    pub b1: CMat,
    pub b12: CMat,
    pub b2: CMat,
    pub t: usize,
    /// `max(Ind(AB), Ind(BA))`
    pub k: usize,
    pub index_ab: usize,
    pub index_ba: usize,
    /// Frobenius norms of the discarded (2,1) blocks of `U* A V` and `V* B U`.
    pub lower_left: (f64, f64),
}

impl CoreEpPairDecomposition {
    pub fn reconstruct_a(&self) -> CMat {
        &self.u * upper_block(&self.a1, &self.a12, &self.a2) * self.v.adjoint()
    }

    pub fn reconstruct_b(&self) -> CMat {
        &self.v * upper_block(&self.b1, &self.b12, &self.b2) * self.u.adjoint()
    }

    /// `||(A2 B2)^Ind(AB)||_F` and `||(B2 A2)^Ind(BA)||_F`, each divided by
    /// `max(1, ||A2|| ||B2||)^index`.
    pub fn nilpotency_residuals(&self) -> (f64, f64) {
        let scale = (self.a2.norm() * self.b2.norm()).max(1.0);
        let ab = &self.a2 * &self.b2;
        let ba = &self.b2 * &self.a2;
        let res_ab = raw::power(&ab, self.index_ab).norm() / scale.powi(self.index_ab as i32);
        let res_ba = raw::power(&ba, self.index_ba).norm() / scale.powi(self.index_ba as i32);
        (res_ab, res_ba)
    }
}

fn leading_block_check(block: &CMat, reference: f64, cfg: &ToleranceConfig) -> Result<()> {
    let sigma_min = raw::smallest_singular_value(block, cfg)?;
    let cutoff = cfg.nonsingular_cutoff(block.nrows(), reference);
    if sigma_min > cutoff {
        Ok(())
    } else {
        Err(Error::SingularLeadingBlock { sigma_min, cutoff })
    }
}

/// Core-EP decomposition of the pair built from the invariant subspaces
/// `R((AB)^k)` and `R((BA)^k)`; the vanishing of the (2,1) blocks is checked,
/// not imposed.
pub fn core_ep_pair_decomposition(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<CoreEpPairDecomposition> {
    let (m, n) = a.shape();
    if b.shape() != (n, m) {
        return Err(Error::DimensionMismatch(format!(
            "A is {m}x{n}, so B must be {n}x{m} (got {}x{})",
            b.rows(),
            b.cols()
        )));
    }
    let (am, bm) = (a.as_mat(), b.as_mat());
    let norm_a = raw::spectral_norm(am, cfg)?;
    let norm_b = raw::spectral_norm(bm, cfg)?;
    if norm_b == 0.0 || raw::rank(bm, cfg)? == 0 {
        return Err(Error::ZeroMatrix("B"));
    }
    let scale = norm_a * norm_b;
    let ab = am * bm;
    let ba = bm * am;
    let index_ab = raw::matrix_index_scaled(&ab, scale, cfg)?.index;
    let index_ba = raw::matrix_index_scaled(&ba, scale, cfg)?.index;
    let k = index_ab.max(index_ba);
    let power_scale = scale.powi(k as i32);
    let u1 = raw::range_basis_scaled(&raw::power(&ab, k), power_scale, cfg)?;
    let v1 = raw::range_basis_scaled(&raw::power(&ba, k), power_scale, cfg)?;
    if u1.dim() != v1.dim() {
        return Err(Error::Decomposition(format!(
            "rank((AB)^{k}) = {} differs from rank((BA)^{k}) = {}",
            u1.dim(),
            v1.dim()
        )));
    }
    let t = u1.dim();
    if t == 0 {
        return Err(Error::NilpotentProduct);
    }
    let u = raw::orthonormal_completion(&u1.basis);
    let v = raw::orthonormal_completion(&v1.basis);
    let a_hat = u.adjoint() * am * &v;
    let b_hat = v.adjoint() * bm * &u;
    let lower_left = (
        a_hat.view((t, 0), (m - t, t)).norm(),
        b_hat.view((t, 0), (n - t, t)).norm(),
    );
    let tol_a = cfg.residual_tol * am.norm().max(1.0);
    let tol_b = cfg.residual_tol * bm.norm().max(1.0);
    if lower_left.0 > tol_a || lower_left.1 > tol_b {
        return Err(Error::Decomposition(format!(
            "(2,1) blocks do not vanish: {:e} (A), {:e} (B)",
            lower_left.0, lower_left.1
        )));
    }
    let dec = CoreEpPairDecomposition {
        a1: a_hat.view((0, 0), (t, t)).into_owned(),
        a12: a_hat.view((0, t), (t, n - t)).into_owned(),
        a2: a_hat.view((t, t), (m - t, n - t)).into_owned(),
        b1: b_hat.view((0, 0), (t, t)).into_owned(),
        b12: b_hat.view((0, t), (t, m - t)).into_owned(),
        b2: b_hat.view((t, t), (n - t, m - t)).into_owned(),
        u,
        v,
        t,
        k,
        index_ab,
        index_ba,
        lower_left,
    };
    leading_block_check(&dec.a1, norm_a, cfg)?;
    leading_block_check(&dec.b1, norm_b, cfg)?;
    Ok(dec)
}

/// `C = U [C1 C2; 0 C3] V*` with C1 nonsingular, together with the pieces
/// of its closed-form pseudoinverse.
#[derive(Debug, Clone)]
pub struct BlockTriangularForm {
    u: CMat,
    v: CMat,
    c1: CMat,
    c2: CMat,
    c3: CMat,
    c3_pinv: CMat,
    /// `I - Q_{C3}`
    c3_null_projector: CMat,
    omega: CMat,
}

impl BlockTriangularForm {
    pub fn new(u: CMat, v: CMat, c1: CMat, c2: CMat, c3: CMat, cfg: &ToleranceConfig) -> Result<Self> {
        Self::with_c3_scale(u, v, c1, c2, c3, 0.0, cfg)
    }

    /// As [`BlockTriangularForm::new`], deciding the rank of C3 relative to
    /// `c3_scale` when C3 is itself a computed product.
    pub fn with_c3_scale(
        u: CMat,
        v: CMat,
        c1: CMat,
        c2: CMat,
        c3: CMat,
        c3_scale: f64,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let t = c1.nrows();
        let (m, n) = (u.nrows(), v.nrows());
        let shapes_ok = u.is_square()
            && v.is_square()
            && c1.shape() == (t, t)
            && t <= m.min(n)
            && c2.shape() == (t, n - t)
            && c3.shape() == (m - t, n - t);
        if !shapes_ok {
            return Err(Error::DimensionMismatch(format!(
                "block shapes C1 {:?}, C2 {:?}, C3 {:?} do not fit U {:?}, V {:?}",
                c1.shape(),
                c2.shape(),
                c3.shape(),
                u.shape(),
                v.shape()
            )));
        }
        if t == 0 {
            return Err(Error::SingularLeadingBlock {
                sigma_min: 0.0,
                cutoff: 0.0,
            });
        }
        let c1_norm = raw::spectral_norm(&c1, cfg)?;
        leading_block_check(&c1, c1_norm, cfg)?;
        let c3_pinv = raw::pinv_scaled(&c3, c3_scale, cfg)?;
        let c3_null_projector = CMat::identity(n - t, n - t) - &c3_pinv * &c3;
        let gram = &c1 * c1.adjoint() + &c2 * &c3_null_projector * c2.adjoint();
        let omega = gram.try_inverse().ok_or(Error::SingularLeadingBlock {
            sigma_min: 0.0,
            cutoff: 0.0,
        })?;
        Ok(Self {
            u,
            v,
            c1,
            c2,
            c3,
            c3_pinv,
            c3_null_projector,
            omega,
        })
    }

    pub fn t(&self) -> usize {
        self.c1.nrows()
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    pub fn v(&self) -> &CMat {
        &self.v
    }

    pub fn c1(&self) -> &CMat {
        &self.c1
    }

    pub fn c2(&self) -> &CMat {
        &self.c2
    }

    pub fn c3(&self) -> &CMat {
        &self.c3
    }

    /// `(C1 C1* + C2 (I - Q_{C3}) C2*)^{-1}`
    pub fn omega(&self) -> &CMat {
        &self.omega
    }

    pub fn reconstruct(&self) -> CMat {
        &self.u * upper_block(&self.c1, &self.c2, &self.c3) * self.v.adjoint()
    }

    /// `||Omega (C1 C1* + C2 (I - Q_{C3}) C2*) - I||_F`
    pub fn omega_residual(&self) -> f64 {
        let gram = &self.c1 * self.c1.adjoint() + &self.c2 * &self.c3_null_projector * self.c2.adjoint();
        (&self.omega * gram - CMat::identity(self.t(), self.t())).norm()
    }
}

/// Closed-form pseudoinverse of a block upper-triangular matrix:
///
/// ```text
/// C^+ = V [ C1* W                 -C1* W C2 C3^+
///           (I-Q3) C2* W    C3^+ - (I-Q3) C2* W C2 C3^+ ] U*
/// ```
/// with `W = (C1 C1* + C2 (I - Q3) C2*)^{-1}` and `Q3 = C3^+ C3`.
pub fn block_pinv(form: &BlockTriangularForm, _cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    let t = form.t();
    let (m, n) = (form.u.nrows(), form.v.nrows());
    let c1h_omega = form.c1.adjoint() * &form.omega;
    let c2_c3p = &form.c2 * &form.c3_pinv;
    let lower_left = &form.c3_null_projector * form.c2.adjoint() * &form.omega;
    let mut mid = CMat::zeros(n, m);
    mid.view_mut((0, 0), (t, t)).copy_from(&c1h_omega);
    mid.view_mut((0, t), (t, m - t)).copy_from(&(-(&c1h_omega * &c2_c3p)));
    mid.view_mut((t, 0), (n - t, t)).copy_from(&lower_left);
    mid.view_mut((t, t), (n - t, m - t))
        .copy_from(&(&form.c3_pinv - &lower_left * &c2_c3p));
    ComplexMatrix::from_mat(&form.v * mid * form.u.adjoint())
}

/// `C C^+ = U [I_t 0; 0 P_{C3}] U*`.
pub fn block_projector(form: &BlockTriangularForm, _cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    let t = form.t();
    let m = form.u.nrows();
    let mut mid = CMat::zeros(m, m);
    mid.view_mut((0, 0), (t, t)).fill_with_identity();
    mid.view_mut((t, t), (m - t, m - t))
        .copy_from(&(&form.c3 * &form.c3_pinv));
    ComplexMatrix::from_mat(&form.u * mid * form.u.adjoint())
}
