//! Dense complex matrices and the SVD-backed primitives everything else is
//! built from: rank, Moore-Penrose inverse, orthogonal projectors, matrix
//! index and range/null-space bases.
//!
//! Public entry points take a validated [`ComplexMatrix`]. The [`raw`]
//! submodule exposes the same primitives on bare [`CMat`] values, which may
//! have zero rows or columns; block decompositions need that.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Bare dense complex matrix. May be empty (zero rows or columns).
pub type CMat = DMatrix<C64>;

pub const fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// A dense m x n complex matrix with m, n >= 1 and finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(CMat);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Self::from_mat(CMat::from_row_iterator(rows, cols, entries))
    }

    /// Wraps a bare matrix after checking shape and finiteness.
    pub fn from_mat(mat: CMat) -> Result<Self> {
        let (rows, cols) = mat.shape();
        if rows == 0 || cols == 0 {
            return Err(Error::Empty { rows, cols });
        }
        check_finite(&mat)?;
        Ok(Self(mat))
    }

    /// Real rows embedded with zero imaginary parts.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(m * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::ShapeMismatch {
                    rows: m,
                    cols: n,
                    len: entries.len() + row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| c64(x, 0.0)));
        }
        Self::new(m, n, entries)
    }

    pub fn from_complex_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(m * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::ShapeMismatch {
                    rows: m,
                    cols: n,
                    len: entries.len() + row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(m, n, entries)
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self(CMat::zeros(rows, cols))
    }

    /// # Panics
    /// If `n` is zero.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "empty matrix");
        Self(CMat::identity(n, n))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n > 0, "empty matrix");
        Self(CMat::from_fn(n, n, |i, j| {
            if i == j {
                c64(values[i], 0.0)
            } else {
                C64::default()
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn as_mat(&self) -> &CMat {
        &self.0
    }

    pub fn into_mat(self) -> CMat {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            out.extend(self.0.row(i).iter().copied());
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| *z == C64::default())
    }

    /// `self^k`, with `self^0 = I`.
    ///
    /// # Panics
    /// If the matrix is not square.
    pub fn pow(&self, k: usize) -> Self {
        Self(raw::power(&self.0, k))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn require_square(&self, what: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                what,
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.shape())?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                if z.im == 0.0 {
                    write!(f, "{:>12.6} ", z.re)?;
                } else {
                    write!(f, "{:>12.6}{:+.6}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl AsRef<CMat> for ComplexMatrix {
    fn as_ref(&self) -> &CMat {
        &self.0
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

fn check_finite(mat: &CMat) -> Result<()> {
    for j in 0..mat.ncols() {
        for i in 0..mat.nrows() {
            let z = mat[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Tolerances behind every floating-point decision.
///
/// The rank cutoff of a matrix M is
/// `rank_tol_factor * max(rows, cols) * eps * sigma_max(M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub rank_tol_factor: f64,
    pub residual_tol: f64,
    /// Factor in the nonsingularity cutoff applied to leading blocks.
    pub zero_eig_tol_factor: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_tol_factor: 4.0,
            residual_tol: 1e-9,
            zero_eig_tol_factor: 4.0,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_tol_factor: f64, residual_tol: f64, zero_eig_tol_factor: f64) -> Result<Self> {
        let cfg = Self {
            rank_tol_factor,
            residual_tol,
            zero_eig_tol_factor,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_residual_tol(mut self, residual_tol: f64) -> Self {
        self.residual_tol = residual_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_tol_factor", self.rank_tol_factor),
            ("residual_tol", self.residual_tol),
            ("zero_eig_tol_factor", self.zero_eig_tol_factor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be finite and > 0 (got {v})"
                )));
            }
        }
        Ok(())
    }

    pub fn rank_cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.rank_tol_factor * rows.max(cols) as f64 * f64::EPSILON * sigma_max
    }

    pub fn nonsingular_cutoff(&self, dim: usize, sigma_max: f64) -> f64 {
        self.zero_eig_tol_factor * dim as f64 * f64::EPSILON * sigma_max
    }
}

/// Full SVD `M = U diag(sigma) V*` with square unitary factors.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

impl SvdResult {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Rebuilds `U diag(sigma) V*`.
    pub fn reconstruct(&self) -> CMat {
        let (m, n) = (self.u.nrows(), self.v.nrows());
        let mut s = CMat::zeros(m, n);
        for (i, &x) in self.singular_values.iter().enumerate() {
            s[(i, i)] = c64(x, 0.0);
        }
        &self.u * s * self.v.adjoint()
    }
}

/// Numerical rank together with the cutoff used to decide it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    pub cutoff: f64,
    /// Some singular value lies within 10% of the cutoff.
    pub near_tie: bool,
}

/// Orthonormal basis of a subspace of C^n; `basis` is n x d and d may be 0.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub ambient_dim: usize,
    pub basis: CMat,
    pub near_tie: bool,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: CMat::zeros(ambient_dim, 0),
            near_tie: false,
        }
    }

    /// Orthogonal projector `basis * basis*` onto the subspace.
    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }
}

/// Matrix index with the rank sequence rank(A^0), ..., rank(A^(k+1)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexResult {
    pub index: usize,
    pub rank_sequence: Vec<usize>,
}

pub fn svd(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SvdResult> {
    raw::svd(m.as_mat(), cfg)
}

pub fn rank(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<usize> {
    raw::rank(m.as_mat(), cfg)
}

pub fn rank_info(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<RankInfo> {
    raw::rank_info(m.as_mat(), cfg)
}

pub fn pinv(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    ComplexMatrix::from_mat(raw::pinv(m.as_mat(), cfg)?)
}

/// `(P_A, Q_A) = (A A^+, A^+ A)`.
pub fn projectors(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let x = raw::pinv(a.as_mat(), cfg)?;
    let p = a.as_mat() * &x;
    let q = &x * a.as_mat();
    Ok((ComplexMatrix::from_mat(p)?, ComplexMatrix::from_mat(q)?))
}

pub fn matrix_index(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<IndexResult> {
    a.require_square("matrix_index argument")?;
    raw::matrix_index(a.as_mat(), cfg)
}

pub fn range_basis(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SubspaceBasis> {
    raw::range_basis(m.as_mat(), cfg)
}

pub fn null_basis(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SubspaceBasis> {
    raw::null_basis(m.as_mat(), cfg)
}

/// `||(I - Y Y*) X||_F`, the part of X's basis sticking out of Y.
pub fn containment_residual(x: &SubspaceBasis, y: &SubspaceBasis) -> Result<f64> {
    if x.ambient_dim != y.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "subspaces live in C^{} and C^{}",
            x.ambient_dim, y.ambient_dim
        )));
    }
    if x.is_empty() {
        return Ok(0.0);
    }
    let outside = &x.basis - y.projector() * &x.basis;
    Ok(outside.norm())
}

pub fn subspace_contained(x: &SubspaceBasis, y: &SubspaceBasis, cfg: &ToleranceConfig) -> Result<bool> {
    let res = containment_residual(x, y)?;
    Ok(res <= cfg.residual_tol * x.basis.norm().max(1.0))
}

pub fn subspace_equal(x: &SubspaceBasis, y: &SubspaceBasis, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(subspace_contained(x, y, cfg)? && subspace_contained(y, x, cfg)?)
}

/// A computed matrix and a bound on the size of the factors it came from.
pub(crate) struct Scaled {
    pub(crate) mat: CMat,
    pub(crate) scale: f64,
}

impl Scaled {
    pub(crate) fn leaf(mat: &CMat, cfg: &ToleranceConfig) -> Result<Self> {
        Ok(Self {
            scale: raw::spectral_norm(mat, cfg)?,
            mat: mat.clone(),
        })
    }

    pub(crate) fn mul(&self, rhs: &Scaled) -> Scaled {
        Scaled {
            mat: &self.mat * &rhs.mat,
            scale: self.scale * rhs.scale,
        }
    }

    pub(crate) fn pow(&self, k: usize) -> Scaled {
        Scaled {
            mat: raw::power(&self.mat, k),
            scale: self.scale.powi(k as i32),
        }
    }

    pub(crate) fn adjoint(&self) -> Scaled {
        Scaled {
            mat: self.mat.adjoint(),
            scale: self.scale,
        }
    }

    pub(crate) fn pinv(&self, cfg: &ToleranceConfig) -> Result<Scaled> {
        let mat = raw::pinv_scaled(&self.mat, self.scale, cfg)?;
        let scale = raw::spectral_norm(&mat, cfg)?;
        Ok(Scaled { mat, scale })
    }

    /// Orthogonal projector onto the range.
    pub(crate) fn range_projector(&self, cfg: &ToleranceConfig) -> Result<Scaled> {
        let mat = raw::range_projector(&self.mat, self.scale, cfg)?;
        Ok(Scaled { mat, scale: 1.0 })
    }

    pub(crate) fn range_basis(&self, cfg: &ToleranceConfig) -> Result<SubspaceBasis> {
        raw::range_basis_scaled(&self.mat, self.scale, cfg)
    }

    pub(crate) fn rank(&self, cfg: &ToleranceConfig) -> Result<usize> {
        raw::rank_scaled(&self.mat, self.scale, cfg)
    }

    pub(crate) fn index(&self, cfg: &ToleranceConfig) -> Result<usize> {
        Ok(raw::matrix_index_scaled(&self.mat, self.scale, cfg)?.index)
    }
}

/// The same primitives on bare matrices, which may be empty.
pub mod raw {
    use super::*;

    fn to_faer(m: &CMat) -> faer::Mat<C64> {
        faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    fn from_faer(m: faer::MatRef<'_, C64>) -> CMat {
        CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    // nalgebra's complex SVD loses accuracy on some rank-deficient inputs
    // (reconstruction errors near 1e-4 for 5x5 rank-2 matrices), so the
    // factorization itself comes from faer
    fn full_svd(m: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
        let (rows, cols) = m.shape();
        let dec = to_faer(m)
            .svd()
            .map_err(|_| Error::ConvergenceFailure { rows, cols })?;
        let sigma: Vec<f64> = dec.S().column_vector().iter().map(|z| z.re).collect();
        debug_assert!(sigma.windows(2).all(|w| w[0] >= w[1]));
        Ok((from_faer(dec.U()), sigma, from_faer(dec.V())))
    }

    pub fn svd(m: &CMat, _cfg: &ToleranceConfig) -> Result<SvdResult> {
        check_finite(m)?;
        let (rows, cols) = m.shape();
        let p = rows.min(cols);
        if p == 0 || m.iter().all(|z| *z == C64::default()) {
            return Ok(SvdResult {
                u: CMat::identity(rows, rows),
                singular_values: vec![0.0; p],
                v: CMat::identity(cols, cols),
            });
        }
        let (u, singular_values, v) = full_svd(m)?;
        Ok(SvdResult { u, singular_values, v })
    }

    /// Extends n x d orthonormal columns to an n x n unitary matrix; the
    /// first d columns are returned unchanged.
    pub fn orthonormal_completion(q: &CMat) -> CMat {
        let (n, d) = q.shape();
        if d >= n {
            return q.clone();
        }
        let mut out = CMat::zeros(n, n);
        out.columns_mut(0, d).copy_from(q);
        let tail = if d == 0 {
            CMat::identity(n, n)
        } else {
            // trailing left singular vectors of q span the complement of its range
            let (u, _, _) = full_svd(q).expect("SVD of orthonormal columns");
            let complement = u.columns(d, n - d).into_owned();
            // one round of reorthogonalization against q
            let c = &complement - q * (q.adjoint() * &complement);
            gram_schmidt(&c)
        };
        out.columns_mut(d, n - d).copy_from(&tail);
        out
    }

    fn gram_schmidt(c: &CMat) -> CMat {
        let mut out = c.clone();
        for j in 0..out.ncols() {
            for i in 0..j {
                let proj = out.column(i).dotc(&out.column(j));
                let col_i = out.column(i).into_owned();
                let mut col_j = out.column_mut(j);
                col_j -= col_i * proj;
            }
            let norm = out.column(j).norm();
            out.column_mut(j).unscale_mut(norm);
        }
        out
    }

    /// Largest singular value.
    pub fn spectral_norm(m: &CMat, cfg: &ToleranceConfig) -> Result<f64> {
        Ok(svd(m, cfg)?.sigma_max())
    }

    fn decide(s: &SvdResult, rows: usize, cols: usize, scale: f64, cfg: &ToleranceConfig) -> RankInfo {
        let sigma_max = s.sigma_max().max(scale);
        let cutoff = cfg.rank_cutoff(rows, cols, sigma_max);
        let sv = &s.singular_values;
        let rank = if sigma_max == 0.0 {
            0
        } else {
            sv.iter().filter(|&&x| x > cutoff).count()
        };
        let near_tie = cutoff > 0.0 && sv.iter().any(|&x| (x - cutoff).abs() <= 0.1 * cutoff);
        if near_tie {
            log::warn!("rank decision near cutoff {cutoff:e} for {rows}x{cols} matrix");
        }
        RankInfo {
            rank,
            cutoff,
            near_tie,
        }
    }

    pub fn rank_info(m: &CMat, cfg: &ToleranceConfig) -> Result<RankInfo> {
        rank_info_scaled(m, 0.0, cfg)
    }

    /// Rank decision for a computed product. `scale` bounds the size of the
    /// factors it was formed from (product of their spectral norms); the
    /// cutoff is taken relative to `max(sigma_max(m), scale)` so round-off
    /// left in a product that vanishes exactly is not counted as rank.
    pub fn rank_info_scaled(m: &CMat, scale: f64, cfg: &ToleranceConfig) -> Result<RankInfo> {
        let s = svd(m, cfg)?;
        Ok(decide(&s, m.nrows(), m.ncols(), scale, cfg))
    }

    pub fn rank(m: &CMat, cfg: &ToleranceConfig) -> Result<usize> {
        Ok(rank_info(m, cfg)?.rank)
    }

    pub fn rank_scaled(m: &CMat, scale: f64, cfg: &ToleranceConfig) -> Result<usize> {
        Ok(rank_info_scaled(m, scale, cfg)?.rank)
    }

    pub fn pinv(m: &CMat, cfg: &ToleranceConfig) -> Result<CMat> {
        pinv_scaled(m, 0.0, cfg)
    }

    pub fn pinv_scaled(m: &CMat, scale: f64, cfg: &ToleranceConfig) -> Result<CMat> {
        let (rows, cols) = m.shape();
        let s = svd(m, cfg)?;
        let r = decide(&s, rows, cols, scale, cfg).rank;
        let mut vs = s.v.columns(0, r).into_owned();
        for (j, sigma) in s.singular_values[..r].iter().enumerate() {
            vs.column_mut(j).unscale_mut(*sigma);
        }
        Ok(vs * s.u.columns(0, r).adjoint())
    }

    /// Orthogonal projector onto R(M).
    pub fn range_projector(m: &CMat, scale: f64, cfg: &ToleranceConfig) -> Result<CMat> {
        Ok(range_basis_scaled(m, scale, cfg)?.projector())
    }

    pub fn power(a: &CMat, k: usize) -> CMat {
        assert_eq!(a.nrows(), a.ncols(), "power of a non-square matrix");
        let mut out = CMat::identity(a.nrows(), a.nrows());
        for _ in 0..k {
            out = &out * a;
        }
        out
    }

    pub fn matrix_index(a: &CMat, cfg: &ToleranceConfig) -> Result<IndexResult> {
        let scale = spectral_norm(a, cfg)?;
        matrix_index_scaled(a, scale, cfg)
    }

    /// Index of `a`, deciding rank(a^j) relative to `base_scale^j`.
    pub fn matrix_index_scaled(a: &CMat, base_scale: f64, cfg: &ToleranceConfig) -> Result<IndexResult> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::NotSquare {
                what: "matrix_index argument",
                rows: n,
                cols: a.ncols(),
            });
        }
        let mut power = CMat::identity(n, n);
        let mut ranks = vec![n];
        let mut scale = 1.0;
        for k in 0..=n {
            power = &power * a;
            scale *= base_scale;
            let next = rank_scaled(&power, scale, cfg)?;
            ranks.push(next);
            if next == ranks[k] {
                return Ok(IndexResult {
                    index: k,
                    rank_sequence: ranks,
                });
            }
        }
        Err(Error::Decomposition(format!(
            "rank sequence {ranks:?} did not stabilize within {n} powers"
        )))
    }

    pub fn range_basis(m: &CMat, cfg: &ToleranceConfig) -> Result<SubspaceBasis> {
        range_basis_scaled(m, 0.0, cfg)
    }

    pub fn range_basis_scaled(m: &CMat, scale: f64, cfg: &ToleranceConfig) -> Result<SubspaceBasis> {
        let s = svd(m, cfg)?;
        let info = decide(&s, m.nrows(), m.ncols(), scale, cfg);
        Ok(SubspaceBasis {
            ambient_dim: m.nrows(),
            basis: s.u.columns(0, info.rank).into_owned(),
            near_tie: info.near_tie,
        })
    }

    pub fn null_basis(m: &CMat, cfg: &ToleranceConfig) -> Result<SubspaceBasis> {
        null_basis_scaled(m, 0.0, cfg)
    }

    pub fn null_basis_scaled(m: &CMat, scale: f64, cfg: &ToleranceConfig) -> Result<SubspaceBasis> {
        let s = svd(m, cfg)?;
        let info = decide(&s, m.nrows(), m.ncols(), scale, cfg);
        let n = m.ncols();
        Ok(SubspaceBasis {
            ambient_dim: n,
            basis: s.v.columns(info.rank, n - info.rank).into_owned(),
            near_tie: info.near_tie,
        })
    }

    pub fn smallest_singular_value(m: &CMat, cfg: &ToleranceConfig) -> Result<f64> {
        let s = svd(m, cfg)?;
        Ok(s.singular_values.last().copied().unwrap_or(0.0))
    }
}
