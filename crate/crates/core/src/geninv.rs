//! Generalized inverses: the inverse of A with respect to B,
//! `A^(B) = (A B B^+)^+`, and the families it specializes to (BT, core-EP
//! and their W-weighted versions), plus the Drazin inverse.
//!
//! Several inverses can be reached by more than one route. The routes are
//! kept separate so the test-suite can cross-check them; nothing here
//! averages or reconciles them.

use std::fmt;
use std::str::FromStr;

use crate::decomp::{block_pinv, core_ep_pair_decomposition, pair_svd_decomposition, BlockTriangularForm};
use crate::error::{Error, Result};
use crate::matcore::raw;
use crate::matcore::{CMat, ComplexMatrix, Scaled, ToleranceConfig};

/// Routes to `A^(B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GeninvRoute {
    /// `(A B B^+)^+`
    #[default]
    Definition,
    /// `V [(S_A A1)^+ 0; 0 0] U*` from the pair SVD decomposition.
    PairSvd,
    /// Block pseudoinverse of `A B B^+` in core-EP pair coordinates.
    CoreEpPair,
    /// `B (A B)^+`. Only equal to the others when `rank(AB) = rank(B)`.
    ProductForm,
}

impl GeninvRoute {
    pub const ALL: [GeninvRoute; 4] = [
        GeninvRoute::Definition,
        GeninvRoute::PairSvd,
        GeninvRoute::CoreEpPair,
        GeninvRoute::ProductForm,
    ];
}

/// Routes to the core-EP inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CoreEpRoute {
    /// `A^k ((A*)^k A^(k+1))^+ (A*)^k`
    #[default]
    DirectFormula,
    /// `A^D (A A^D)^+`
    ViaDrazin,
    /// `A^(A^k)`
    ViaGeninvWrt,
}

impl CoreEpRoute {
    pub const ALL: [CoreEpRoute; 3] = [
        CoreEpRoute::DirectFormula,
        CoreEpRoute::ViaDrazin,
        CoreEpRoute::ViaGeninvWrt,
    ];
}

/// Routes to the W-weighted core-EP inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WeightedCoreEpRoute {
    /// `(W A W (AW)^k ((AW)^k)^+)^+`, `k = max(Ind(AW), Ind(WA))`
    #[default]
    DirectFormula,
    /// `(W A W P_{(AW)^k})^+`, `k = Ind(AW)`
    ProjectorFormula,
    /// `(WAW)^((AW)^k)`, square inputs only
    ViaGeninvWrt,
}

impl WeightedCoreEpRoute {
    pub const ALL: [WeightedCoreEpRoute; 3] = [
        WeightedCoreEpRoute::DirectFormula,
        WeightedCoreEpRoute::ProjectorFormula,
        WeightedCoreEpRoute::ViaGeninvWrt,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownRoute(pub String);

impl fmt::Display for UnknownRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown route '{}'", self.0)
    }
}

impl std::error::Error for UnknownRoute {}

macro_rules! route_names {
    ($ty:ty { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $(Self::$variant => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = UnknownRoute;

            fn from_str(s: &str) -> std::result::Result<Self, UnknownRoute> {
                match s {
                    $($name => Ok(Self::$variant),)+
                    other => Err(UnknownRoute(other.to_string())),
                }
            }
        }
    };
}

route_names!(GeninvRoute {
    Definition => "definition",
    PairSvd => "pair-svd",
    CoreEpPair => "core-ep-pair",
    ProductForm => "product-form",
});

route_names!(CoreEpRoute {
    DirectFormula => "direct",
    ViaDrazin => "via-drazin",
    ViaGeninvWrt => "via-geninv-wrt",
});

route_names!(WeightedCoreEpRoute {
    DirectFormula => "direct",
    ProjectorFormula => "projector",
    ViaGeninvWrt => "via-geninv-wrt",
});

fn wrap(mat: CMat) -> Result<ComplexMatrix> {
    ComplexMatrix::from_mat(mat)
}

fn require_same_square(a: &ComplexMatrix, b: &ComplexMatrix, names: (&'static str, &'static str)) -> Result<()> {
    a.require_square(names.0)?;
    b.require_square(names.1)?;
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} is {}x{} but {} is {}x{}",
            names.0,
            a.rows(),
            a.cols(),
            names.1,
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

fn require_weight_shape(a: &ComplexMatrix, w: &ComplexMatrix) -> Result<()> {
    let (m, n) = a.shape();
    if w.shape() != (n, m) {
        return Err(Error::DimensionMismatch(format!(
            "A is {m}x{n}, so W must be {n}x{m} (got {}x{})",
            w.rows(),
            w.cols()
        )));
    }
    Ok(())
}

/// Blocks cut out of an n x n problem keep the parent's rank cutoff. The
/// cutoff grows with the larger dimension of the matrix it is applied to,
/// so the scale is stretched by `n / max(block dims)` to compensate.
fn block_scale(scale: f64, parent: usize, block: &CMat) -> f64 {
    scale * parent as f64 / block.nrows().max(block.ncols()).max(1) as f64
}

/// `(A B B^+)^+` for possibly computed operands.
fn geninv_definition(a: &Scaled, b: &Scaled, cfg: &ToleranceConfig) -> Result<CMat> {
    let pb = b.range_projector(cfg)?;
    Ok(a.mul(&pb).pinv(cfg)?.mat)
}

/// The generalized inverse of A with respect to B.
pub fn geninv_wrt(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
    route: GeninvRoute,
) -> Result<ComplexMatrix> {
    require_same_square(a, b, ("A", "B"))?;
    let sa = Scaled::leaf(a.as_mat(), cfg)?;
    let sb = Scaled::leaf(b.as_mat(), cfg)?;
    match route {
        GeninvRoute::Definition => wrap(geninv_definition(&sa, &sb, cfg)?),
        GeninvRoute::ProductForm => wrap(&sb.mat * sa.mul(&sb).pinv(cfg)?.mat),
        GeninvRoute::PairSvd => {
            let dec = pair_svd_decomposition(a, b, cfg)?;
            let n = a.rows();
            let small = dec.scaled_a1();
            let inner = raw::pinv_scaled(&small, block_scale(sa.scale, n, &small), cfg)?;
            let mut mid = CMat::zeros(n, n);
            mid.view_mut((0, 0), (dec.s, dec.r)).copy_from(&inner);
            wrap(&dec.v * mid * dec.u.adjoint())
        }
        GeninvRoute::CoreEpPair => {
            let dec = core_ep_pair_decomposition(a, b, cfg)?;
            let n = a.rows();
            let p_b2 = raw::range_projector(&dec.b2, block_scale(sb.scale, n, &dec.b2), cfg)?;
            let c2 = &dec.a12 * &p_b2;
            let c3 = &dec.a2 * &p_b2;
            let c3_scale = block_scale(sa.scale, n, &c3);
            let form = BlockTriangularForm::with_c3_scale(
                dec.u.clone(),
                dec.v.clone(),
                dec.a1.clone(),
                c2,
                c3,
                c3_scale,
                cfg,
            )?;
            block_pinv(&form, cfg)
        }
    }
}

fn drazin_scaled(a: &Scaled, cfg: &ToleranceConfig) -> Result<Scaled> {
    let k = a.index(cfg)?;
    let ak = a.pow(k);
    let core = a.pow(2 * k + 1).pinv(cfg)?;
    Ok(ak.mul(&core).mul(&ak))
}

/// Drazin inverse `A^k (A^(2k+1))^+ A^k`, `k = Ind(A)`.
pub fn drazin(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    a.require_square("A")?;
    let sa = Scaled::leaf(a.as_mat(), cfg)?;
    wrap(drazin_scaled(&sa, cfg)?.mat)
}

pub fn core_ep(a: &ComplexMatrix, cfg: &ToleranceConfig, route: CoreEpRoute) -> Result<ComplexMatrix> {
    a.require_square("A")?;
    let sa = Scaled::leaf(a.as_mat(), cfg)?;
    let out = match route {
        CoreEpRoute::DirectFormula => {
            let k = sa.index(cfg)?;
            let ak = sa.pow(k);
            let akh = ak.adjoint();
            let middle = akh.mul(&sa.pow(k + 1)).pinv(cfg)?;
            ak.mul(&middle).mul(&akh).mat
        }
        CoreEpRoute::ViaGeninvWrt => {
            let k = sa.index(cfg)?;
            geninv_definition(&sa, &sa.pow(k), cfg)?
        }
        CoreEpRoute::ViaDrazin => {
            let d = drazin_scaled(&sa, cfg)?;
            d.mul(&sa.mul(&d).pinv(cfg)?).mat
        }
    };
    wrap(out)
}

/// BT inverse `(A P_A)^+`.
pub fn bt(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    a.require_square("A")?;
    let sa = Scaled::leaf(a.as_mat(), cfg)?;
    wrap(geninv_definition(&sa, &sa, cfg)?)
}

fn w_bt_scaled(a: &Scaled, w: &Scaled, cfg: &ToleranceConfig) -> Result<CMat> {
    let aw = a.mul(w);
    let wawaw = w.mul(&aw).mul(&aw);
    Ok(wawaw.mul(&aw.pinv(cfg)?).pinv(cfg)?.mat)
}

/// W-weighted BT inverse `(W A W A W (AW)^+)^+` for A m x n, W n x m.
pub fn w_bt(a: &ComplexMatrix, w: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_weight_shape(a, w)?;
    let sa = Scaled::leaf(a.as_mat(), cfg)?;
    let sw = Scaled::leaf(w.as_mat(), cfg)?;
    wrap(w_bt_scaled(&sa, &sw, cfg)?)
}

/// `(Ind(AW), Ind(WA))`.
pub fn weighted_indices(a: &ComplexMatrix, w: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<(usize, usize)> {
    require_weight_shape(a, w)?;
    let sa = Scaled::leaf(a.as_mat(), cfg)?;
    let sw = Scaled::leaf(w.as_mat(), cfg)?;
    Ok((sa.mul(&sw).index(cfg)?, sw.mul(&sa).index(cfg)?))
}

fn w_core_ep_scaled(a: &Scaled, w: &Scaled, cfg: &ToleranceConfig, route: WeightedCoreEpRoute) -> Result<CMat> {
    let aw = a.mul(w);
    let waw = w.mul(a).mul(w);
    let ind_aw = aw.index(cfg)?;
    match route {
        WeightedCoreEpRoute::DirectFormula => {
            let k = ind_aw.max(w.mul(a).index(cfg)?);
            let awk = aw.pow(k);
            let proj = awk.mul(&awk.pinv(cfg)?);
            Ok(waw.mul(&proj).pinv(cfg)?.mat)
        }
        WeightedCoreEpRoute::ProjectorFormula => {
            let proj = aw.pow(ind_aw).range_projector(cfg)?;
            Ok(waw.mul(&proj).pinv(cfg)?.mat)
        }
        WeightedCoreEpRoute::ViaGeninvWrt => {
            let k = ind_aw.max(w.mul(a).index(cfg)?);
            geninv_definition(&waw, &aw.pow(k), cfg)
        }
    }
}

/// W-weighted core-EP inverse for A m x n, W n x m (W nonzero).
pub fn w_core_ep(
    a: &ComplexMatrix,
    w: &ComplexMatrix,
    cfg: &ToleranceConfig,
    route: WeightedCoreEpRoute,
) -> Result<ComplexMatrix> {
    require_weight_shape(a, w)?;
    if route == WeightedCoreEpRoute::ViaGeninvWrt && !a.is_square() {
        return Err(Error::NotSquare {
            what: "A (via-geninv-wrt route)",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let sw = Scaled::leaf(w.as_mat(), cfg)?;
    if sw.scale == 0.0 {
        return Err(Error::ZeroMatrix("W"));
    }
    let sa = Scaled::leaf(a.as_mat(), cfg)?;
    wrap(w_core_ep_scaled(&sa, &sw, cfg, route)?)
}

/// Shared skeleton of the two block-form representations: decompose (A, W),
/// apply `inner` to `(S_A A1, S_W W1)` and embed as `U [X 0; 0 0] V*`.
fn embed_weighted_block<F>(a: &ComplexMatrix, w: &ComplexMatrix, cfg: &ToleranceConfig, inner: F) -> Result<ComplexMatrix>
where
    F: Fn(&Scaled, &Scaled) -> Result<CMat>,
{
    require_same_square(a, w, ("A", "W"))?;
    let dec = pair_svd_decomposition(a, w, cfg)?;
    let n = a.rows();
    let small_a = dec.scaled_a1();
    let small_w = dec.scaled_b1();
    let small_a = Scaled {
        scale: block_scale(dec.sigma_a[0], n, &small_a),
        mat: small_a,
    };
    let small_w = Scaled {
        scale: block_scale(dec.sigma_b[0], n, &small_w),
        mat: small_w,
    };
    let x = inner(&small_a, &small_w)?;
    let mut mid = CMat::zeros(n, n);
    mid.view_mut((0, 0), (dec.r, dec.s)).copy_from(&x);
    wrap(&dec.u * mid * dec.v.adjoint())
}

/// `U [(S_A A1)^{core-EP, S_W W1} 0; 0 0] V*` from the pair SVD of (A, W).
pub fn w_core_ep_block_form(a: &ComplexMatrix, w: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    embed_weighted_block(a, w, cfg, |sa, sw| {
        w_core_ep_scaled(sa, sw, cfg, WeightedCoreEpRoute::DirectFormula)
    })
}

/// `U [(S_A A1)^{BT, S_W W1} 0; 0 0] V*` from the pair SVD of (A, W).
pub fn w_bt_block_form(a: &ComplexMatrix, w: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    embed_weighted_block(a, w, cfg, |sa, sw| w_bt_scaled(sa, sw, cfg))
}
