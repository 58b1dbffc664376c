//! Executable characterizations. Every `check_*` evaluates a list of
//! matrix identities and subspace relations for a candidate X and reports
//! each one with its residual and threshold; none of them panics on a
//! failing candidate.
//!
//! Residuals are Frobenius norms. Identity conditions use the threshold
//! `residual_tol * max(1, ||inputs||_F)`; subspace relations compare
//! orthonormal bases and use `residual_tol * max(1, ||basis||_F)`.
//!
//! Conditions carry a group name. Where a characterization lists several
//! equivalent systems, each system is a group, so callers can compare the
//! per-group verdicts on the same candidate.

use std::fmt;

use serde::Serialize;

use crate::decomp::pair_svd_decomposition;
use crate::error::{Error, Result};
use crate::geninv::{self, GeninvRoute, WeightedCoreEpRoute};
use crate::matcore::{containment_residual, raw, CMat, ComplexMatrix, Scaled, SubspaceBasis, ToleranceConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub group: String,
    pub label: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub conditions: Vec<Condition>,
    pub overall: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn condition(&self, label: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.label == label)
    }

    /// Verdict of a single condition, by label.
    pub fn passed(&self, label: &str) -> Option<bool> {
        self.condition(label).map(|c| c.pass)
    }

    /// Group names in first-appearance order.
    pub fn groups(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in &self.conditions {
            if !out.contains(&c.group.as_str()) {
                out.push(&c.group);
            }
        }
        out
    }

    pub fn group_passed(&self, group: &str) -> Option<bool> {
        let mut seen = false;
        let mut all = true;
        for c in self.conditions.iter().filter(|c| c.group == group) {
            seen = true;
            all &= c.pass;
        }
        seen.then_some(all)
    }

    pub fn group_verdicts(&self) -> Vec<(String, bool)> {
        self.groups()
            .into_iter()
            .map(|g| (g.to_string(), self.group_passed(g).unwrap_or(false)))
            .collect()
    }

    pub fn failing(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.pass)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorem: {}", self.theorem_id)?;
        for c in &self.conditions {
            write!(
                f,
                "  [{}] {:<28} {:<40} residual={:.3e} threshold={:.3e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.group,
                c.label,
                c.residual,
                c.threshold
            )?;
            if let Some(note) = &c.note {
                write!(f, "  ({note})")?;
            }
            writeln!(f)?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning: {w}")?;
        }
        write!(f, "overall: {}", if self.overall { "PASS" } else { "FAIL" })
    }
}

struct Builder<'c> {
    cfg: &'c ToleranceConfig,
    scale: f64,
    group: String,
    conditions: Vec<Condition>,
    warnings: Vec<String>,
}

impl<'c> Builder<'c> {
    fn new(cfg: &'c ToleranceConfig, inputs: &[&ComplexMatrix]) -> Self {
        let scale = inputs.iter().map(|m| m.frobenius_norm()).fold(1.0, f64::max);
        Self {
            cfg,
            scale,
            group: String::new(),
            conditions: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn group(&mut self, name: &str) -> &mut Self {
        self.group = name.to_string();
        self
    }

    fn push(&mut self, label: &str, residual: f64, threshold: f64, note: Option<String>) {
        self.conditions.push(Condition {
            group: self.group.clone(),
            label: label.to_string(),
            residual,
            threshold,
            pass: residual <= threshold,
            note,
        });
    }

    fn equal(&mut self, label: &str, lhs: &CMat, rhs: &CMat) {
        debug_assert_eq!(lhs.shape(), rhs.shape(), "{label}");
        let threshold = self.cfg.residual_tol * self.scale;
        self.push(label, (lhs - rhs).norm(), threshold, None);
    }

    fn watch(&mut self, what: &str, basis: &SubspaceBasis) {
        if basis.near_tie {
            self.warnings
                .push(format!("rank decision for {what} is within 10% of the cutoff"));
        }
    }

    fn contained(&mut self, label: &str, x: &SubspaceBasis, y: &SubspaceBasis) -> Result<()> {
        self.watch(label, x);
        self.watch(label, y);
        let residual = containment_residual(x, y)?;
        let threshold = self.cfg.residual_tol * x.basis.norm().max(1.0);
        let note = format!("dims {} in {}", x.dim(), y.dim());
        self.push(label, residual, threshold, Some(note));
        Ok(())
    }

    fn same_space(&mut self, label: &str, x: &SubspaceBasis, y: &SubspaceBasis) -> Result<()> {
        self.watch(label, x);
        self.watch(label, y);
        let residual = containment_residual(x, y)?.max(containment_residual(y, x)?);
        let threshold = self.cfg.residual_tol * x.basis.norm().max(y.basis.norm()).max(1.0);
        let note = format!("dims {} vs {}", x.dim(), y.dim());
        self.push(label, residual, threshold, Some(note));
        Ok(())
    }

    /// Biconditionals are judged by verdict equality of the two sides.
    fn iff(&mut self, label: &str, lhs: bool, rhs: bool) {
        let note = format!("left side {lhs}, right side {rhs}");
        self.push(label, if lhs == rhs { 0.0 } else { 1.0 }, 0.5, Some(note));
    }

    fn is_zero(&self, m: &CMat) -> bool {
        m.norm() <= self.cfg.residual_tol * self.scale
    }

    fn finish(self, theorem_id: &str) -> VerificationReport {
        let overall = self.conditions.iter().all(|c| c.pass);
        VerificationReport {
            theorem_id: theorem_id.to_string(),
            conditions: self.conditions,
            overall,
            warnings: self.warnings,
        }
    }
}

fn leaf(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Scaled> {
    Scaled::leaf(m.as_mat(), cfg)
}

/// Range of a candidate matrix; candidates are judged on their own scale.
fn range_of(m: &CMat, cfg: &ToleranceConfig) -> Result<SubspaceBasis> {
    raw::range_basis(m, cfg)
}

fn require_shape(what: &str, m: &ComplexMatrix, shape: (usize, usize)) -> Result<()> {
    if m.shape() != shape {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be {}x{} (got {}x{})",
            shape.0,
            shape.1,
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn require_pair(a: &ComplexMatrix, b: &ComplexMatrix, x: Option<&ComplexMatrix>) -> Result<()> {
    a.require_square("A")?;
    require_shape("B", b, a.shape())?;
    if let Some(x) = x {
        require_shape("X", x, a.shape())?;
    }
    Ok(())
}

fn require_weighted(a: &ComplexMatrix, w: &ComplexMatrix, x: &ComplexMatrix) -> Result<()> {
    let (m, n) = a.shape();
    require_shape("W", w, (n, m))?;
    require_shape("X", x, (m, n))
}

pub const PENROSE_I: &str = "AXA=A";
pub const PENROSE_II: &str = "XAX=X";
pub const PENROSE_III: &str = "(AX)*=AX";
pub const PENROSE_IV: &str = "(XA)*=XA";

/// The four Penrose equations; `passed(PENROSE_I)` / `passed(PENROSE_II)`
/// give membership in the inner and outer inverse classes.
pub fn check_penrose(a: &ComplexMatrix, x: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<VerificationReport> {
    require_shape("X", x, (a.cols(), a.rows()))?;
    let (a, x) = (a.as_mat(), x.as_mat());
    let mut b = Builder::new(cfg, &[]);
    b.scale = 1f64.max(a.norm()).max(x.norm());
    let ax = a * x;
    let xa = x * a;
    b.group("penrose");
    b.equal(PENROSE_I, &(&ax * a), a);
    b.equal(PENROSE_II, &(&xa * x), x);
    b.equal(PENROSE_III, &ax.adjoint(), &ax);
    b.equal(PENROSE_IV, &xa.adjoint(), &xa);
    Ok(b.finish("penrose"))
}

/// Range and null space of the inverse with respect to B, and its
/// description as the outer inverse with those two spaces.
pub fn check_geninv_wrt_spaces(
    a: &ComplexMatrix,
    bm: &ComplexMatrix,
    x: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_pair(a, bm, Some(x))?;
    let (sa, sb) = (leaf(a, cfg)?, leaf(bm, cfg)?);
    let mut b = Builder::new(cfg, &[a, bm, x]);
    let pb = sb.range_projector(cfg)?;
    let range_target = pb.mul(&sa.adjoint()).range_basis(cfg)?;
    // N(M) = R(M*)^perp, so null spaces are compared through adjoint ranges
    let null_target = sa.mul(&sb).range_basis(cfg)?;
    let xm = x.as_mat();
    b.group("spaces");
    b.same_space("R(X)=R(BB^+A*)", &range_of(xm, cfg)?, &range_target)?;
    b.same_space("N(X)=N((AB)*)", &range_of(&xm.adjoint(), cfg)?, &null_target)?;
    b.group("outer-inverse");
    b.equal("XAX=X", &(xm * a.as_mat() * xm), xm);
    Ok(b.finish("geninv-spaces"))
}

/// AX is the orthogonal projector onto R(AB); XA is the oblique projector
/// onto R(BB^+A*) along N(B*A*A).
pub fn check_projector_theorem(
    a: &ComplexMatrix,
    bm: &ComplexMatrix,
    x: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_pair(a, bm, Some(x))?;
    let (sa, sb) = (leaf(a, cfg)?, leaf(bm, cfg)?);
    let mut b = Builder::new(cfg, &[a, bm, x]);
    let (am, xm) = (a.as_mat(), x.as_mat());
    let ax = am * xm;
    let xa = xm * am;
    b.group("AX");
    b.equal("(AX)^2=AX", &(&ax * &ax), &ax);
    b.equal("(AX)*=AX", &ax.adjoint(), &ax);
    b.same_space("R(AX)=R(AB)", &range_of(&ax, cfg)?, &sa.mul(&sb).range_basis(cfg)?)?;
    b.group("XA");
    b.equal("(XA)^2=XA", &(&xa * &xa), &xa);
    let pb = sb.range_projector(cfg)?;
    b.same_space("R(XA)=R(BB^+A*)", &range_of(&xa, cfg)?, &pb.mul(&sa.adjoint()).range_basis(cfg)?)?;
    // N(XA) = N(B*A*A)  <=>  R((XA)*) = R(A*AB)
    let a_star_a_b = sa.adjoint().mul(&sa).mul(&sb);
    b.same_space("N(XA)=N(B*A*A)", &range_of(&xa.adjoint(), cfg)?, &a_star_a_b.range_basis(cfg)?)?;
    Ok(b.finish("projectors"))
}

/// `XA = (ABB^+)^+ A` together with `R(X*) ⊆ R(AB)`.
pub fn check_range_system(
    a: &ComplexMatrix,
    bm: &ComplexMatrix,
    x: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_pair(a, bm, Some(x))?;
    let (sa, sb) = (leaf(a, cfg)?, leaf(bm, cfg)?);
    let mut b = Builder::new(cfg, &[a, bm, x]);
    let (am, xm) = (a.as_mat(), x.as_mat());
    let abbp = sa.mul(&sb.range_projector(cfg)?).pinv(cfg)?;
    b.group("range-system");
    b.equal("XA=(ABB^+)^+A", &(xm * am), &(&abbp.mat * am));
    b.contained("R(X*)⊆R(AB)", &range_of(&xm.adjoint(), cfg)?, &sa.mul(&sb).range_basis(cfg)?)?;
    Ok(b.finish("range-system"))
}

/// `XAX = X`, `AX = P_AB`, `XA = B (AB)^+ A`.
pub fn check_product_system(
    a: &ComplexMatrix,
    bm: &ComplexMatrix,
    x: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_pair(a, bm, Some(x))?;
    let (sa, sb) = (leaf(a, cfg)?, leaf(bm, cfg)?);
    let mut b = Builder::new(cfg, &[a, bm, x]);
    let (am, xm) = (a.as_mat(), x.as_mat());
    let ab = sa.mul(&sb);
    b.group("product-system");
    b.equal("XAX=X", &(xm * am * xm), xm);
    b.equal("AX=P_AB", &(am * xm), &ab.range_projector(cfg)?.mat);
    b.equal("XA=B(AB)^+A", &(xm * am), &(bm.as_mat() * ab.pinv(cfg)?.mat * am));
    Ok(b.finish("product-system"))
}

/// Three equivalent descriptions of the inverse with respect to B: the
/// formula itself, a three-equation system, and a projector-plus-range
/// system. Each is a group; on any candidate the verdicts should coincide.
pub fn check_equiv_theorem(
    a: &ComplexMatrix,
    bm: &ComplexMatrix,
    x: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_pair(a, bm, Some(x))?;
    let (sa, sb) = (leaf(a, cfg)?, leaf(bm, cfg)?);
    let mut b = Builder::new(cfg, &[a, bm, x]);
    let (am, xm) = (a.as_mat(), x.as_mat());
    let pb = sb.range_projector(cfg)?;
    let abbp = sa.mul(&pb).pinv(cfg)?;
    b.group("formula");
    b.equal("X=(ABB^+)^+", xm, &abbp.mat);
    b.group("three-equations");
    b.equal("XAX=X", &(xm * am * xm), xm);
    b.equal("AX=A(ABB^+)^+", &(am * xm), &(am * &abbp.mat));
    b.equal("XA=(ABB^+)^+A", &(xm * am), &(&abbp.mat * am));
    b.group("projector-range");
    b.equal("AX=P_AB", &(am * xm), &sa.mul(&sb).range_projector(cfg)?.mat);
    b.contained("R(X)⊆R(BB^+A*)", &range_of(xm, cfg)?, &pb.mul(&sa.adjoint()).range_basis(cfg)?)?;
    Ok(b.finish("equivalence"))
}

fn drazin_scaled(sa: &Scaled, a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Scaled> {
    let d = geninv::drazin(a, cfg)?;
    Scaled::leaf(d.as_mat(), cfg).map(|mut s| {
        // the Drazin inverse is a computed product: keep the factor scale
        s.scale = s.scale.max(sa.scale);
        s
    })
}

/// Core-EP inverse: the defining three equations, and the equivalent
/// system written with the Drazin inverse.
pub fn check_core_ep(a: &ComplexMatrix, x: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<VerificationReport> {
    a.require_square("A")?;
    require_shape("X", x, a.shape())?;
    let sa = leaf(a, cfg)?;
    let k = sa.index(cfg)?;
    let mut b = Builder::new(cfg, &[a, x]);
    let (am, xm) = (a.as_mat(), x.as_mat());
    let ax = am * xm;
    b.group("defining");
    b.equal("XAX=X", &(xm * am * xm), xm);
    b.equal("(AX)*=AX", &ax.adjoint(), &ax);
    b.equal("XA^(k+1)=A^k", &(xm * raw::power(am, k + 1)), &raw::power(am, k));
    let d = drazin_scaled(&sa, a, cfg)?;
    let add_p = sa.mul(&d).pinv(cfg)?;
    b.group("drazin-based");
    b.equal("XAX=X", &(xm * am * xm), xm);
    b.equal("AX=AA^D(AA^D)^+", &ax, &(am * &d.mat * &add_p.mat));
    b.equal("XA=A^D(AA^D)^+A", &(xm * am), &(&d.mat * &add_p.mat * am));
    Ok(b.finish("core-ep"))
}

pub fn check_drazin(a: &ComplexMatrix, x: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<VerificationReport> {
    a.require_square("A")?;
    require_shape("X", x, a.shape())?;
    let k = leaf(a, cfg)?.index(cfg)?;
    let mut b = Builder::new(cfg, &[a, x]);
    let (am, xm) = (a.as_mat(), x.as_mat());
    b.group("drazin");
    b.equal("XAX=X", &(xm * am * xm), xm);
    b.equal("AX=XA", &(am * xm), &(xm * am));
    b.equal("XA^(k+1)=A^k", &(xm * raw::power(am, k + 1)), &raw::power(am, k));
    Ok(b.finish("drazin"))
}

/// `XAX = X`, `AX = P_{A^2}`, `XA = A (A^2)^+ A`.
pub fn check_bt(a: &ComplexMatrix, x: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<VerificationReport> {
    a.require_square("A")?;
    require_shape("X", x, a.shape())?;
    let sa = leaf(a, cfg)?;
    let a2 = sa.pow(2);
    let mut b = Builder::new(cfg, &[a, x]);
    let (am, xm) = (a.as_mat(), x.as_mat());
    b.group("bt-system");
    b.equal("XAX=X", &(xm * am * xm), xm);
    b.equal("AX=P_(A^2)", &(am * xm), &a2.range_projector(cfg)?.mat);
    b.equal("XA=A(A^2)^+A", &(xm * am), &(am * a2.pinv(cfg)?.mat * am));
    Ok(b.finish("bt"))
}

struct Weighted {
    a: Scaled,
    w: Scaled,
    aw: Scaled,
    wa: Scaled,
    waw: Scaled,
}

impl Weighted {
    fn new(a: &ComplexMatrix, w: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let a = leaf(a, cfg)?;
        let w = leaf(w, cfg)?;
        let aw = a.mul(&w);
        let wa = w.mul(&a);
        let waw = wa.mul(&w);
        Ok(Self { a, w, aw, wa, waw })
    }
}

fn w_core_ep_system(b: &mut Builder<'_>, p: &Weighted, xm: &CMat, cfg: &ToleranceConfig) -> Result<()> {
    let k = p.aw.index(cfg)?.max(p.wa.index(cfg)?);
    b.group("system");
    b.equal(
        "WAWX=P_((WA)^k)",
        &(&p.waw.mat * xm),
        &p.wa.pow(k).range_projector(cfg)?.mat,
    );
    b.contained("R(X)⊆R((AW)^k)", &range_of(xm, cfg)?, &p.aw.pow(k).range_basis(cfg)?)?;
    Ok(())
}

/// Defining system of the W-weighted core-EP inverse
/// (`k = max(Ind(AW), Ind(WA))`).
pub fn check_w_core_ep_system(
    a: &ComplexMatrix,
    w: &ComplexMatrix,
    x: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_weighted(a, w, x)?;
    let p = Weighted::new(a, w, cfg)?;
    let mut b = Builder::new(cfg, &[a, w, x]);
    w_core_ep_system(&mut b, &p, x.as_mat(), cfg)?;
    Ok(b.finish("w-core-ep-system"))
}

/// The defining system plus the list of equivalent characterizations of the
/// W-weighted core-EP inverse, with `k = Ind(AW)`. Statements whose literal
/// form is suspect are also evaluated in a corrected reading, in groups
/// suffixed `-alt`. Only the defining system is evaluated for rectangular
/// inputs.
pub fn check_w_core_ep(
    a: &ComplexMatrix,
    w: &ComplexMatrix,
    x: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_weighted(a, w, x)?;
    let p = Weighted::new(a, w, cfg)?;
    let mut b = Builder::new(cfg, &[a, w, x]);
    let xm = x.as_mat();
    w_core_ep_system(&mut b, &p, xm, cfg)?;
    if !a.is_square() {
        b.warnings
            .push("equivalence list only defined for square A and W; evaluated the defining system only".into());
        return Ok(b.finish("w-core-ep"));
    }
    let k = p.aw.index(cfg)?;
    let awk = p.aw.pow(k);
    let proj = awk.range_projector(cfg)?;
    let mp = p.waw.mul(&proj).pinv(cfg)?;
    let waw = &p.waw.mat;
    let xwaw = xm * waw;
    let wawx = waw * xm;
    let outer = &xwaw * xm;
    let range_target = proj.mul(&p.waw.adjoint()).range_basis(cfg)?;
    let x_range = range_of(xm, cfg)?;
    let x_star_range = range_of(&xm.adjoint(), cfg)?;
    let w_awk1 = p.w.mul(&p.aw.pow(k + 1));

    b.group("formula");
    let reference = geninv::w_core_ep(a, w, cfg, WeightedCoreEpRoute::DirectFormula)?;
    b.equal("X=(WAW(AW)^k((AW)^k)^+)^+", xm, reference.as_mat());

    b.group("outer-inverse");
    b.equal("XWAWX=X", &outer, xm);
    b.same_space("R(X)=R(P_((AW)^k)(WAW)*)", &x_range, &range_target)?;
    // literal null space N(WAW [(AW)^k]*), compared as R(X*) = R((AW)^k (WAW)*)
    let literal_null = awk.mul(&p.waw.adjoint()).range_basis(cfg)?;
    b.same_space("N(X)=N(WAW[(AW)^k]*)", &x_star_range, &literal_null)?;

    b.group("outer-inverse-alt");
    b.equal("XWAWX=X", &outer, xm);
    b.same_space("R(X)=R(P_((AW)^k)(WAW)*)", &x_range, &range_target)?;
    b.same_space("N(X)=N((WAW(AW)^k)*)", &x_star_range, &p.waw.mul(&awk).range_basis(cfg)?)?;

    b.group("left-equation");
    b.equal("XWAW=(WAWP_((AW)^k))^+WAW", &xwaw, &(&mp.mat * waw));
    b.contained("R(X*)⊆R(W(AW)^(k+1))", &x_star_range, &w_awk1.range_basis(cfg)?)?;

    b.group("three-equations");
    b.equal("XWAWX=X", &outer, xm);
    b.equal("WAWX=WAW(WAWP_((AW)^k))^+", &wawx, &(waw * &mp.mat));
    b.equal("XWAW=X(WAWP_((AW)^k))^+", &xwaw, &(xm * &mp.mat));

    b.group("three-equations-alt");
    b.equal("XWAWX=X", &outer, xm);
    b.equal("WAWX=WAW(WAWP_((AW)^k))^+", &wawx, &(waw * &mp.mat));
    b.equal("XWAW=(WAWP_((AW)^k))^+WAW", &xwaw, &(&mp.mat * waw));

    b.group("projector-range");
    b.equal("WAWX=P_(W(AW)^(k+1))", &wawx, &w_awk1.range_projector(cfg)?.mat);
    b.contained("R(X)⊆R(P_((AW)^k)(WAW)*)", &x_range, &range_target)?;

    Ok(b.finish("w-core-ep"))
}

fn w_bt_system(b: &mut Builder<'_>, p: &Weighted, xm: &CMat, cfg: &ToleranceConfig) -> Result<()> {
    let proj = p.aw.range_projector(cfg)?;
    let mp = p.waw.mul(&proj).pinv(cfg)?;
    b.group("system");
    b.equal("AWX=AW(WAWP_AW)^+", &(&p.aw.mat * xm), &(&p.aw.mat * &mp.mat));
    b.contained(
        "R(X)⊆R(P_AW(WAW)*)",
        &range_of(xm, cfg)?,
        &proj.mul(&p.waw.adjoint()).range_basis(cfg)?,
    )?;
    Ok(())
}

/// Defining system of the W-weighted BT inverse.
pub fn check_w_bt_system(
    a: &ComplexMatrix,
    w: &ComplexMatrix,
    x: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_weighted(a, w, x)?;
    let p = Weighted::new(a, w, cfg)?;
    let mut b = Builder::new(cfg, &[a, w, x]);
    w_bt_system(&mut b, &p, x.as_mat(), cfg)?;
    Ok(b.finish("w-bt-system"))
}

/// The defining system plus the list of equivalent characterizations of the
/// W-weighted BT inverse. The left equation is stated with a trailing `A`;
/// it is evaluated both as stated and with `WAW` in its place.
pub fn check_w_bt(
    a: &ComplexMatrix,
    w: &ComplexMatrix,
    x: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_weighted(a, w, x)?;
    let p = Weighted::new(a, w, cfg)?;
    let mut b = Builder::new(cfg, &[a, w, x]);
    let xm = x.as_mat();
    w_bt_system(&mut b, &p, xm, cfg)?;
    if !a.is_square() {
        b.warnings
            .push("equivalence list only defined for square A and W; evaluated the defining system only".into());
        return Ok(b.finish("w-bt"));
    }
    let proj = p.aw.range_projector(cfg)?;
    let mp = p.waw.mul(&proj).pinv(cfg)?;
    let waw = &p.waw.mat;
    let xwaw = xm * waw;
    let wawx = waw * xm;
    let outer = &xwaw * xm;
    let x_range = range_of(xm, cfg)?;
    let x_star_range = range_of(&xm.adjoint(), cfg)?;
    let range_target = proj.mul(&p.waw.adjoint()).range_basis(cfg)?;
    let aw2 = p.aw.pow(2);
    let w_aw2 = p.w.mul(&aw2);
    let w_aw2_range = w_aw2.range_basis(cfg)?;
    let p_w_aw2 = w_aw2.range_projector(cfg)?.mat;

    b.group("formula");
    b.equal("X=(WAWAW(AW)^+)^+", xm, geninv::w_bt(a, w, cfg)?.as_mat());

    b.group("outer-inverse");
    b.equal("XWAWX=X", &outer, xm);
    b.same_space("R(X)=R(AW(AW)^+(WAW)*)", &x_range, &range_target)?;
    let literal_null = p.w.adjoint().mul(&aw2).range_basis(cfg)?;
    b.same_space("N(X)=N((W*(AW)^2)*)", &x_star_range, &literal_null)?;

    b.group("outer-inverse-alt");
    b.equal("XWAWX=X", &outer, xm);
    b.same_space("R(X)=R(AW(AW)^+(WAW)*)", &x_range, &range_target)?;
    b.same_space("N(X)=N((W(AW)^2)*)", &x_star_range, &w_aw2_range)?;

    b.group("left-equation-trailing-a");
    b.equal("XWAW=(WAWP_AW)^+A", &xwaw, &(&mp.mat * p.a.mat.clone()));
    b.contained("R(X*)⊆R(W(AW)^2)", &x_star_range, &w_aw2_range)?;

    b.group("left-equation-trailing-waw");
    b.equal("XWAW=(WAWP_AW)^+WAW", &xwaw, &(&mp.mat * waw));
    b.contained("R(X*)⊆R(W(AW)^2)", &x_star_range, &w_aw2_range)?;

    b.group("three-equations");
    b.equal("XWAWX=X", &outer, xm);
    b.equal("WAWX=WAW(WAWP_AW)^+", &wawx, &(waw * &mp.mat));
    b.equal("XWAW=X(WAWP_AW)^+", &xwaw, &(xm * &mp.mat));

    b.group("three-equations-alt");
    b.equal("XWAWX=X", &outer, xm);
    b.equal("WAWX=WAW(WAWP_AW)^+", &wawx, &(waw * &mp.mat));
    b.equal("XWAW=(WAWP_AW)^+WAW", &xwaw, &(&mp.mat * waw));

    b.group("projector-range");
    b.equal("WAWX=P_(W(AW)^2)", &wawx, &p_w_aw2);
    b.contained("R(X)⊆R(P_AW(WAW)*)", &x_range, &range_target)?;

    let right = &p.aw.mat * w_aw2.pinv(cfg)?.mat * waw;
    b.group("mixed-equations");
    b.equal("X=XWAWX", &outer, xm);
    b.equal("WAWX=XP_(W(AW)^2)", &wawx, &(xm * &p_w_aw2));
    b.equal("XWAW=AW(W(AW)^2)^+WAW", &xwaw, &right);

    b.group("mixed-equations-alt");
    b.equal("X=XWAWX", &outer, xm);
    b.equal("WAWX=P_(W(AW)^2)", &wawx, &p_w_aw2);
    b.equal("XWAW=AW(W(AW)^2)^+WAW", &xwaw, &right);

    Ok(b.finish("w-bt"))
}

/// Algebraic properties of the inverse with respect to B, one condition per
/// property; biconditionals compare the verdicts of their two sides.
pub fn check_a01_properties(a: &ComplexMatrix, bm: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<VerificationReport> {
    require_pair(a, bm, None)?;
    let n = a.rows();
    let route = GeninvRoute::Definition;
    let x = geninv::geninv_wrt(a, bm, cfg, route)?;
    let (sa, sb) = (leaf(a, cfg)?, leaf(bm, cfg)?);
    let mut b = Builder::new(cfg, &[a, bm, &x]);
    let (am, bmm, xm) = (a.as_mat(), bm.as_mat(), x.as_mat());
    let pb = sb.range_projector(cfg)?;
    let abbp = sa.mul(&pb);
    let ab = sa.mul(&sb);
    let a_pinv = raw::pinv(am, cfg)?;
    let x_pinv = raw::pinv(xm, cfg)?;
    b.group("properties");

    b.iff("X=0 iff AB=0", b.is_zero(xm), b.is_zero(&ab.mat));
    b.equal("X^+=ABB^+", &x_pinv, &abbp.mat);
    b.equal("BB^+X=X", &(&pb.mat * xm), xm);

    let identity = ComplexMatrix::identity(n);
    let wrt_identity = geninv::geninv_wrt(a, &identity, cfg, route)?;
    b.equal("A^(I)=A^+", wrt_identity.as_mat(), &a_pinv);
    let a_pinv_m = ComplexMatrix::from_mat(a_pinv.clone())?;
    let wrt_pinv = geninv::geninv_wrt(a, &a_pinv_m, cfg, route)?;
    b.equal("A^(A^+)=A^+", wrt_pinv.as_mat(), &a_pinv);

    b.equal("A^(X)=X", geninv::geninv_wrt(a, &x, cfg, route)?.as_mat(), xm);
    let x_pinv_m = ComplexMatrix::from_mat(x_pinv.clone())?;
    b.equal("X^(X^+)=X^+", geninv::geninv_wrt(&x, &x_pinv_m, cfg, route)?.as_mat(), &x_pinv);

    let y = geninv::geninv_wrt(bm, a, cfg, route)?;
    let y_pinv = raw::pinv(y.as_mat(), cfg)?;
    let commute = &ab.mat - bmm * am;
    let sides = &x_pinv * bmm - &y_pinv * am;
    b.iff("AB=BA iff X^+B=(B^(A))^+A", b.is_zero(&commute), b.is_zero(&sides));

    let equals_pinv = b.is_zero(&(xm - &a_pinv));
    let a2_vanishes = match pair_svd_decomposition(a, bm, cfg) {
        Ok(dec) => {
            // A2 = 0 is decided on Sigma_A A2, which carries A's scale
            let block = dec.sigma_a_mat() * &dec.a2;
            b.is_zero(&block)
        }
        Err(Error::ZeroMatrix(which)) => {
            b.warnings.push(format!(
                "{which} is zero, pair decomposition undefined; A2 = 0 decided as ABB^+ = A"
            ));
            b.is_zero(&(&abbp.mat - am))
        }
        Err(e) => return Err(e),
    };
    b.iff("X=A^+ iff A2=0", equals_pinv, a2_vanishes);

    let ab_rank = ab.rank(cfg)?;
    let a_rank = raw::rank(am, cfg)?;
    let inner = b.is_zero(&(am * xm * am - am));
    b.iff("AXA=A iff rank(AB)=rank(A)", inner, ab_rank == a_rank);

    Ok(b.finish("geninv-properties"))
}
