//! The codiagonal 2-groupoid of an integrated action: objects `M`, 1-arrows
//! `G × Γ`, 2-arrows `H × G × Γ`.
//!
//! 2-arrows form a groupoid over 1-arrows under the vertical product `•`;
//! both layers form groupoids over `M` under the horizontal product `⊙`.
//!
//! The vertical product is chosen among [`VerticalConvention`] candidates by
//! [`calibrate`] on the `tm` setup, where `Φ` has a closed form.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{G2Error, Result};
use crate::groups::{random_element, seeded_rng, vec_dist, GroupoidElement, MatrixGroupElement, TwoGroupElement};
use crate::integrate::{build_phi, random_arrow, IntegrationSetup, SetupKind};
use crate::report::{MaxResidual, Report};

/// Distance below which base points and 1-arrows count as equal when
/// testing composability.
pub const COMPOSE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct OneArrow {
    pub g: MatrixGroupElement,
    pub gamma: GroupoidElement,
}

impl OneArrow {
    pub fn dist(&self, other: &Self) -> f64 {
        self.g.dist(&other.g).max(self.gamma.dist(&other.gamma))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoArrow {
    pub h: MatrixGroupElement,
    pub g: MatrixGroupElement,
    pub gamma: GroupoidElement,
}

impl TwoArrow {
    pub fn dist(&self, other: &Self) -> f64 {
        self.h.dist(&other.h).max(self.g.dist(&other.g)).max(self.gamma.dist(&other.gamma))
    }

    /// Identity 2-arrow `(e, g, γ)` on a 1-arrow.
    pub fn identity_on(setup: &IntegrationSetup, o: &OneArrow) -> Self {
        TwoArrow { h: setup.cm.e_h(), g: o.g.clone(), gamma: o.gamma.clone() }
    }
}

/// Candidate readings of the vertical product `a • a'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerticalConvention {
    /// `(hh', g', γ∘γ')` when `s(a) = t(a')`.
    ComposeGammaSrcTgt,
    /// `(hh', g', γ∘γ')` when `t(a) = s(a')`.
    ComposeGammaTgtSrc,
    /// `(hh', g', γ')` when `s(a) = t(a')`.
    KeepGammaSrcTgt,
    /// `(hh', g', γ')` when `t(a) = s(a')`.
    KeepGammaTgtSrc,
}

impl VerticalConvention {
    pub const ALL: [VerticalConvention; 4] = [
        VerticalConvention::ComposeGammaSrcTgt,
        VerticalConvention::ComposeGammaTgtSrc,
        VerticalConvention::KeepGammaSrcTgt,
        VerticalConvention::KeepGammaTgtSrc,
    ];

    /// Whether `a • a'` needs `s(a) = t(a')` (otherwise `t(a) = s(a')`).
    pub fn src_meets_tgt(self) -> bool {
        matches!(self, VerticalConvention::ComposeGammaSrcTgt | VerticalConvention::KeepGammaSrcTgt)
    }

    pub fn describe(self) -> &'static str {
        match self {
            VerticalConvention::ComposeGammaSrcTgt => "(hh', g', gamma gamma') for s(a) = t(a')",
            VerticalConvention::ComposeGammaTgtSrc => "(hh', g', gamma gamma') for t(a) = s(a')",
            VerticalConvention::KeepGammaSrcTgt => "(hh', g', gamma') for s(a) = t(a')",
            VerticalConvention::KeepGammaTgtSrc => "(hh', g', gamma') for t(a) = s(a')",
        }
    }
}

fn two_group(h: &MatrixGroupElement, g: &MatrixGroupElement) -> TwoGroupElement {
    TwoGroupElement { h: h.clone(), g: g.clone() }
}

pub fn unit_arrow(setup: &IntegrationSetup, m: &[f64]) -> GroupoidElement {
    let e = setup.cm.e_g();
    match setup.kind {
        SetupKind::Tm => GroupoidElement::Pair(m.to_vec(), m.to_vec()),
        SetupKind::OverPoint => GroupoidElement::Group(e),
        SetupKind::ActionGroupoid => GroupoidElement::Action(e, m.to_vec()),
    }
}

pub fn am_src(a: &TwoArrow) -> OneArrow {
    OneArrow { g: a.g.clone(), gamma: a.gamma.clone() }
}

/// `(t(h) g, Φ(φ(g⁻¹)(h⁻¹), 1, γ))`.
pub fn am_tgt(setup: &IntegrationSetup, a: &TwoArrow) -> Result<OneArrow> {
    let cm = &setup.cm;
    let k = cm.phi(&a.g.inv(), &a.h.inv());
    Ok(OneArrow { g: cm.t(&a.h).mul(&a.g), gamma: build_phi(setup, &two_group(&k, &cm.e_g()), &a.gamma)? })
}

pub fn am_src0(o: &OneArrow) -> Vec<f64> {
    o.gamma.src()
}

/// `ψ(g, t_Γ(γ))`.
pub fn am_tgt0(setup: &IntegrationSetup, o: &OneArrow) -> Vec<f64> {
    setup.base_act(&o.g, &o.gamma.tgt())
}

pub fn am_unit1(setup: &IntegrationSetup, m: &[f64]) -> OneArrow {
    OneArrow { g: setup.cm.e_g(), gamma: unit_arrow(setup, m) }
}

pub fn am_unit2(setup: &IntegrationSetup, m: &[f64]) -> TwoArrow {
    TwoArrow::identity_on(setup, &am_unit1(setup, m))
}

/// `a • a'` under `conv`.
pub fn am_vert(setup: &IntegrationSetup, conv: VerticalConvention, a: &TwoArrow, b: &TwoArrow) -> Result<TwoArrow> {
    let gap =
        if conv.src_meets_tgt() { am_src(a).dist(&am_tgt(setup, b)?) } else { am_tgt(setup, a)?.dist(&am_src(b)) };
    if gap > COMPOSE_TOL {
        return Err(G2Error::NotComposable(format!("vertical: 1-arrows differ by {gap:.3e}")));
    }
    let gamma = match conv {
        VerticalConvention::ComposeGammaSrcTgt | VerticalConvention::ComposeGammaTgtSrc => {
            a.gamma.compose(&b.gamma, COMPOSE_TOL)?
        }
        VerticalConvention::KeepGammaSrcTgt | VerticalConvention::KeepGammaTgtSrc => b.gamma.clone(),
    };
    Ok(TwoArrow { h: a.h.mul(&b.h), g: b.g.clone(), gamma })
}

/// Vertical inverse under the calibrated reading `(hh', g', γ')`.
pub fn am_vert_inv(setup: &IntegrationSetup, a: &TwoArrow) -> Result<TwoArrow> {
    let t = am_tgt(setup, a)?;
    Ok(TwoArrow { h: a.h.inv(), g: t.g, gamma: t.gamma })
}

fn check_horiz(setup: &IntegrationSetup, o1: &OneArrow, o2: &OneArrow) -> Result<()> {
    let gap = vec_dist(&am_src0(o1), &am_tgt0(setup, o2));
    if gap > COMPOSE_TOL {
        return Err(G2Error::NotComposable(format!("horizontal: base points differ by {gap:.3e}")));
    }
    Ok(())
}

/// `(g₁ g₂, Φ(1, g₂⁻¹, γ₁) γ₂)`.
pub fn am_horiz1(setup: &IntegrationSetup, o1: &OneArrow, o2: &OneArrow) -> Result<OneArrow> {
    check_horiz(setup, o1, o2)?;
    let moved = build_phi(setup, &two_group(&setup.cm.e_h(), &o2.g.inv()), &o1.gamma)?;
    Ok(OneArrow { g: o1.g.mul(&o2.g), gamma: moved.compose(&o2.gamma, COMPOSE_TOL)? })
}

/// `(h₁ φ(g₁)(h₂), g₁ g₂, Φ(1, g₂⁻¹, γ₁) γ₂)`.
pub fn am_horiz(setup: &IntegrationSetup, a1: &TwoArrow, a2: &TwoArrow) -> Result<TwoArrow> {
    let o = am_horiz1(setup, &am_src(a1), &am_src(a2))?;
    Ok(TwoArrow { h: a1.h.mul(&setup.cm.phi(&a1.g, &a2.h)), g: o.g, gamma: o.gamma })
}

pub fn am_horiz1_inv(setup: &IntegrationSetup, o: &OneArrow) -> Result<OneArrow> {
    let moved = build_phi(setup, &two_group(&setup.cm.e_h(), &o.g), &o.gamma)?;
    Ok(OneArrow { g: o.g.inv(), gamma: moved.inverse() })
}

pub fn am_horiz_inv(setup: &IntegrationSetup, a: &TwoArrow) -> Result<TwoArrow> {
    let o = am_horiz1_inv(setup, &am_src(a))?;
    Ok(TwoArrow { h: setup.cm.phi(&a.g.inv(), &a.h.inv()), g: o.g, gamma: o.gamma })
}

pub fn random_one_arrow(setup: &IntegrationSetup, rng: &mut impl Rng, source: Option<&[f64]>) -> OneArrow {
    OneArrow { g: setup.random_g(rng), gamma: random_arrow(setup, rng, source) }
}

/// A random 2-arrow with source `o`.
pub fn random_two_arrow_on(setup: &IntegrationSetup, rng: &mut impl Rng, o: &OneArrow) -> TwoArrow {
    TwoArrow { h: random_element(rng, setup.cm.h_tag(), 1.0), g: o.g.clone(), gamma: o.gamma.clone() }
}

/// A 1-arrow composable after `o` horizontally (`o ⊙ result` defined).
fn one_arrow_into(setup: &IntegrationSetup, rng: &mut impl Rng, o: &OneArrow) -> OneArrow {
    // choose g₂ and a Γ-arrow ending at g₂⁻¹·s₀(o)
    let g = setup.random_g(rng);
    let target = setup.base_act(&g.inv(), &am_src0(o));
    let gamma = crate::integrate::random_arrow_into(setup, rng, &target);
    OneArrow { g, gamma }
}

/// A vertically composable pair `(a, b)` with `a • b` defined under `conv`.
fn vertical_pair(
    setup: &IntegrationSetup,
    rng: &mut impl Rng,
    conv: VerticalConvention,
    base: &OneArrow,
) -> Result<(TwoArrow, TwoArrow)> {
    let first = random_two_arrow_on(setup, rng, base);
    let next = random_two_arrow_on(setup, rng, &am_tgt(setup, &first)?);
    Ok(if conv.src_meets_tgt() { (next, first) } else { (first, next) })
}

struct Residuals {
    unit: MaxResidual,
    assoc: MaxResidual,
    inverse: MaxResidual,
    src_tgt: MaxResidual,
}

impl Default for Residuals {
    fn default() -> Self {
        let z = MaxResidual::default();
        Residuals { unit: z, assoc: z, inverse: z, src_tgt: z }
    }
}

fn see(slot: &mut MaxResidual, r: Result<f64>) {
    slot.see(r.unwrap_or(f64::INFINITY));
}

/// Vertical groupoid laws under `conv`, excluding inverses.
fn vertical_laws(setup: &IntegrationSetup, conv: VerticalConvention, samples: usize, seed: u64) -> Residuals {
    let mut rng = seeded_rng(seed);
    let mut res = Residuals::default();
    for _ in 0..samples {
        let base = random_one_arrow(setup, &mut rng, None);
        see(
            &mut res.unit,
            (|| {
                let a = random_two_arrow_on(setup, &mut rng, &base);
                let left =
                    TwoArrow::identity_on(setup, &if conv.src_meets_tgt() { am_tgt(setup, &a)? } else { base.clone() });
                let right =
                    TwoArrow::identity_on(setup, &if conv.src_meets_tgt() { base.clone() } else { am_tgt(setup, &a)? });
                Ok(am_vert(setup, conv, &left, &a)?.dist(&a).max(am_vert(setup, conv, &a, &right)?.dist(&a)))
            })(),
        );
        see(
            &mut res.assoc,
            (|| {
                let (a, b) = vertical_pair(setup, &mut rng, conv, &base)?;
                let c = if conv.src_meets_tgt() {
                    // c below b: t(c) = s(b); pick c with that target by inverting a 2-arrow on s(b)
                    let d = random_two_arrow_on(setup, &mut rng, &am_src(&b));
                    let t = am_tgt(setup, &d)?;
                    TwoArrow { h: d.h.inv(), g: t.g, gamma: t.gamma }
                } else {
                    random_two_arrow_on(setup, &mut rng, &am_tgt(setup, &b)?)
                };
                let lhs = am_vert(setup, conv, &am_vert(setup, conv, &a, &b)?, &c)?;
                let rhs = am_vert(setup, conv, &a, &am_vert(setup, conv, &b, &c)?)?;
                Ok(lhs.dist(&rhs))
            })(),
        );
        see(
            &mut res.src_tgt,
            (|| {
                let (a, b) = vertical_pair(setup, &mut rng, conv, &base)?;
                let ab = am_vert(setup, conv, &a, &b)?;
                let (want_s, want_t) = if conv.src_meets_tgt() {
                    (am_src(&b), am_tgt(setup, &a)?)
                } else {
                    (am_src(&a), am_tgt(setup, &b)?)
                };
                Ok(am_src(&ab).dist(&want_s).max(am_tgt(setup, &ab)?.dist(&want_t)))
            })(),
        );
    }
    res
}

/// Outcome of running one vertical-product candidate on `tm`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub convention: VerticalConvention,
    pub unit: f64,
    pub associativity: f64,
    pub src_tgt: f64,
    pub passed: bool,
}

/// Tries every [`VerticalConvention`] on the closed-form `tm` setup and
/// adopts the first under which unit, associativity and source/target
/// compatibility all hold within `1e-12`.
pub fn calibrate(samples: usize, seed: u64) -> Result<(VerticalConvention, Vec<CalibrationRow>)> {
    let tm = IntegrationSetup::by_name("tm")?;
    let rows: Vec<CalibrationRow> = VerticalConvention::ALL
        .iter()
        .map(|&conv| {
            let r = vertical_laws(&tm, conv, samples, seed);
            let passed = [r.unit.0, r.assoc.0, r.src_tgt.0].iter().all(|x| *x <= 1e-12);
            CalibrationRow { convention: conv, unit: r.unit.0, associativity: r.assoc.0, src_tgt: r.src_tgt.0, passed }
        })
        .collect();
    let chosen = rows
        .iter()
        .find(|r| r.passed)
        .map(|r| r.convention)
        .ok_or_else(|| G2Error::Invalid("no vertical-product convention passes on tm".into()))?;
    Ok((chosen, rows))
}

/// Residual tolerance for the 2-groupoid axioms on a setup.
pub fn default_tolerance(setup: &IntegrationSetup) -> f64 {
    match setup.kind {
        SetupKind::Tm => 1e-12,
        _ => 1e-9,
    }
}

/// Vertical and horizontal groupoid axioms, source/target compatibility,
/// globularity and the interchange law on `samples` composable tuples each.
pub fn verify_two_groupoid(setup: &IntegrationSetup, samples: usize, seed: u64, tol: f64) -> Report {
    let mut r = Report::new(format!("2-groupoid of the action on {}", setup.name));
    let conv = match calibrate(samples.clamp(10, 50), seed) {
        Ok((conv, rows)) => {
            for row in &rows {
                r.note(format!(
                    "calibration {}: unit {:.1e}, associativity {:.1e}, src/tgt {:.1e} -> {}",
                    row.convention.describe(),
                    row.unit,
                    row.associativity,
                    row.src_tgt,
                    if row.passed { "pass" } else { "fail" }
                ));
            }
            r.note(format!("adopted vertical product: {}", conv.describe()));
            conv
        }
        Err(e) => {
            r.exact("vertical convention", "calibration on tm", false, e.to_string());
            return r;
        }
    };
    let n = format!("{samples} tuples");

    let v = vertical_laws(setup, conv, samples, seed.wrapping_add(1));
    let mut rng = seeded_rng(seed.wrapping_add(2));
    let mut v_inv = MaxResidual::default();
    let mut glob = MaxResidual::default();
    let mut h = Residuals::default();
    let mut h1 = Residuals::default();
    let [mut functor_st, mut restrict, mut interchange] = [MaxResidual::default(); 3];
    for _ in 0..samples {
        let o = random_one_arrow(setup, &mut rng, None);
        let a = random_two_arrow_on(setup, &mut rng, &o);
        see(
            &mut v_inv,
            (|| {
                let ai = am_vert_inv(setup, &a)?;
                let e_s = TwoArrow::identity_on(setup, &am_src(&a));
                let e_t = TwoArrow::identity_on(setup, &am_tgt(setup, &a)?);
                let (x, y) = if conv.src_meets_tgt() {
                    (am_vert(setup, conv, &ai, &a)?, am_vert(setup, conv, &a, &ai)?)
                } else {
                    (am_vert(setup, conv, &a, &ai)?, am_vert(setup, conv, &ai, &a)?)
                };
                Ok(x.dist(&e_s).max(y.dist(&e_t)))
            })(),
        );
        see(
            &mut glob,
            (|| {
                let t = am_tgt(setup, &a)?;
                Ok(vec_dist(&am_src0(&t), &am_src0(&o)).max(vec_dist(&am_tgt0(setup, &t), &am_tgt0(setup, &o))))
            })(),
        );

        // horizontal: a1 ⊙ a2 ⊙ a3 over M
        let o2 = one_arrow_into(setup, &mut rng, &o);
        let o3 = one_arrow_into(setup, &mut rng, &o2);
        let a2 = random_two_arrow_on(setup, &mut rng, &o2);
        let a3 = random_two_arrow_on(setup, &mut rng, &o3);
        see(
            &mut h.unit,
            (|| {
                let left = am_unit2(setup, &am_tgt0(setup, &o));
                let right = am_unit2(setup, &am_src0(&o));
                Ok(am_horiz(setup, &left, &a)?.dist(&a).max(am_horiz(setup, &a, &right)?.dist(&a)))
            })(),
        );
        see(
            &mut h1.unit,
            (|| {
                let left = am_unit1(setup, &am_tgt0(setup, &o));
                let right = am_unit1(setup, &am_src0(&o));
                Ok(am_horiz1(setup, &left, &o)?.dist(&o).max(am_horiz1(setup, &o, &right)?.dist(&o)))
            })(),
        );
        see(
            &mut h.assoc,
            (|| {
                let lhs = am_horiz(setup, &am_horiz(setup, &a, &a2)?, &a3)?;
                let rhs = am_horiz(setup, &a, &am_horiz(setup, &a2, &a3)?)?;
                Ok(lhs.dist(&rhs))
            })(),
        );
        see(
            &mut h1.assoc,
            (|| {
                let lhs = am_horiz1(setup, &am_horiz1(setup, &o, &o2)?, &o3)?;
                let rhs = am_horiz1(setup, &o, &am_horiz1(setup, &o2, &o3)?)?;
                Ok(lhs.dist(&rhs))
            })(),
        );
        see(
            &mut h.inverse,
            (|| {
                let ai = am_horiz_inv(setup, &a)?;
                let x = am_horiz(setup, &ai, &a)?.dist(&am_unit2(setup, &am_src0(&o)));
                let y = am_horiz(setup, &a, &ai)?.dist(&am_unit2(setup, &am_tgt0(setup, &o)));
                Ok(x.max(y))
            })(),
        );
        see(
            &mut h1.inverse,
            (|| {
                let oi = am_horiz1_inv(setup, &o)?;
                let x = am_horiz1(setup, &oi, &o)?.dist(&am_unit1(setup, &am_src0(&o)));
                let y = am_horiz1(setup, &o, &oi)?.dist(&am_unit1(setup, &am_tgt0(setup, &o)));
                Ok(x.max(y))
            })(),
        );
        see(
            &mut h1.src_tgt,
            (|| {
                let p = am_horiz1(setup, &o, &o2)?;
                Ok(vec_dist(&am_src0(&p), &am_src0(&o2)).max(vec_dist(&am_tgt0(setup, &p), &am_tgt0(setup, &o))))
            })(),
        );
        see(
            &mut functor_st,
            (|| {
                let p = am_horiz(setup, &a, &a2)?;
                let s = am_horiz1(setup, &am_src(&a), &am_src(&a2))?;
                let t = am_horiz1(setup, &am_tgt(setup, &a)?, &am_tgt(setup, &a2)?)?;
                Ok(am_src(&p).dist(&s).max(am_tgt(setup, &p)?.dist(&t)))
            })(),
        );
        see(
            &mut restrict,
            (|| {
                let p = am_horiz(setup, &TwoArrow::identity_on(setup, &o), &TwoArrow::identity_on(setup, &o2))?;
                Ok(p.dist(&TwoArrow::identity_on(setup, &am_horiz1(setup, &o, &o2)?)))
            })(),
        );
        see(
            &mut interchange,
            (|| {
                let (x1, y1) = vertical_pair(setup, &mut rng, conv, &o)?;
                let (x2, y2) = vertical_pair(setup, &mut rng, conv, &o2)?;
                let lhs = am_horiz(setup, &am_vert(setup, conv, &x1, &y1)?, &am_vert(setup, conv, &x2, &y2)?)?;
                let rhs = am_vert(setup, conv, &am_horiz(setup, &x1, &x2)?, &am_horiz(setup, &y1, &y2)?)?;
                Ok(lhs.dist(&rhs))
            })(),
        );
    }
    let vert = "(h, g, x) . (h', g', x')";
    r.numeric("vertical unit", vert, v.unit.0, tol, &n);
    r.numeric("vertical associativity", vert, v.assoc.0, tol, &n);
    r.numeric("vertical inverse", vert, v_inv.0, tol, &n);
    r.numeric(
        "vertical src/tgt",
        "s(h,g,x) = (g,x), t(h,g,x) = (t(h)g, Phi(phi(g^-1)(h^-1), 1, x))",
        v.src_tgt.0,
        tol,
        &n,
    );
    r.numeric("globularity", "s0 t = s0 s, t0 t = t0 s", glob.0, tol, &n);
    let hor = "(h1 phi(g1)(h2), g1 g2, Phi(1, g2^-1, x1) x2)";
    let hor1 = "(g1 g2, Phi(1, g2^-1, x1) x2)";
    r.numeric("horizontal unit", hor, h.unit.0, tol, &n);
    r.numeric("horizontal associativity", hor, h.assoc.0, tol, &n);
    r.numeric("horizontal inverse", hor, h.inverse.0, tol, &n);
    r.numeric("horizontal unit on 1-arrows", hor1, h1.unit.0, tol, &n);
    r.numeric("horizontal associativity on 1-arrows", hor1, h1.assoc.0, tol, &n);
    r.numeric("horizontal inverse on 1-arrows", hor1, h1.inverse.0, tol, &n);
    r.numeric("horizontal src0/tgt0", "s0(g, x) = s(x), t0(g, x) = psi(g, t(x))", h1.src_tgt.0, tol, &n);
    r.numeric("horizontal product covers 1-arrows", "s(a1 o a2) = s(a1) o s(a2), same for t", functor_st.0, tol, &n);
    r.numeric("identity 2-arrows", "(e,g1,x1) o (e,g2,x2) = identity on (g1,x1) o (g2,x2)", restrict.0, tol, &n);
    r.numeric("interchange", "(a1 . a1') o (a2 . a2') = (a1 o a2) . (a1' o a2')", interchange.0, tol, &n);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_adopts_keep_gamma() {
        let (conv, rows) = calibrate(20, 3).unwrap();
        assert_eq!(conv, VerticalConvention::KeepGammaSrcTgt);
        assert!(!rows[0].passed);
    }

    #[test]
    fn identity_two_arrow_has_equal_ends() {
        let s = IntegrationSetup::by_name("heisenberg").unwrap();
        let mut rng = seeded_rng(1);
        let o = random_one_arrow(&s, &mut rng, None);
        let e = TwoArrow::identity_on(&s, &o);
        assert!(am_tgt(&s, &e).unwrap().dist(&o) < 1e-14);
    }

    #[test]
    fn all_setups_verify() {
        for name in crate::integrate::SETUPS {
            let s = IntegrationSetup::by_name(name).unwrap();
            let rep = verify_two_groupoid(&s, 30, 11, default_tolerance(&s));
            assert!(rep.passed(), "{}", rep.to_text());
        }
    }
}
