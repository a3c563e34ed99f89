//! Integrated actions on catalog setups: the LA-group action
//! `Ψ: (𝔥 ⋊ G) × A → A` and the 2-group action `Φ: (H ⋊ G) × Γ → Γ`.
//!
//! Setups:
//! - `tm`: `G = H = R` translating `M = R`, `A = TM`, `Γ` the pair groupoid.
//! - `adjoint`, `heisenberg`: `𝔤` acting on itself over a point, `Γ = G ⇉ pt`.
//! - `ga-sl2`: `sl(2)` acting on the action algebroid `sl(2) ⋉ R²`, `Γ` the
//!   action groupoid of `SL(2)` on `R²`.
//!
//! In every setup `μ|_𝔥` is a Lie algebra morphism `η: 𝔤 → Γ(A)` and the
//! 2-algebra is `𝔤 → 𝔤` with `δ = id` (see [`example_ga`]).

use nalgebra::DMatrix;
use rand::Rng;

use crate::action::{example_ga, StrictActionData};
use crate::algebroid::{vf_to_cdo, LieAlgebroidData, Section};
use crate::error::{G2Error, Result};
use crate::graded_poly::{rat, GradedPoly};
use crate::groups::{
    exp_to_group, la_group_mul, random_coords, random_element, seeded_rng, twogroup_mul, vec_dist, GroupCrossedModule,
    GroupTag, GroupoidElement, MatrixGroupElement, TwoGroupElement, FD_STEP,
};
use crate::lie2::StructureConstants;
use crate::report::{MaxResidual, Report};

pub const SETUPS: [&str; 4] = ["tm", "adjoint", "heisenberg", "ga-sl2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetupKind {
    /// Pair groupoid over `R`, translations.
    Tm,
    /// Group over a point, adjoint action.
    OverPoint,
    /// Action groupoid of `SL(2)` on `R²`.
    ActionGroupoid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationSetup {
    pub name: String,
    pub kind: SetupKind,
    pub s: StrictActionData,
    pub cm: GroupCrossedModule,
    /// `ρ(μ(w_α))` when every one of them is a constant vector field.
    pub constant_h_fields: Option<Vec<Vec<f64>>>,
}

/// A point `a_x` of the total space of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundlePoint {
    pub x: Vec<f64>,
    pub a: Vec<f64>,
}

impl BundlePoint {
    pub fn dist(&self, other: &Self) -> f64 {
        vec_dist(&self.x, &other.x).max(vec_dist(&self.a, &other.a))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub algebraic: f64,
    pub finite_difference: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { algebraic: 1e-9, finite_difference: 1e-5 }
    }
}

/// Action algebroid of `sl(2)` acting linearly on `R²` through the catalog
/// basis: `ρ_v(x) = B_v x`.
pub fn sl2_action_algebroid() -> LieAlgebroidData {
    let g = StructureConstants::sl2();
    let mut out = LieAlgebroidData::new(2, 3);
    let ctx = out.ctx().clone();
    for i in 0..3 {
        for j in (i + 1)..3 {
            for k in 0..3 {
                out.set_c(i, j, k, GradedPoly::constant(&ctx, g.c[i][j][k].clone())).expect("constant");
            }
        }
    }
    for (i, b) in GroupTag::Sl2.basis().iter().enumerate() {
        for row in 0..2 {
            let mut p = GradedPoly::zero(&ctx);
            for col in 0..2 {
                let c = b[(row, col)];
                if c != 0.0 {
                    p = p.add(&out.x(col).scale(&rat(c as i64))).expect("same context");
                }
            }
            out.set_rho(i, row, p).expect("body function");
        }
    }
    out
}

fn constant_fields(s: &StrictActionData) -> Result<Option<Vec<Vec<f64>>>> {
    let mut out = Vec::new();
    for sec in &s.mu_h {
        let field = s.a.anchor(sec)?;
        if field.iter().any(|p| p.terms().keys().any(|m| m.iter().any(|e| *e > 0))) {
            return Ok(None);
        }
        let origin = vec![0.0; s.a.ctx().len()];
        out.push(field.iter().map(|p| p.eval_f64(&origin)).collect::<Result<Vec<f64>>>()?);
    }
    Ok(Some(out))
}

impl IntegrationSetup {
    /// How the right-invariant flows on the pair groupoid are computed.
    pub fn flow_method(&self) -> String {
        match &self.constant_h_fields {
            Some(_) => "closed-form translation flow".into(),
            None => format!("fixed-step RK4 flow, {FLOW_STEPS} steps over unit time"),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        let (kind, tag, a) = match name {
            "tm" => (SetupKind::Tm, GroupTag::Abelian(1), LieAlgebroidData::tangent(1)),
            "adjoint" => {
                (SetupKind::OverPoint, GroupTag::Sl2, LieAlgebroidData::from_lie_algebra(&StructureConstants::sl2()))
            }
            "heisenberg" => (
                SetupKind::OverPoint,
                GroupTag::Heisenberg,
                LieAlgebroidData::from_lie_algebra(&StructureConstants::heisenberg()),
            ),
            "ga-sl2" => (SetupKind::ActionGroupoid, GroupTag::Sl2, sl2_action_algebroid()),
            _ => return Err(G2Error::UnknownCatalog(name.to_string())),
        };
        let eta: Vec<Section> = (0..tag.dim()).map(|i| a.frame(i)).collect();
        let s = example_ga(&tag.algebra(), &a, &eta)?;
        let constant_h_fields = constant_fields(&s)?;
        Ok(IntegrationSetup {
            name: name.to_string(),
            kind,
            s,
            cm: GroupCrossedModule::conjugation(tag),
            constant_h_fields,
        })
    }

    pub fn tag(&self) -> GroupTag {
        self.cm.tag
    }

    pub fn base_dim(&self) -> usize {
        self.s.a.base_dim
    }

    pub fn rank(&self) -> usize {
        self.s.a.rank
    }

    /// `ψ` on the base.
    pub fn base_act(&self, g: &MatrixGroupElement, x: &[f64]) -> Vec<f64> {
        match self.kind {
            SetupKind::Tm => vec![x[0] + g.matrix[(0, 1)]],
            SetupKind::OverPoint => Vec::new(),
            SetupKind::ActionGroupoid => g.apply(x),
        }
    }

    /// Tangent lift of the base action at `x`, applied to `v`.
    pub fn base_tangent(&self, g: &MatrixGroupElement, _x: &[f64], v: &[f64]) -> Vec<f64> {
        match self.kind {
            SetupKind::Tm | SetupKind::OverPoint => v.to_vec(),
            SetupKind::ActionGroupoid => g.apply(v),
        }
    }

    /// Matrix of `ψ(g, ·): A_x → A_{gx}` in the frame.
    pub fn fibre_matrix(&self, g: &MatrixGroupElement, _x: &[f64]) -> DMatrix<f64> {
        let r = self.rank();
        match self.kind {
            SetupKind::Tm => DMatrix::identity(r, r),
            SetupKind::OverPoint | SetupKind::ActionGroupoid => {
                let mut m = DMatrix::zeros(r, r);
                for j in 0..r {
                    let mut e = vec![0.0; r];
                    e[j] = 1.0;
                    for (i, v) in g.adjoint(&e).into_iter().enumerate() {
                        m[(i, j)] = v;
                    }
                }
                m
            }
        }
    }

    /// `ψ(g, a_x)`.
    pub fn psi(&self, g: &MatrixGroupElement, p: &BundlePoint) -> BundlePoint {
        let a = &self.fibre_matrix(g, &p.x) * nalgebra::DVector::from_column_slice(&p.a);
        BundlePoint { x: self.base_act(g, &p.x), a: a.iter().copied().collect() }
    }

    fn eval_section(&self, s: &Section, x: &[f64]) -> Vec<f64> {
        let mut point = x.to_vec();
        point.resize(self.base_dim() + self.rank(), 0.0);
        s.eval_f64(&point).expect("sections are base functions")
    }

    fn eval_poly(&self, p: &GradedPoly, x: &[f64]) -> f64 {
        let mut point = x.to_vec();
        point.resize(self.base_dim() + self.rank(), 0.0);
        p.eval_f64(&point).expect("base function")
    }

    /// `μ(w)` evaluated at `x`.
    pub fn mu_h_at(&self, w: &[f64], x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rank()];
        for (wa, sec) in w.iter().zip(&self.s.mu_h) {
            for (o, v) in out.iter_mut().zip(self.eval_section(sec, x)) {
                *o += wa * v;
            }
        }
        out
    }

    /// `ρ_A(a_x)`.
    pub fn anchor_at(&self, p: &BundlePoint) -> Vec<f64> {
        let mut out = vec![0.0; self.base_dim()];
        for (i, ai) in p.a.iter().enumerate() {
            for (alpha, o) in out.iter_mut().enumerate() {
                *o += ai * self.eval_poly(self.s.a.rho(i, alpha), &p.x);
            }
        }
        out
    }

    /// `δw ∈ 𝔤` in basis coordinates.
    pub fn delta_of(&self, w: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.s.l.dim_g];
        for (a, wa) in w.iter().enumerate() {
            for (i, o) in out.iter_mut().enumerate() {
                *o += wa * crate::graded_poly::rat_to_f64(&self.s.l.delta[a][i]);
            }
        }
        out
    }

    /// Infinitesimal action of `v ∈ 𝔤` on `M` at `y`, read from the symbol of `μ(v)`.
    pub fn g_field_on_m(&self, v: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.base_dim()];
        for (vi, m) in v.iter().zip(&self.s.mu_g) {
            let cdo = vf_to_cdo(m).expect("validated shape");
            for (o, sym) in out.iter_mut().zip(&cdo.symbol) {
                *o += vi * self.eval_poly(sym, y);
            }
        }
        out
    }

    /// `Ψ((w,g), a_x) = ψ(g, a_x) + μ(w)|_{gx}`.
    pub fn big_psi(&self, w: &[f64], g: &MatrixGroupElement, p: &BundlePoint) -> BundlePoint {
        let mut out = self.psi(g, p);
        let shift = self.mu_h_at(w, &out.x);
        for (o, s) in out.a.iter_mut().zip(shift) {
            *o += s;
        }
        out
    }

    /// `f(g, x)` with `g⁻¹·e_i|_{gx} = Σ_j f[i][j] e_j|_x`.
    pub fn frame_transport(&self, g: &MatrixGroupElement, x: &[f64]) -> DMatrix<f64> {
        let gx = self.base_act(g, x);
        self.fibre_matrix(&g.inv(), &gx).transpose()
    }

    pub fn random_base_point(&self, rng: &mut impl Rng) -> Vec<f64> {
        random_coords(rng, self.base_dim(), 1.0)
    }

    pub fn random_bundle_point(&self, rng: &mut impl Rng) -> BundlePoint {
        BundlePoint { x: self.random_base_point(rng), a: random_coords(rng, self.rank(), 1.0) }
    }

    pub fn random_g(&self, rng: &mut impl Rng) -> MatrixGroupElement {
        random_element(rng, self.tag(), 1.0)
    }

    pub fn random_w(&self, rng: &mut impl Rng) -> Vec<f64> {
        random_coords(rng, self.s.l.dim_h, 1.0)
    }

    /// `[μ(w), e_i]_A` evaluated at `x`, from the exact bracket of sections.
    pub fn bracket_mu_frame_at(&self, w: &[f64], i: usize, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.rank()];
        for (al, wa) in w.iter().enumerate() {
            let b = self.s.a.classical_bracket(&self.s.mu_h[al], &self.s.a.frame(i))?;
            for (o, v) in out.iter_mut().zip(self.eval_section(&b, x)) {
                *o += wa * v;
            }
        }
        Ok(out)
    }
}

pub fn build_setup(name: &str) -> Result<IntegrationSetup> {
    IntegrationSetup::by_name(name)
}

fn fd<F: Fn(f64) -> Vec<f64>>(f: F) -> Vec<f64> {
    let p = f(FD_STEP);
    let m = f(-FD_STEP);
    p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * FD_STEP)).collect()
}

fn scaled(v: &[f64], t: f64) -> Vec<f64> {
    v.iter().map(|x| x * t).collect()
}

/// Action law and equivariance of `Ψ`, and `ψ`, `Ψ` differentiating to `μ̃`.
pub fn check_psi_action_law(setup: &IntegrationSetup, samples: usize, seed: u64, tol: Tolerances) -> Report {
    let mut r = Report::new(format!("LA-group action Psi on {}", setup.name));
    let mut rng = seeded_rng(seed);
    let tag = setup.tag();
    let e = tag.identity();
    let mt = crate::action::build_mu_tilde(&setup.s);
    let [mut law, mut unit, mut equi, mut diff_g, mut diff_h] = [MaxResidual::default(); 5];
    for _ in 0..samples {
        let (w1, g1) = (setup.random_w(&mut rng), setup.random_g(&mut rng));
        let (w2, g2) = (setup.random_w(&mut rng), setup.random_g(&mut rng));
        let p = setup.random_bundle_point(&mut rng);
        let prod = la_group_mul(&setup.cm, &(w1.clone(), g1.clone()), &(w2.clone(), g2.clone()));
        let lhs = setup.big_psi(&prod.0, &prod.1, &p);
        let rhs = setup.big_psi(&w1, &g1, &setup.big_psi(&w2, &g2, &p));
        law.see(lhs.dist(&rhs));
        unit.see(setup.big_psi(&vec![0.0; w1.len()], &e, &p).dist(&p));

        let mu = BundlePoint { x: p.x.clone(), a: setup.mu_h_at(&w1, &p.x) };
        let moved = setup.psi(&g1, &mu);
        let gw = setup.cm.act_on_h(&g1, &w1);
        let want = BundlePoint { x: setup.base_act(&g1, &p.x), a: setup.mu_h_at(&gw, &setup.base_act(&g1, &p.x)) };
        equi.see(moved.dist(&want));

        if let Ok(mt) = &mt {
            let h = setup.s.l.dim_h;
            let point: Vec<f64> = p.x.iter().chain(&p.a).copied().collect();
            let v = random_coords(&mut rng, tag.dim(), 1.0);
            let d = fd(|t| {
                let q = setup.psi(&exp_to_group(&scaled(&v, t), tag).expect("dim"), &p);
                q.x.into_iter().chain(q.a).collect()
            });
            let mut coeffs = vec![0.0; h];
            coeffs.extend(&v);
            diff_g.see(vec_dist(&d, &mt.eval(&coeffs, &point).expect("even point")));
            let d = fd(|t| {
                let q = setup.big_psi(&scaled(&w1, t), &e, &p);
                q.x.into_iter().chain(q.a).collect()
            });
            let mut coeffs = w1.clone();
            coeffs.extend(vec![0.0; tag.dim()]);
            diff_h.see(vec_dist(&d, &mt.eval(&coeffs, &point).expect("even point")));
        } else {
            diff_g.see(f64::INFINITY);
            diff_h.see(f64::INFINITY);
        }
    }
    let n = format!("{samples} samples");
    r.numeric("Psi action law", "Psi((w1,g1)(w2,g2), a) = Psi((w1,g1), Psi((w2,g2), a))", law.0, tol.algebraic, &n);
    r.numeric("Psi unit", "Psi((0,e), a) = a", unit.0, tol.algebraic, &n);
    r.numeric("equivariance", "psi(g, mu(w)_x) = mu(g.w)_{gx}", equi.0, tol.algebraic, &n);
    r.numeric("psi integrates mu~ on g", "d/dt psi(exp tv, a) = mu~(v)(a)", diff_g.0, tol.finite_difference, &n);
    r.numeric("Psi integrates mu~ on h", "d/dt Psi((tw,e), a) = mu~(w)(a)", diff_h.0, tol.finite_difference, &n);
    r
}

/// `ρ_A(Ψ((w,g),a_x)) = (δw)_M(gx) + g·ρ_A(a_x)`.
pub fn check_psi_anchor(setup: &IntegrationSetup, samples: usize, seed: u64, tol: Tolerances) -> Report {
    let mut r = Report::new(format!("Psi and anchors on {}", setup.name));
    let mut rng = seeded_rng(seed);
    let mut res = MaxResidual::default();
    for _ in 0..samples {
        let (w, g) = (setup.random_w(&mut rng), setup.random_g(&mut rng));
        let p = setup.random_bundle_point(&mut rng);
        let lhs = setup.anchor_at(&setup.big_psi(&w, &g, &p));
        let gx = setup.base_act(&g, &p.x);
        let dm = setup.g_field_on_m(&setup.delta_of(&w), &gx);
        let lifted = setup.base_tangent(&g, &p.x, &setup.anchor_at(&p));
        let rhs: Vec<f64> = dm.iter().zip(&lifted).map(|(a, b)| a + b).collect();
        res.see(vec_dist(&lhs, &rhs));
    }
    r.numeric(
        "anchor",
        "rho(Psi((w,g),a_x)) = (delta w)_M(gx) + g.rho(a_x)",
        res.0,
        tol.algebraic,
        format!("{samples} samples"),
    );
    r
}

/// Multiplicativity of the frame transport and the bracket identity
/// `[w, φ(a)]_E = φ([μ(w), a]_A)` on frames.
pub fn check_psi_bracket(setup: &IntegrationSetup, samples: usize, seed: u64, tol: Tolerances) -> Report {
    let mut r = Report::new(format!("Psi and brackets on {}", setup.name));
    let mut rng = seeded_rng(seed);
    let tag = setup.tag();
    let rank = setup.rank();
    let [mut mult, mut hell] = [MaxResidual::default(); 2];
    let mut err = None;
    for _ in 0..samples {
        let (g, h) = (setup.random_g(&mut rng), setup.random_g(&mut rng));
        let x = setup.random_base_point(&mut rng);
        let lhs = setup.frame_transport(&g.mul(&h), &x);
        let rhs = setup.frame_transport(&g, &setup.base_act(&h, &x)) * setup.frame_transport(&h, &x);
        mult.see((lhs - rhs).abs().max());

        let w = setup.random_w(&mut rng);
        let dw = setup.delta_of(&w);
        let f = setup.frame_transport(&g, &x);
        let gx = setup.base_act(&g, &x);
        for i in 0..rank {
            let left = fd(|t| {
                let gt = exp_to_group(&scaled(&dw, t), tag).expect("dim").mul(&g);
                let ft = setup.frame_transport(&gt, &x);
                (0..rank).map(|k| ft[(i, k)]).collect()
            });
            match setup.bracket_mu_frame_at(&w, i, &gx) {
                Ok(b) => {
                    let right: Vec<f64> = (0..rank).map(|k| (0..rank).map(|j| b[j] * f[(j, k)]).sum()).collect();
                    hell.see(vec_dist(&left, &right));
                }
                Err(e) => err = Some(e.to_string()),
            }
        }
    }
    let n = format!("{samples} samples");
    r.numeric("multiplicativity", "f(gh, x) = f(g, hx) f(h, x)", mult.0, tol.algebraic, &n);
    match err {
        None => r.numeric("bracket transport", "[w, phi(a)]_E = phi([mu(w), a]_A)", hell.0, tol.finite_difference, &n),
        Some(e) => r.exact("bracket transport", "[w, phi(a)]_E = phi([mu(w), a]_A)", false, e),
    }
    r
}

/// All three `Ψ` reports.
pub fn check_psi(setup: &IntegrationSetup, samples: usize, seed: u64, tol: Tolerances) -> Report {
    let mut r = Report::new(format!("integrated LA-group action on {}", setup.name));
    r.extend(check_psi_action_law(setup, samples, seed, tol));
    r.extend(check_psi_anchor(setup, samples, seed.wrapping_add(1), tol));
    r.extend(check_psi_bracket(setup, samples, seed.wrapping_add(2), tol));
    r
}

/// Number of fixed RK4 steps used for right-invariant flows without a closed form.
pub const FLOW_STEPS: usize = 64;

/// The 2-group action `Φ((h,g), γ) = R_h(ψ_Γ(g, γ))`: the groupoid
/// automorphism integrating `ψ(g, ·)` followed by the time-1 flow of the
/// right-invariant extension of `μ(log h)`.
pub fn build_phi(setup: &IntegrationSetup, p: &TwoGroupElement, gamma: &GroupoidElement) -> Result<GroupoidElement> {
    let moved = match (setup.kind, gamma) {
        (SetupKind::Tm, GroupoidElement::Pair(m1, m2)) => {
            GroupoidElement::Pair(setup.base_act(&p.g, m1), setup.base_act(&p.g, m2))
        }
        (SetupKind::OverPoint, GroupoidElement::Group(k)) => GroupoidElement::Group(p.g.mul(k).mul(&p.g.inv())),
        (SetupKind::ActionGroupoid, GroupoidElement::Action(k, m)) => {
            GroupoidElement::Action(p.g.mul(k).mul(&p.g.inv()), p.g.apply(m))
        }
        _ => return Err(G2Error::Invalid(format!("arrow does not belong to the groupoid of {}", setup.name))),
    };
    Ok(match moved {
        GroupoidElement::Pair(m1, m2) => {
            // right-invariant extension of μ(w) on M × M moves the target by the flow of ρ(μ(w))
            let s = setup.tag().matrix_size();
            let w = setup.tag().algebra_coords(&(&p.h.matrix - DMatrix::identity(s, s)));
            GroupoidElement::Pair(rk4_flow(setup, &w, &m1), m2)
        }
        GroupoidElement::Group(k) => GroupoidElement::Group(p.h.mul(&k)),
        GroupoidElement::Action(k, m) => GroupoidElement::Action(p.h.mul(&k), m),
    })
}

fn rk4_flow(setup: &IntegrationSetup, w: &[f64], x0: &[f64]) -> Vec<f64> {
    if let Some(fields) = &setup.constant_h_fields {
        let mut x = x0.to_vec();
        for (wa, f) in w.iter().zip(fields) {
            for (xi, fi) in x.iter_mut().zip(f) {
                *xi += wa * fi;
            }
        }
        return x;
    }
    let field = |x: &[f64]| setup.anchor_at(&BundlePoint { x: x.to_vec(), a: setup.mu_h_at(w, x) });
    let dt = 1.0 / FLOW_STEPS as f64;
    let mut x = x0.to_vec();
    let add = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + s * q).collect() };
    for _ in 0..FLOW_STEPS {
        let k1 = field(&x);
        let k2 = field(&add(&x, &k1, dt / 2.0));
        let k3 = field(&add(&x, &k2, dt / 2.0));
        let k4 = field(&add(&x, &k3, dt));
        for i in 0..x.len() {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    x
}

/// A random arrow of the setup's groupoid ending at `target` when given.
pub fn random_arrow(setup: &IntegrationSetup, rng: &mut impl Rng, source: Option<&[f64]>) -> GroupoidElement {
    match setup.kind {
        SetupKind::Tm => {
            let m2 = source.map(<[f64]>::to_vec).unwrap_or_else(|| setup.random_base_point(rng));
            GroupoidElement::Pair(setup.random_base_point(rng), m2)
        }
        SetupKind::OverPoint => GroupoidElement::Group(setup.random_g(rng)),
        SetupKind::ActionGroupoid => {
            let m = source.map(<[f64]>::to_vec).unwrap_or_else(|| setup.random_base_point(rng));
            GroupoidElement::Action(setup.random_g(rng), m)
        }
    }
}

/// A random arrow whose target is `target`.
pub fn random_arrow_into(setup: &IntegrationSetup, rng: &mut impl Rng, target: &[f64]) -> GroupoidElement {
    match setup.kind {
        SetupKind::Tm => GroupoidElement::Pair(target.to_vec(), setup.random_base_point(rng)),
        SetupKind::OverPoint => GroupoidElement::Group(setup.random_g(rng)),
        SetupKind::ActionGroupoid => {
            let k = setup.random_g(rng);
            let m = k.inv().apply(target);
            GroupoidElement::Action(k, m)
        }
    }
}

pub fn random_two_group(setup: &IntegrationSetup, rng: &mut impl Rng) -> TwoGroupElement {
    TwoGroupElement { h: random_element(rng, setup.tag(), 1.0), g: setup.random_g(rng) }
}

/// Curve through the unit at `m` with velocity `a ∈ A_m`.
fn unit_curve(setup: &IntegrationSetup, m: &[f64], a: &[f64], s: f64) -> GroupoidElement {
    match setup.kind {
        SetupKind::Tm => {
            let v = setup.anchor_at(&BundlePoint { x: m.to_vec(), a: a.to_vec() });
            GroupoidElement::Pair(m.iter().zip(&v).map(|(x, y)| x + s * y).collect(), m.to_vec())
        }
        SetupKind::OverPoint => GroupoidElement::Group(exp_to_group(&scaled(a, s), setup.tag()).expect("dim")),
        SetupKind::ActionGroupoid => {
            GroupoidElement::Action(exp_to_group(&scaled(a, s), setup.tag()).expect("dim"), m.to_vec())
        }
    }
}

/// First-order coordinates of an arrow near a unit, in the frame of `A`.
fn lie_part(setup: &IntegrationSetup, gamma: &GroupoidElement) -> Vec<f64> {
    let s = setup.tag().matrix_size();
    match gamma {
        // A = TM with the coordinate frame
        GroupoidElement::Pair(m1, m2) => m1.iter().zip(m2).map(|(a, b)| a - b).collect(),
        GroupoidElement::Group(k) | GroupoidElement::Action(k, _) => {
            setup.tag().algebra_coords(&(&k.matrix - DMatrix::identity(s, s)))
        }
    }
}

/// 2-group action law and groupoid-morphism law for `Φ`; for `tm` also the
/// closed form and the product action after `(h,g) ↦ (hg,g)`.
pub fn check_phi_2group_action(setup: &IntegrationSetup, samples: usize, seed: u64, tol: Tolerances) -> Report {
    let mut r = Report::new(format!("2-group action Phi on {}", setup.name));
    let mut rng = seeded_rng(seed);
    let cm = &setup.cm;
    let [mut law, mut unit, mut morph, mut closed, mut product] = [MaxResidual::default(); 5];
    let one = TwoGroupElement { h: cm.e_h(), g: cm.e_g() };
    let big = |x: Result<f64>| x.unwrap_or(f64::INFINITY);
    for _ in 0..samples {
        let p = random_two_group(setup, &mut rng);
        let q = random_two_group(setup, &mut rng);
        let gamma = random_arrow(setup, &mut rng, None);
        law.see(big((|| {
            let lhs = build_phi(setup, &twogroup_mul(cm, &p, &q), &gamma)?;
            let rhs = build_phi(setup, &p, &build_phi(setup, &q, &gamma)?)?;
            Ok(lhs.dist(&rhs))
        })()));
        unit.see(big(build_phi(setup, &one, &gamma).map(|x| x.dist(&gamma))));

        // composable pairs: p ∘ q in H ⋊ G ⇉ G and γ1 ∘ γ2 in Γ
        let q2 = random_two_group(setup, &mut rng);
        let p2 = TwoGroupElement { h: random_element(&mut rng, setup.tag(), 1.0), g: cm.t(&q2.h).mul(&q2.g) };
        let g2 = random_arrow(setup, &mut rng, None);
        let g1 = random_arrow(setup, &mut rng, Some(&g2.tgt()));
        morph.see(big((|| {
            let pq = crate::groups::twogroup_compose(cm, &p2, &q2, tol.algebraic)?;
            let lhs = build_phi(setup, &pq, &g1.compose(&g2, tol.algebraic)?)?;
            let rhs = build_phi(setup, &p2, &g1)?.compose(&build_phi(setup, &q2, &g2)?, tol.algebraic)?;
            Ok(lhs.dist(&rhs))
        })()));

        if let (SetupKind::Tm, GroupoidElement::Pair(m1, m2)) = (setup.kind, &gamma) {
            let (h, g) = (p.h.matrix[(0, 1)], p.g.matrix[(0, 1)]);
            let want = GroupoidElement::Pair(vec![h + g + m1[0]], vec![g + m2[0]]);
            closed.see(big(build_phi(setup, &p, &gamma).map(|x| x.dist(&want))));
            // (g1, g2) = (hg, g) acting factorwise
            let (a1, a2): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let pre = TwoGroupElement {
                h: exp_to_group(&[a1 - a2], setup.tag()).expect("dim"),
                g: exp_to_group(&[a2], setup.tag()).expect("dim"),
            };
            let want = GroupoidElement::Pair(vec![a1 + m1[0]], vec![a2 + m2[0]]);
            product.see(big(build_phi(setup, &pre, &gamma).map(|x| x.dist(&want))));
        }
    }
    let n = format!("{samples} samples");
    r.numeric("Phi action law", "Phi(pq, x) = Phi(p, Phi(q, x))", law.0, tol.algebraic, &n);
    r.numeric("Phi unit", "Phi((e,e), x) = x", unit.0, tol.algebraic, &n);
    r.numeric("Phi groupoid morphism", "Phi(p o q, x1 o x2) = Phi(p, x1) o Phi(q, x2)", morph.0, tol.algebraic, &n);
    if setup.kind == SetupKind::Tm {
        r.numeric("Phi closed form", "Phi((h,g),(m1,m2)) = (hgm1, gm2)", closed.0, 1e-12, &n);
        r.numeric("product action", "Phi((g1 g2^-1, g2),(m1,m2)) = (g1 m1, g2 m2)", product.0, 1e-12, &n);
    }
    r
}

/// Central differences of `Φ` along `s ↦ ((exp(sw), g), γ_a(s))` at units
/// reproduce `Ψ((w,g), a)`.
pub fn check_phi_differentiates_to_psi(setup: &IntegrationSetup, samples: usize, seed: u64, tol: Tolerances) -> Report {
    let mut r = Report::new(format!("Phi differentiates to Psi on {}", setup.name));
    let mut rng = seeded_rng(seed);
    let tag = setup.tag();
    let [mut fibre, mut base] = [MaxResidual::default(); 2];
    for _ in 0..samples {
        let w = setup.random_w(&mut rng);
        let g = setup.random_g(&mut rng);
        let p = setup.random_bundle_point(&mut rng);
        let curve = |s: f64| -> Result<GroupoidElement> {
            let el = TwoGroupElement { h: exp_to_group(&scaled(&w, s), tag)?, g: g.clone() };
            build_phi(setup, &el, &unit_curve(setup, &p.x, &p.a, s))
        };
        let want = setup.big_psi(&w, &g, &p);
        match (curve(FD_STEP), curve(-FD_STEP)) {
            (Ok(plus), Ok(minus)) => {
                let (lp, lm) = (lie_part(setup, &plus), lie_part(setup, &minus));
                let d: Vec<f64> = lp.iter().zip(&lm).map(|(a, b)| (a - b) / (2.0 * FD_STEP)).collect();
                fibre.see(vec_dist(&d, &want.a));
                base.see(vec_dist(&plus.src(), &want.x));
            }
            _ => fibre.see(f64::INFINITY),
        }
    }
    let n = format!("{samples} samples");
    r.numeric("Lie(Phi) = Psi", "d/ds Phi((exp sw, g), x_a(s)) = Psi((w,g), a)", fibre.0, tol.finite_difference, &n);
    r.numeric("base points", "s(Phi((h,g), x)) = g.s(x)", base.0, tol.algebraic, &n);
    r
}

pub fn check_phi(setup: &IntegrationSetup, samples: usize, seed: u64, tol: Tolerances) -> Report {
    let mut r = Report::new(format!("integrated 2-group action on {}", setup.name));
    if setup.kind == SetupKind::Tm {
        r.note(setup.flow_method());
    }
    r.extend(check_phi_2group_action(setup, samples, seed, tol));
    r.extend(check_phi_differentiates_to_psi(setup, samples, seed.wrapping_add(3), tol));
    r
}
