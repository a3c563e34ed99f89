//! Strict actions of a Lie 2-algebra `𝔥 → 𝔤` on a Lie algebroid `A`.
//!
//! `μ(w_α)` is a section of `A` (a degree −1 field on `A[1]`), `μ(v_i)` is a
//! degree 0 field `g ∂/∂x + f_ab ξ^a ∂/∂ξ^b`.

use std::sync::Arc;

use num_traits::One;

use crate::algebroid::{
    base_commutator, build_q, cdo_apply, chart_dims, dual_cdo, first_nonzero, section_to_vf, vf_to_cdo, CdoData,
    LieAlgebroidData, Section,
};
use crate::error::{G2Error, Result};
use crate::graded_poly::{gcommutator, rat, Derivation, GradedContext, GradedPoly, Rat};
use crate::lie2::{build_qdelta_qbr, h_semidirect_g, StrictLie2Data, StructureConstants};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq)]
pub struct StrictActionData {
    pub l: StrictLie2Data,
    pub a: LieAlgebroidData,
    pub mu_h: Vec<Section>,
    pub mu_g: Vec<Derivation>,
}

/// A single constant that [`StrictActionData::perturbed`] bumps by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionSlot {
    /// Coefficient `a` of `μ(w_α)`.
    MuH(usize, usize),
    /// Base component `x` of `μ(v_i)`.
    MuGBase(usize, usize),
    /// Fibre entry `f_ab` of `μ(v_i)`.
    MuGFiber(usize, usize, usize),
}

impl StrictActionData {
    pub fn zero(l: StrictLie2Data, a: LieAlgebroidData) -> Self {
        let mu_h = (0..l.dim_h).map(|_| a.zero_section()).collect();
        let mu_g = (0..l.dim_g).map(|_| Derivation::zero(a.ctx())).collect();
        StrictActionData { l, a, mu_h, mu_g }
    }

    pub fn check_shapes(&self) -> Result<()> {
        self.l.check_shapes()?;
        let (n, r) = (self.a.base_dim, self.a.rank);
        if self.mu_h.len() != self.l.dim_h {
            return Err(G2Error::Shape(format!("mu_h has {} entries, dim_h is {}", self.mu_h.len(), self.l.dim_h)));
        }
        if self.mu_g.len() != self.l.dim_g {
            return Err(G2Error::Shape(format!("mu_g has {} entries, dim_g is {}", self.mu_g.len(), self.l.dim_g)));
        }
        for (k, s) in self.mu_h.iter().enumerate() {
            if s.coeffs.len() != r {
                return Err(G2Error::Shape(format!("mu_h[{k}] has wrong rank")));
            }
            if s.coeffs.iter().any(|p| **p.ctx() != **self.a.ctx() || !p.is_body_function()) {
                return Err(G2Error::Shape(format!("mu_h[{k}] is not a section")));
            }
        }
        for (k, d) in self.mu_g.iter().enumerate() {
            if **d.ctx() != **self.a.ctx() {
                return Err(G2Error::ContextMismatch);
            }
            vf_to_cdo(d).map_err(|e| G2Error::Shape(format!("mu_g[{k}]: {e}")))?;
        }
        debug_assert_eq!(chart_dims(self.a.ctx()).ok(), Some((n, r)));
        Ok(())
    }

    pub fn slots(&self) -> Vec<ActionSlot> {
        let (n, r) = (self.a.base_dim, self.a.rank);
        let mut out = Vec::new();
        for al in 0..self.l.dim_h {
            out.extend((0..r).map(|a| ActionSlot::MuH(al, a)));
        }
        for i in 0..self.l.dim_g {
            out.extend((0..n).map(|x| ActionSlot::MuGBase(i, x)));
            for a in 0..r {
                out.extend((0..r).map(|b| ActionSlot::MuGFiber(i, a, b)));
            }
        }
        out
    }

    pub fn perturbed(&self, slot: ActionSlot) -> Result<Self> {
        let mut s = self.clone();
        let one = GradedPoly::one(self.a.ctx());
        match slot {
            ActionSlot::MuH(al, a) => {
                s.mu_h[al].coeffs[a] = s.mu_h[al].coeffs[a].add(&one)?;
            }
            ActionSlot::MuGBase(i, x) => {
                let c = s.mu_g[i].component(x).add(&one)?;
                s.mu_g[i].set_component(x, c)?;
            }
            ActionSlot::MuGFiber(i, a, b) => {
                let idx = self.a.xi_index(b);
                let c = s.mu_g[i].component(idx).add(&self.a.xi(a))?;
                s.mu_g[i].set_component(idx, c)?;
            }
        }
        Ok(s)
    }

    /// `μ(v)` for `v = Σ coeffs[i] v_i`.
    pub fn mu_g_of(&self, coeffs: &[Rat]) -> Result<Derivation> {
        let mut d = Derivation::zero(self.a.ctx());
        for (c, m) in coeffs.iter().zip(&self.mu_g) {
            d = d.add(&m.scale(c))?;
        }
        Ok(d)
    }

    /// `μ(w)` for `w = Σ coeffs[α] w_α`.
    pub fn mu_h_of(&self, coeffs: &[Rat]) -> Result<Section> {
        let mut s = self.a.zero_section();
        for (c, m) in coeffs.iter().zip(&self.mu_h) {
            s = s.add(&m.scale(c))?;
        }
        Ok(s)
    }

    /// CDO on `A` induced by `μ(v_i)`.
    pub fn cdo(&self, i: usize) -> Result<CdoData> {
        Ok(dual_cdo(&vf_to_cdo(&self.mu_g[i])?))
    }
}

/// Collects failing indices for one report entry.
struct Failures(Vec<String>);

impl Failures {
    fn new() -> Self {
        Failures(Vec::new())
    }

    fn record(&mut self, ok: bool, at: impl FnOnce() -> String) {
        if !ok {
            self.0.push(at());
        }
    }

    fn emit(self, r: &mut Report, name: &str, anchor: &str) {
        let ok = self.0.is_empty();
        r.exact(name, anchor, ok, self.0.join("; "));
    }
}

fn shape_failure(r: &mut Report, e: G2Error) -> Report {
    r.exact("shapes", "dimensions agree", false, e.to_string());
    r.clone()
}

pub const EQ_C: &str = "(c) mu(delta w) = [Q_A, mu(w)]";
pub const EQ_D: &str = "(d) [Q_A, mu(v)] = 0";
pub const EQ_A: &str = "(a) mu[v,w] = [mu(v), mu(w)]";
pub const EQ_B: &str = "(b) mu[v1,v2] = [mu(v1), mu(v2)]";

/// The four morphism equations of a DGLA map `L → χ(A[1])`, by exact expansion.
pub fn validate_action_dgla(s: &StrictActionData) -> Report {
    let mut r = Report::new("strict action (DGLA form)");
    if let Err(e) = s.check_shapes() {
        return shape_failure(&mut r, e);
    }
    match dgla_checks(s, &mut r) {
        Ok(()) => r,
        Err(e) => shape_failure(&mut r, e),
    }
}

fn dgla_checks(s: &StrictActionData, r: &mut Report) -> Result<()> {
    let (h, g) = (s.l.dim_h, s.l.dim_g);
    let q = build_q(&s.a)?;
    let mu_w: Vec<Derivation> = s.mu_h.iter().map(section_to_vf).collect::<Result<_>>()?;

    let mut c = Failures::new();
    for al in 0..h {
        let lhs = s.mu_g_of(&s.l.delta[al])?;
        let rhs = gcommutator(&q, &mu_w[al])?;
        let diff = lhs.sub(&rhs)?;
        c.record(diff.is_zero(), || format!("w{al}: {}", first_nonzero(&diff)));
    }
    c.emit(r, "(c)", EQ_C);

    let mut d = Failures::new();
    for i in 0..g {
        let diff = gcommutator(&q, &s.mu_g[i])?;
        d.record(diff.is_zero(), || format!("v{i}: {}", first_nonzero(&diff)));
    }
    d.emit(r, "(d)", EQ_D);

    let mut a = Failures::new();
    for i in 0..g {
        for al in 0..h {
            let mut lhs = Derivation::zero(s.a.ctx());
            for (b, m) in mu_w.iter().enumerate() {
                lhs = lhs.add(&m.scale(&s.l.act[i][al][b]))?;
            }
            let diff = lhs.sub(&gcommutator(&s.mu_g[i], &mu_w[al])?)?;
            a.record(diff.is_zero(), || format!("v{i}, w{al}: {}", first_nonzero(&diff)));
        }
    }
    a.emit(r, "(a)", EQ_A);

    let mut b = Failures::new();
    for i in 0..g {
        for j in (i + 1)..g {
            let lhs = s.mu_g_of(&s.l.bracket_g[i][j])?;
            let diff = lhs.sub(&gcommutator(&s.mu_g[i], &s.mu_g[j])?)?;
            b.record(diff.is_zero(), || format!("v{i}, v{j}: {}", first_nonzero(&diff)));
        }
    }
    b.emit(r, "(b)", EQ_B);
    Ok(())
}

/// The same content phrased with CDOs, sections and the classical bracket.
pub fn validate_action_classical(s: &StrictActionData) -> Report {
    let mut r = Report::new("strict action (classical form)");
    if let Err(e) = s.check_shapes() {
        return shape_failure(&mut r, e);
    }
    match classical_checks(s, &mut r) {
        Ok(()) => r,
        Err(e) => shape_failure(&mut r, e),
    }
}

fn cdo_combination(cdos: &[CdoData], coeffs: &[Rat], ctx: &Arc<GradedContext>, n: usize, r: usize) -> Result<CdoData> {
    let z = GradedPoly::zero(ctx);
    let mut out = CdoData { matrix: vec![vec![z.clone(); r]; r], symbol: vec![z; n] };
    for (y, c) in cdos.iter().zip(coeffs) {
        for a in 0..r {
            for b in 0..r {
                out.matrix[a][b] = out.matrix[a][b].add(&y.matrix[a][b].scale(c))?;
            }
        }
        for x in 0..n {
            out.symbol[x] = out.symbol[x].add(&y.symbol[x].scale(c))?;
        }
    }
    Ok(out)
}

fn classical_checks(s: &StrictActionData, rep: &mut Report) -> Result<()> {
    let (h, g) = (s.l.dim_h, s.l.dim_g);
    let (n, r) = (s.a.base_dim, s.a.rank);
    let ctx = s.a.ctx().clone();
    let alg = &s.a;
    let ys: Vec<CdoData> = (0..g).map(|i| s.cdo(i)).collect::<Result<_>>()?;
    let frames: Vec<Section> = (0..r).map(|a| alg.frame(a)).collect();

    let mut lie = Failures::new();
    for i in 0..g {
        for j in (i + 1)..g {
            let yij = cdo_combination(&ys, &s.l.bracket_g[i][j], &ctx, n, r)?;
            let sym = base_commutator(&ys[i].symbol, &ys[j].symbol)?;
            lie.record(sym == yij.symbol, || format!("v{i}, v{j}: symbol"));
            for (b, e) in frames.iter().enumerate() {
                let lhs = cdo_apply(&yij, e)?;
                let t1 = cdo_apply(&ys[i], &cdo_apply(&ys[j], e)?)?;
                let t2 = cdo_apply(&ys[j], &cdo_apply(&ys[i], e)?)?;
                let rhs = t1.add(&t2.scale(&-Rat::one()))?;
                lie.record(lhs == rhs, || format!("v{i}, v{j} on e{b}"));
            }
        }
    }
    lie.emit(rep, "g acts by CDOs", "Y_[v1,v2] = [Y_v1, Y_v2]");

    let mut aut = Failures::new();
    for (i, y) in ys.iter().enumerate() {
        for a in 0..r {
            let rho_ya = alg.anchor(&cdo_apply(y, &frames[a])?)?;
            let rho_a = alg.anchor(&frames[a])?;
            let comm = base_commutator(&y.symbol, &rho_a)?;
            aut.record(rho_ya == comm, || format!("v{i}: anchor on e{a}"));
            for b in (a + 1)..r {
                let lhs = cdo_apply(y, &alg.classical_bracket(&frames[a], &frames[b])?)?;
                let t1 = alg.classical_bracket(&cdo_apply(y, &frames[a])?, &frames[b])?;
                let t2 = alg.classical_bracket(&frames[a], &cdo_apply(y, &frames[b])?)?;
                aut.record(lhs == t1.add(&t2)?, || format!("v{i}: bracket on e{a}, e{b}"));
            }
        }
    }
    aut.emit(rep, "g acts by automorphisms", "Y[a,b] = [Ya,b] + [a,Yb], rho(Ya) = [Y_sym, rho(a)]");

    let mut inner = Failures::new();
    for al in 0..h {
        let yd = cdo_combination(&ys, &s.l.delta[al], &ctx, n, r)?;
        let sym = alg.anchor(&s.mu_h[al])?;
        inner.record(sym == yd.symbol, || format!("w{al}: symbol"));
        for (b, e) in frames.iter().enumerate() {
            let lhs = cdo_apply(&yd, e)?;
            let rhs = alg.classical_bracket(&s.mu_h[al], e)?;
            inner.record(lhs == rhs, || format!("w{al} on e{b}"));
        }
    }
    inner.emit(rep, "delta w acts by ad mu(w)", "Y_(delta w) = [mu(w), -]");

    let mut morph = Failures::new();
    for al in 0..h {
        for be in (al + 1)..h {
            let mut coeffs = vec![Rat::from_integer(0.into()); h];
            for (gm, c) in coeffs.iter_mut().enumerate() {
                for i in 0..g {
                    *c += &s.l.delta[al][i] * &s.l.act[i][be][gm];
                }
            }
            let lhs = s.mu_h_of(&coeffs)?;
            let rhs = alg.classical_bracket(&s.mu_h[al], &s.mu_h[be])?;
            morph.record(lhs == rhs, || format!("w{al}, w{be}"));
        }
    }
    morph.emit(rep, "mu_h is a morphism", "mu[w,w']_delta = [mu(w), mu(w')]");

    let mut equi = Failures::new();
    for (i, y) in ys.iter().enumerate() {
        for al in 0..h {
            let lhs = s.mu_h_of(&s.l.act[i][al])?;
            let rhs = cdo_apply(y, &s.mu_h[al])?;
            equi.record(lhs == rhs, || format!("v{i}, w{al}"));
        }
    }
    equi.emit(rep, "mu_h is equivariant", "mu(v.w) = Y_v mu(w)");
    Ok(())
}

/// Variables `eta.., P.., x.., xi..` in this order.
pub fn product_context(dim_g: usize, dim_h: usize, n: usize, r: usize) -> Arc<GradedContext> {
    let vars = (1..=dim_g)
        .map(|i| (format!("eta{i}"), 1u8))
        .chain((1..=dim_h).map(|a| (format!("P{a}"), 2u8)))
        .chain((1..=n).map(|i| (format!("x{i}"), 0u8)))
        .chain((1..=r).map(|a| (format!("xi{a}"), 1u8)));
    GradedContext::new(vars).expect("generated names are unique")
}

fn product_ctx_of(s: &StrictActionData) -> Arc<GradedContext> {
    product_context(s.l.dim_g, s.l.dim_h, s.a.base_dim, s.a.rank)
}

/// `Q_action = η^i μ(v_i) − P^α μ(w_α)` on the product context.
pub fn build_qaction(s: &StrictActionData) -> Result<Derivation> {
    s.check_shapes()?;
    let ctx = product_ctx_of(s);
    let g = s.l.dim_g;
    let mut out = Derivation::zero(&ctx);
    for (i, m) in s.mu_g.iter().enumerate() {
        out = out.add(&m.embed(&ctx)?.mul_left(&GradedPoly::var(&ctx, i))?)?;
    }
    for (al, sec) in s.mu_h.iter().enumerate() {
        let m = section_to_vf(sec)?.embed(&ctx)?;
        out = out.sub(&m.mul_left(&GradedPoly::var(&ctx, g + al))?)?;
    }
    if !matches!(out.degree()?, None | Some(1)) {
        return Err(G2Error::Invalid("Q_action is not of degree 1".into()));
    }
    Ok(out)
}

/// The fields `(−Q_δ + Q_A, Q_br + Q_action)` on the product context.
pub fn double_q_fields(s: &StrictActionData) -> Result<(Derivation, Derivation)> {
    let ctx = product_ctx_of(s);
    let (qd, qb) = build_qdelta_qbr(&s.l)?;
    let qa = build_q(&s.a)?.embed(&ctx)?;
    let vertical = qa.sub(&qd.embed(&ctx)?)?;
    let horizontal = qb.embed(&ctx)?.add(&build_qaction(s)?)?;
    Ok((vertical, horizontal))
}

/// Commutation of the two homological fields, and each of them squaring to zero.
pub fn check_double_q(s: &StrictActionData) -> Report {
    let mut r = Report::new("double Q-structure");
    let (vert, horiz) = match s.check_shapes().and_then(|_| double_q_fields(s)) {
        Ok(x) => x,
        Err(e) => return shape_failure(&mut r, e),
    };
    let mut add = |name: &str, d: Result<Derivation>| match d {
        Ok(d) => r.exact(name, name, d.is_zero(), first_nonzero(&d)),
        Err(e) => r.exact(name, name, false, e.to_string()),
    };
    add("[-Q_delta + Q_A, Q_br + Q_action] = 0", gcommutator(&vert, &horiz));
    add("[Q_br + Q_action, Q_br + Q_action] = 0", gcommutator(&horiz, &horiz));
    add("[-Q_delta + Q_A, -Q_delta + Q_A] = 0", gcommutator(&vert, &vert));
    r
}

/// `−Q_δ + Q_A + Q_br + Q_action`.
pub fn total_q(s: &StrictActionData) -> Result<Derivation> {
    let (v, h) = double_q_fields(s)?;
    v.add(&h)
}

/// Coordinates `x1..xn, y1..yr` on the total space of `A`, all even.
pub fn total_space_context(n: usize, r: usize) -> Arc<GradedContext> {
    let vars = (1..=n).map(|i| (format!("x{i}"), 0u8)).chain((1..=r).map(|a| (format!("y{a}"), 0u8)));
    GradedContext::new(vars).expect("generated names are unique")
}

/// The Lie algebra action of `𝔥 ⋊ 𝔤` on the total space of `A`, basis
/// `(w_1..w_h, v_1..v_g)` as in [`h_semidirect_g`].
#[derive(Debug, Clone, PartialEq)]
pub struct MuTilde {
    pub base_dim: usize,
    pub rank: usize,
    /// Per `w_α`: the constant vertical field `Σ a_b(x) ∂/∂y_b`.
    pub vertical: Vec<Vec<GradedPoly>>,
    /// Per `v_i`: `(f, g)` for the linear field `g ∂/∂x + f_ab y^a ∂/∂y^b`.
    pub linear: Vec<(Vec<Vec<GradedPoly>>, Vec<GradedPoly>)>,
    fields: Vec<Derivation>,
}

impl MuTilde {
    pub fn dim(&self) -> usize {
        self.fields.len()
    }

    pub fn field(&self, k: usize) -> &Derivation {
        &self.fields[k]
    }

    pub fn ctx(&self) -> Arc<GradedContext> {
        total_space_context(self.base_dim, self.rank)
    }

    /// Field of `Σ coeffs[k] e_k` evaluated at a point `(x, y)`.
    pub fn eval(&self, coeffs: &[f64], point: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.base_dim + self.rank];
        for (c, f) in coeffs.iter().zip(&self.fields) {
            if *c == 0.0 {
                continue;
            }
            for (y, p) in f.components() {
                out[*y] += c * p.eval_f64(point)?;
            }
        }
        Ok(out)
    }

    /// `[μ̃(e_i), μ̃(e_j)] − μ̃([e_i,e_j])` for every basis pair, listed when nonzero.
    pub fn bracket_defects(&self, alg: &StructureConstants) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                let comm = gcommutator(&self.fields[i], &self.fields[j])?;
                let mut img = Derivation::zero(&self.ctx());
                for (k, f) in self.fields.iter().enumerate() {
                    img = img.add(&f.scale(&alg.c[i][j][k]))?;
                }
                let diff = comm.sub(&img)?;
                if !diff.is_zero() {
                    out.push(format!("e{i}, e{j}: {}", first_nonzero(&diff)));
                }
            }
        }
        Ok(out)
    }
}

pub fn build_mu_tilde(s: &StrictActionData) -> Result<MuTilde> {
    s.check_shapes()?;
    let (n, r) = (s.a.base_dim, s.a.rank);
    let ctx = total_space_context(n, r);
    let to_total = |p: &GradedPoly| -> Result<GradedPoly> {
        // base functions only mention x, which keeps its name
        p.embed(&ctx)
    };
    let y = |a: usize| GradedPoly::var(&ctx, n + a);
    let mut fields = Vec::new();
    let mut vertical = Vec::new();
    for sec in &s.mu_h {
        let coeffs: Vec<GradedPoly> = sec.coeffs.iter().map(to_total).collect::<Result<_>>()?;
        let mut d = Derivation::zero(&ctx);
        for (a, c) in coeffs.iter().enumerate() {
            d.set_component(n + a, c.clone())?;
        }
        fields.push(d);
        vertical.push(coeffs);
    }
    let mut linear = Vec::new();
    for m in &s.mu_g {
        let cdo = vf_to_cdo(m)?;
        let f: Vec<Vec<GradedPoly>> =
            cdo.matrix.iter().map(|row| row.iter().map(to_total).collect::<Result<_>>()).collect::<Result<_>>()?;
        let base: Vec<GradedPoly> = cdo.symbol.iter().map(to_total).collect::<Result<_>>()?;
        let mut d = Derivation::zero(&ctx);
        for (x, b) in base.iter().enumerate() {
            d.set_component(x, b.clone())?;
        }
        for bb in 0..r {
            let mut comp = GradedPoly::zero(&ctx);
            for (a, row) in f.iter().enumerate() {
                comp = comp.add(&row[bb].mul(&y(a))?)?;
            }
            d.set_component(n + bb, comp)?;
        }
        fields.push(d);
        linear.push((f, base));
    }
    Ok(MuTilde { base_dim: n, rank: r, vertical, linear, fields })
}

/// Bracket preservation of [`build_mu_tilde`] against `𝔥 ⋊ 𝔤`.
pub fn check_mu_tilde(s: &StrictActionData) -> Report {
    let mut r = Report::new("integrable Lie algebra action");
    let res = build_mu_tilde(s).and_then(|mt| mt.bracket_defects(&h_semidirect_g(&s.l)?));
    match res {
        Ok(defects) => r.exact(
            "mu~ preserves brackets",
            "[mu~(e_i), mu~(e_j)] = mu~([e_i,e_j])",
            defects.is_empty(),
            defects.join("; "),
        ),
        Err(e) => r.exact("shapes", "dimensions agree", false, e.to_string()),
    }
    r
}

/// `𝔤 ⋉ 𝔤[1]` acting through a Lie algebra morphism `η: 𝔤 → Γ(A)`:
/// `μ(w) = η(w)` and `μ(v) = [Q_A, η(v)]`.
pub fn example_ga(g: &StructureConstants, a: &LieAlgebroidData, eta: &[Section]) -> Result<StrictActionData> {
    if eta.len() != g.dim {
        return Err(G2Error::Shape(format!("eta has {} entries, dim g is {}", eta.len(), g.dim)));
    }
    let q = build_q(a)?;
    for i in 0..g.dim {
        for j in (i + 1)..g.dim {
            let lhs = crate::algebroid::derived_bracket(&q, &eta[i], &eta[j])?;
            let mut rhs = a.zero_section();
            for (k, e) in eta.iter().enumerate() {
                rhs = rhs.add(&e.scale(&g.c[i][j][k]))?;
            }
            if lhs != rhs {
                return Err(G2Error::Invalid(format!("eta does not preserve the bracket of e{i}, e{j}")));
            }
        }
    }
    let mu_g = eta.iter().map(|e| gcommutator(&q, &section_to_vf(e)?)).collect::<Result<Vec<_>>>()?;
    Ok(StrictActionData { l: StrictLie2Data::adjoint(g, rat(1)), a: a.clone(), mu_h: eta.to_vec(), mu_g })
}
