//! Strict Lie 2-algebras `δ: 𝔥 → 𝔤` and Lie algebra crossed modules.
//!
//! Basis conventions: `v_i` spans 𝔤 (degree 0), `w_α` spans 𝔥 (degree −1).
//! `bracket_g[i][j][k]` gives `[v_i, v_j] = Σ c_ij^k v_k`,
//! `act[i][α][β]` gives `[v_i, w_α] = Σ act·w_β` and
//! `delta[α][i]` gives `δ w_α = Σ D_αi v_i`.
//!
//! On the shifted space the coordinates are `eta1..` (dual to 𝔤, degree 1)
//! and `P1..` (dual to 𝔥, degree 2).

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebroid::first_nonzero;
use crate::error::{G2Error, Result};
use crate::graded_poly::{fmt_rat, gcommutator, ratio, Derivation, GradedContext, GradedPoly, Rat};
use crate::report::Report;

pub type Tensor3 = Vec<Vec<Vec<Rat>>>;

fn zeros3(a: usize, b: usize, c: usize) -> Tensor3 {
    vec![vec![vec![Rat::zero(); c]; b]; a]
}

fn zeros2(a: usize, b: usize) -> Vec<Vec<Rat>> {
    vec![vec![Rat::zero(); b]; a]
}

/// Structure constants `[e_i, e_j] = Σ c[i][j][k] e_k` of a finite-dimensional Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    pub dim: usize,
    pub c: Tensor3,
}

impl StructureConstants {
    pub fn zero(dim: usize) -> Self {
        StructureConstants { dim, c: zeros3(dim, dim, dim) }
    }

    /// Sets `[e_i, e_j] = v·e_k` and `[e_j, e_i] = −v·e_k`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Rat) {
        self.c[j][i][k] = -v.clone();
        self.c[i][j][k] = v;
    }

    /// Basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        let mut g = Self::zero(3);
        g.set(0, 1, 1, Rat::from_integer(2.into()));
        g.set(0, 2, 2, Rat::from_integer((-2).into()));
        g.set(1, 2, 0, Rat::one());
        g
    }

    /// Basis `(X, Y, Z)` with `[X,Y] = Z` central.
    pub fn heisenberg() -> Self {
        let mut g = Self::zero(3);
        g.set(0, 1, 2, Rat::one());
        g
    }

    /// `[e_i, e_j] = ε_ijk e_k`.
    pub fn so3() -> Self {
        let mut g = Self::zero(3);
        g.set(0, 1, 2, Rat::one());
        g.set(1, 2, 0, Rat::one());
        g.set(2, 0, 1, Rat::one());
        g
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    *o += &xy * &self.c[i][j][k];
                }
            }
        }
        out
    }

    /// First basis triple violating antisymmetry or Jacobi, if any.
    pub fn jacobi_violation(&self) -> Option<String> {
        self.jacobi_violations().into_iter().next()
    }

    /// Every basis triple violating antisymmetry or Jacobi.
    pub fn jacobi_violations(&self) -> Vec<String> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c[i][j][k] != -self.c[j][i][k].clone() {
                        out.push(format!("antisymmetry fails at c[{i}][{j}][{k}]"));
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for m in 0..n {
                        let mut s = Rat::zero();
                        for l in 0..n {
                            s += &self.c[i][j][l] * &self.c[l][k][m];
                            s += &self.c[j][k][l] * &self.c[l][i][m];
                            s += &self.c[k][i][l] * &self.c[l][j][m];
                        }
                        if !s.is_zero() {
                            out.push(format!("Jacobi fails on (e{i},e{j},e{k}), component {m}: {}", fmt_rat(&s)));
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrictLie2Data {
    pub dim_h: usize,
    pub dim_g: usize,
    pub bracket_g: Tensor3,
    pub act: Tensor3,
    pub delta: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossedModuleData {
    pub dim_h: usize,
    pub dim_g: usize,
    pub bracket_h: Tensor3,
    pub bracket_g: Tensor3,
    pub delta: Vec<Vec<Rat>>,
    /// `alpha[i][α][β]`: `α(v_i) w_α = Σ alpha·w_β`.
    pub alpha: Tensor3,
}

/// One structure constant of a [`StrictLie2Data`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lie2Slot {
    /// Bumps `c_ij^k` and `c_ji^k` together so antisymmetry survives.
    BracketG(usize, usize, usize),
    Act(usize, usize, usize),
    Delta(usize, usize),
}

impl StrictLie2Data {
    pub fn zero(dim_h: usize, dim_g: usize) -> Self {
        StrictLie2Data {
            dim_h,
            dim_g,
            bracket_g: zeros3(dim_g, dim_g, dim_g),
            act: zeros3(dim_g, dim_h, dim_h),
            delta: zeros2(dim_h, dim_g),
        }
    }

    /// `𝔤` acting on itself with `δ = s·Id`.
    pub fn adjoint(g: &StructureConstants, scale: Rat) -> Self {
        let mut l = Self::zero(g.dim, g.dim);
        l.bracket_g = g.c.clone();
        l.act = g.c.clone();
        for a in 0..g.dim {
            l.delta[a][a] = scale.clone();
        }
        l
    }

    /// `𝔥 = 0` over the given Lie algebra.
    pub fn from_lie_algebra(g: &StructureConstants) -> Self {
        let mut l = Self::zero(0, g.dim);
        l.bracket_g = g.c.clone();
        l
    }

    pub fn g_algebra(&self) -> StructureConstants {
        StructureConstants { dim: self.dim_g, c: self.bracket_g.clone() }
    }

    pub fn check_shapes(&self) -> Result<()> {
        let (h, g) = (self.dim_h, self.dim_g);
        let ok3 = |t: &Tensor3, a: usize, b: usize, c: usize| {
            t.len() == a && t.iter().all(|x| x.len() == b && x.iter().all(|y| y.len() == c))
        };
        if !ok3(&self.bracket_g, g, g, g) {
            return Err(G2Error::Shape(format!("bracket_g must be {g}x{g}x{g}")));
        }
        if !ok3(&self.act, g, h, h) {
            return Err(G2Error::Shape(format!("act must be {g}x{h}x{h}")));
        }
        if self.delta.len() != h || self.delta.iter().any(|r| r.len() != g) {
            return Err(G2Error::Shape(format!("delta must be {h}x{g}")));
        }
        Ok(())
    }

    /// Enumerates every slot, in storage order.
    pub fn slots(&self) -> Vec<Lie2Slot> {
        let (h, g) = (self.dim_h, self.dim_g);
        let mut out = Vec::new();
        for i in 0..g {
            for j in (i + 1)..g {
                for k in 0..g {
                    out.push(Lie2Slot::BracketG(i, j, k));
                }
            }
        }
        for i in 0..g {
            for a in 0..h {
                for b in 0..h {
                    out.push(Lie2Slot::Act(i, a, b));
                }
            }
        }
        for a in 0..h {
            for i in 0..g {
                out.push(Lie2Slot::Delta(a, i));
            }
        }
        out
    }

    pub fn perturbed(&self, slot: Lie2Slot, by: &Rat) -> Self {
        let mut l = self.clone();
        match slot {
            Lie2Slot::BracketG(i, j, k) => {
                l.bracket_g[i][j][k] += by;
                l.bracket_g[j][i][k] -= by;
            }
            Lie2Slot::Act(i, a, b) => l.act[i][a][b] += by,
            Lie2Slot::Delta(a, i) => l.delta[a][i] += by,
        }
        l
    }

    fn act_on(&self, i: usize, w: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim_h];
        for (a, wa) in w.iter().enumerate() {
            if wa.is_zero() {
                continue;
            }
            for (b, o) in out.iter_mut().enumerate() {
                *o += wa * &self.act[i][a][b];
            }
        }
        out
    }

    fn delta_of(&self, w: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim_g];
        for (a, wa) in w.iter().enumerate() {
            for (i, o) in out.iter_mut().enumerate() {
                *o += wa * &self.delta[a][i];
            }
        }
        out
    }
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("[{}]", parts.join(", "))
}

/// Graded Jacobi and the derivation property of δ, spelled out on basis elements.
pub fn validate_lie2(l: &StrictLie2Data) -> Report {
    let mut r = Report::new("strict Lie 2-algebra");
    if let Err(e) = l.check_shapes() {
        r.exact("shapes", "dimensions agree", false, e.to_string());
        return r;
    }
    let (h, g) = (l.dim_h, l.dim_g);
    let gl = l.g_algebra();

    let v = gl.jacobi_violations();
    r.exact("g Jacobi", "[v1,[v2,v3]] + cyclic = 0", v.is_empty(), v.join("; "));

    // [[v_i,v_j],w] = [v_i,[v_j,w]] − [v_j,[v_i,w]]
    let mut module: Vec<String> = Vec::new();
    for i in 0..g {
        for j in 0..g {
            for a in 0..h {
                let w = unit(h, a);
                let vij = gl.bracket(&unit(g, i), &unit(g, j));
                let mut lhs = vec![Rat::zero(); h];
                for (k, ck) in vij.iter().enumerate() {
                    for (o, x) in lhs.iter_mut().zip(l.act_on(k, &w)) {
                        *o += ck * x;
                    }
                }
                let a1 = l.act_on(i, &l.act_on(j, &w));
                let a2 = l.act_on(j, &l.act_on(i, &w));
                let rhs: Vec<Rat> = a1.iter().zip(&a2).map(|(x, y)| x - y).collect();
                if lhs != rhs {
                    module.push(format!("v{i}, v{j}, w{a}: {} vs {}", fmt_vec(&lhs), fmt_vec(&rhs)));
                }
            }
        }
    }
    r.exact("module axiom", "[[v1,v2],w] = [v1,[v2,w]] - [v2,[v1,w]]", module.is_empty(), module.join("; "));

    let mut equiv: Vec<String> = Vec::new();
    for i in 0..g {
        for a in 0..h {
            let lhs = l.delta_of(&l.act_on(i, &unit(h, a)));
            let rhs = gl.bracket(&unit(g, i), &l.delta_of(&unit(h, a)));
            if lhs != rhs {
                equiv.push(format!("v{i}, w{a}: {} vs {}", fmt_vec(&lhs), fmt_vec(&rhs)));
            }
        }
    }
    r.exact("delta derivation on g x h", "delta[v,w] = [v, delta w]", equiv.is_empty(), equiv.join("; "));

    // δ[w,w'] = 0 forces [δw,w'] + [δw',w] = 0
    let mut sym: Vec<String> = Vec::new();
    for a in 0..h {
        for b in a..h {
            let mut s = vec![Rat::zero(); h];
            for i in 0..g {
                for (o, x) in s.iter_mut().zip(l.act_on(i, &unit(h, b))) {
                    *o += &l.delta[a][i] * x;
                }
                for (o, x) in s.iter_mut().zip(l.act_on(i, &unit(h, a))) {
                    *o += &l.delta[b][i] * x;
                }
            }
            if s.iter().any(|x| !x.is_zero()) {
                sym.push(format!("w{a}, w{b}: {}", fmt_vec(&s)));
            }
        }
    }
    r.exact("delta derivation on h x h", "[delta w, w'] + [delta w', w] = 0", sym.is_empty(), sym.join("; "));

    r.exact("delta squared", "delta^2 = 0", true, "vacuous: the complex has two terms");
    r
}

/// `[w,w']_𝔥 = [δw, w']` and `α(v)w = [v,w]`.
pub fn to_crossed_module(l: &StrictLie2Data) -> Result<CrossedModuleData> {
    let rep = validate_lie2(l);
    if let Some(f) = rep.failures().next() {
        return Err(G2Error::Invalid(format!("{}: {}", f.name, f.details)));
    }
    let (h, g) = (l.dim_h, l.dim_g);
    let mut bracket_h = zeros3(h, h, h);
    for a in 0..h {
        for b in 0..h {
            for c in 0..h {
                let mut s = Rat::zero();
                for i in 0..g {
                    s += &l.delta[a][i] * &l.act[i][b][c];
                }
                bracket_h[a][b][c] = s;
            }
        }
    }
    Ok(CrossedModuleData {
        dim_h: h,
        dim_g: g,
        bracket_h,
        bracket_g: l.bracket_g.clone(),
        delta: l.delta.clone(),
        alpha: l.act.clone(),
    })
}

/// Forgets `bracket_h`, which the Peiffer identity recovers from δ and α.
pub fn from_crossed_module(c: &CrossedModuleData) -> Result<StrictLie2Data> {
    let rep = validate_crossed_module(c);
    if let Some(f) = rep.failures().next() {
        return Err(G2Error::Invalid(format!("{}: {}", f.name, f.details)));
    }
    Ok(StrictLie2Data {
        dim_h: c.dim_h,
        dim_g: c.dim_g,
        bracket_g: c.bracket_g.clone(),
        act: c.alpha.clone(),
        delta: c.delta.clone(),
    })
}

pub fn validate_crossed_module(c: &CrossedModuleData) -> Report {
    let mut r = Report::new("Lie algebra crossed module");
    let l = StrictLie2Data {
        dim_h: c.dim_h,
        dim_g: c.dim_g,
        bracket_g: c.bracket_g.clone(),
        act: c.alpha.clone(),
        delta: c.delta.clone(),
    };
    let shape_ok = l.check_shapes().and_then(|_| {
        let h = c.dim_h;
        let ok = c.bracket_h.len() == h && c.bracket_h.iter().all(|x| x.len() == h && x.iter().all(|y| y.len() == h));
        if ok {
            Ok(())
        } else {
            Err(G2Error::Shape(format!("bracket_h must be {h}x{h}x{h}")))
        }
    });
    if let Err(e) = shape_ok {
        r.exact("shapes", "dimensions agree", false, e.to_string());
        return r;
    }
    let (h, g) = (c.dim_h, c.dim_g);
    let gl = StructureConstants { dim: g, c: c.bracket_g.clone() };
    let hl = StructureConstants { dim: h, c: c.bracket_h.clone() };

    let v = hl.jacobi_violations();
    r.exact("h Lie algebra", "[w1,[w2,w3]] + cyclic = 0", v.is_empty(), v.join("; "));
    let v = gl.jacobi_violations();
    r.exact("g Lie algebra", "[v1,[v2,v3]] + cyclic = 0", v.is_empty(), v.join("; "));

    let mut morph: Vec<String> = Vec::new();
    for a in 0..h {
        for b in 0..h {
            let lhs = l.delta_of(&hl.bracket(&unit(h, a), &unit(h, b)));
            let rhs = gl.bracket(&l.delta_of(&unit(h, a)), &l.delta_of(&unit(h, b)));
            if lhs != rhs {
                morph.push(format!("w{a}, w{b}: {} vs {}", fmt_vec(&lhs), fmt_vec(&rhs)));
            }
        }
    }
    r.exact("delta morphism", "delta[w,w'] = [delta w, delta w']", morph.is_empty(), morph.join("; "));

    let full = validate_lie2(&l);
    for name in ["module axiom", "delta derivation on g x h"] {
        let ch = full.check(name).expect("present").clone();
        r.push(ch);
    }

    let mut der: Vec<String> = Vec::new();
    for i in 0..g {
        for a in 0..h {
            for b in 0..h {
                let lhs = l.act_on(i, &hl.bracket(&unit(h, a), &unit(h, b)));
                let r1 = hl.bracket(&l.act_on(i, &unit(h, a)), &unit(h, b));
                let r2 = hl.bracket(&unit(h, a), &l.act_on(i, &unit(h, b)));
                let rhs: Vec<Rat> = r1.iter().zip(&r2).map(|(x, y)| x + y).collect();
                if lhs != rhs {
                    der.push(format!("v{i}, w{a}, w{b}: {} vs {}", fmt_vec(&lhs), fmt_vec(&rhs)));
                }
            }
        }
    }
    r.exact("alpha by derivations", "alpha(v)[w,w'] = [alpha(v)w,w'] + [w,alpha(v)w']", der.is_empty(), der.join("; "));

    let mut peiffer: Vec<String> = Vec::new();
    for a in 0..h {
        for b in 0..h {
            let mut lhs = vec![Rat::zero(); h];
            for i in 0..g {
                for (o, x) in lhs.iter_mut().zip(l.act_on(i, &unit(h, b))) {
                    *o += &c.delta[a][i] * x;
                }
            }
            let rhs = hl.bracket(&unit(h, a), &unit(h, b));
            if lhs != rhs {
                peiffer.push(format!("w{a}, w{b}: {} vs {}", fmt_vec(&lhs), fmt_vec(&rhs)));
            }
        }
    }
    r.exact("Peiffer", "alpha(delta w)w' = [w,w']", peiffer.is_empty(), peiffer.join("; "));
    r
}

pub fn lie2_context(dim_g: usize, dim_h: usize) -> Arc<GradedContext> {
    let vars = (1..=dim_g).map(|i| (format!("eta{i}"), 1u8)).chain((1..=dim_h).map(|a| (format!("P{a}"), 2u8)));
    GradedContext::new(vars).expect("generated names are unique")
}

/// `Q_δ = −P^α D_αk ∂/∂η^k` and
/// `Q_br = ½ η^j η^i c_ij^k ∂/∂η^k − η^i P^α act_iα^β ∂/∂P^β`.
pub fn build_qdelta_qbr(l: &StrictLie2Data) -> Result<(Derivation, Derivation)> {
    l.check_shapes()?;
    let (h, g) = (l.dim_h, l.dim_g);
    let ctx = lie2_context(g, h);
    let eta = |i: usize| GradedPoly::var(&ctx, i);
    let p = |a: usize| GradedPoly::var(&ctx, g + a);
    let half = ratio(1, 2);

    let mut qd = Derivation::zero(&ctx);
    for k in 0..g {
        let mut comp = GradedPoly::zero(&ctx);
        for a in 0..h {
            comp = comp.sub(&p(a).scale(&l.delta[a][k]))?;
        }
        qd.set_component(k, comp)?;
    }

    let mut qb = Derivation::zero(&ctx);
    for k in 0..g {
        let mut comp = GradedPoly::zero(&ctx);
        for i in 0..g {
            for j in 0..g {
                let c = &l.bracket_g[i][j][k];
                if !c.is_zero() {
                    comp = comp.add(&eta(j).mul(&eta(i))?.scale(&(c * &half)))?;
                }
            }
        }
        qb.set_component(k, comp)?;
    }
    for b in 0..h {
        let mut comp = GradedPoly::zero(&ctx);
        for i in 0..g {
            for a in 0..h {
                let c = &l.act[i][a][b];
                if !c.is_zero() {
                    comp = comp.sub(&eta(i).mul(&p(a))?.scale(c))?;
                }
            }
        }
        qb.set_component(g + b, comp)?;
    }
    Ok((qd, qb))
}

/// Passes iff `Q_br` and `Q_δ` self-commute and commute with each other.
pub fn check_qalgebra(l: &StrictLie2Data) -> Report {
    let mut r = Report::new("Q-algebra");
    let (qd, qb) = match build_qdelta_qbr(l) {
        Ok(x) => x,
        Err(e) => {
            r.exact("shapes", "dimensions agree", false, e.to_string());
            return r;
        }
    };
    let mut add = |name: &str, anchor: &str, d: Result<Derivation>| match d {
        Ok(d) => r.exact(name, anchor, d.is_zero(), first_nonzero(&d)),
        Err(e) => r.exact(name, anchor, false, e.to_string()),
    };
    add("[Q_br,Q_br] = 0", "[Q_br,Q_br] = 0", gcommutator(&qb, &qb));
    add("[Q_delta,Q_delta] = 0", "[Q_delta,Q_delta] = 0", gcommutator(&qd, &qd));
    add("[Q_br,Q_delta] = 0", "[Q_br,-Q_delta] = 0", gcommutator(&qb, &qd));
    r
}

/// Reads a strict Lie 2-algebra back from the linear and quadratic parts of
/// `Q` via `δe_i = (−1)^{|e_i|} Q^k_i e_k` and `[e_i,e_j] = (−1)^{|e_j|} Q^k_ij e_k`,
/// with `Q^k_i = ∂_i Q^k` and `Q^k_ij = ∂_i ∂_j Q^k`.
pub fn readback(qd: &Derivation, qb: &Derivation) -> Result<StrictLie2Data> {
    let ctx = qd.ctx().clone();
    let g = ctx.vars().iter().take_while(|(_, d)| *d == 1).count();
    let h = ctx.len() - g;
    if *ctx != *lie2_context(g, h) {
        return Err(G2Error::Shape("expected the eta/P context".into()));
    }
    let constant = |p: GradedPoly| -> Result<Rat> {
        if p.is_zero() {
            return Ok(Rat::zero());
        }
        match p.terms().iter().next() {
            Some((m, c)) if p.terms().len() == 1 && m.iter().all(|e| *e == 0) => Ok(c.clone()),
            _ => Err(G2Error::Invalid(format!("{p} is not a constant; Q is not at most quadratic"))),
        }
    };
    // L-degree of e_i: 𝔤 basis (eta) 0, 𝔥 basis (P) −1.
    let sign = |i: usize| if i < g { Rat::one() } else { -Rat::one() };
    let mut l = StrictLie2Data::zero(h, g);
    for a in 0..h {
        for k in 0..g {
            let qk = constant(qd.component(k).partial(g + a))?;
            l.delta[a][k] = sign(g + a) * qk;
        }
    }
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                let q = constant(qb.component(k).partial(j).partial(i))?;
                l.bracket_g[i][j][k] = sign(j) * q;
            }
        }
        for a in 0..h {
            for b in 0..h {
                let q = constant(qb.component(g + b).partial(g + a).partial(i))?;
                l.act[i][a][b] = sign(g + a) * q;
            }
        }
    }
    Ok(l)
}

/// `𝔥 ⋊ 𝔤` on the basis `(w_1..w_h, v_1..v_g)`:
/// `[(w,v),(w',v')] = ([v,w'] − [v',w], [v,v'])`.
pub fn h_semidirect_g(l: &StrictLie2Data) -> Result<StructureConstants> {
    l.check_shapes()?;
    let (h, g) = (l.dim_h, l.dim_g);
    let mut s = StructureConstants::zero(h + g);
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                s.c[h + i][h + j][h + k] = l.bracket_g[i][j][k].clone();
            }
        }
        for a in 0..h {
            for b in 0..h {
                s.c[h + i][a][b] = l.act[i][a][b].clone();
                s.c[a][h + i][b] = -l.act[i][a][b].clone();
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_poly::rat;

    #[test]
    fn sl2_adjoint_passes_everything() {
        let l = StrictLie2Data::adjoint(&StructureConstants::sl2(), rat(1));
        assert!(validate_lie2(&l).passed());
        assert!(check_qalgebra(&l).passed());
        let c = to_crossed_module(&l).unwrap();
        assert_eq!(c.bracket_h, l.bracket_g);
        assert_eq!(from_crossed_module(&c).unwrap(), l);
    }

    #[test]
    fn scaled_identity_is_still_valid() {
        let l = StrictLie2Data::adjoint(&StructureConstants::sl2(), rat(2));
        assert!(validate_lie2(&l).passed());
    }

    #[test]
    fn abelian_with_zero_delta_gives_zero_fields() {
        let l = StrictLie2Data::zero(2, 3);
        let (qd, qb) = build_qdelta_qbr(&l).unwrap();
        assert!(qd.is_zero() && qb.is_zero());
        assert!(to_crossed_module(&l).unwrap().bracket_h.iter().flatten().flatten().all(Zero::is_zero));
    }

    #[test]
    fn readback_inverts_build() {
        let mut l = StrictLie2Data::adjoint(&StructureConstants::heisenberg(), rat(1));
        l.delta[0][1] = rat(5);
        let (qd, qb) = build_qdelta_qbr(&l).unwrap();
        assert_eq!(readback(&qd, &qb).unwrap(), l);
    }

    #[test]
    fn non_derivation_act_fails() {
        let l = StrictLie2Data::adjoint(&StructureConstants::sl2(), rat(1)).perturbed(Lie2Slot::Act(1, 1, 1), &rat(1));
        assert!(!validate_lie2(&l).passed());
        let rep = check_qalgebra(&l);
        assert!(!rep.passed());
        assert!(rep.failures().any(|c| c.details.contains("component")));
    }

    #[test]
    fn semidirect_has_expected_dimension() {
        let l = StrictLie2Data::adjoint(&StructureConstants::sl2(), rat(1));
        let s = h_semidirect_g(&l).unwrap();
        assert_eq!(s.dim, 6);
        assert!(s.jacobi_violation().is_none());
    }
}
