//! Matrix Lie groups from the catalog, their crossed modules, the strict
//! 2-group `H ⋊ G ⇉ G`, the LA-group `𝔥 ⋊ G` and the catalog groupoids.
//!
//! Basis matrices `B_i` are normalised so that `[B_i, B_j] = −c_ij^k B_k`
//! (matrix commutator against the catalog structure constants). With this
//! choice a left action `ψ` differentiates to a bracket-preserving map
//! `v ↦ d/dt ψ(exp(tv), ·)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{G2Error, Result};
use crate::graded_poly::rat_to_f64;
use crate::lie2::StructureConstants;
use crate::report::{MaxResidual, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupTag {
    /// `R^n` as unipotent `(n+1)×(n+1)` matrices.
    Abelian(usize),
    /// Upper unitriangular `3×3` matrices.
    Heisenberg,
    /// `SL(2, R)` near the identity.
    Sl2,
}

impl GroupTag {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "heisenberg" => Ok(GroupTag::Heisenberg),
            "sl2" => Ok(GroupTag::Sl2),
            _ => name
                .strip_prefix("abelian")
                .and_then(|n| n.parse().ok())
                .map(GroupTag::Abelian)
                .ok_or_else(|| G2Error::UnknownCatalog(name.to_string())),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            GroupTag::Abelian(n) => n,
            GroupTag::Heisenberg | GroupTag::Sl2 => 3,
        }
    }

    pub fn matrix_size(self) -> usize {
        match self {
            GroupTag::Abelian(n) => n + 1,
            GroupTag::Heisenberg => 3,
            GroupTag::Sl2 => 2,
        }
    }

    pub fn algebra(self) -> StructureConstants {
        match self {
            GroupTag::Abelian(n) => StructureConstants::zero(n),
            GroupTag::Heisenberg => StructureConstants::heisenberg(),
            GroupTag::Sl2 => StructureConstants::sl2(),
        }
    }

    fn nilpotent(self) -> bool {
        !matches!(self, GroupTag::Sl2)
    }

    pub fn basis(self) -> Vec<DMatrix<f64>> {
        let s = self.matrix_size();
        let unit = |i: usize, j: usize, v: f64| {
            let mut m = DMatrix::zeros(s, s);
            m[(i, j)] = v;
            m
        };
        match self {
            GroupTag::Abelian(n) => (0..n).map(|i| unit(0, i + 1, 1.0)).collect(),
            GroupTag::Heisenberg => vec![unit(0, 1, 1.0), unit(1, 2, 1.0), unit(0, 2, -1.0)],
            GroupTag::Sl2 => {
                let h = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
                vec![h, unit(0, 1, -1.0), unit(1, 0, -1.0)]
            }
        }
    }

    /// `Σ coords_i B_i`.
    pub fn algebra_matrix(self, coords: &[f64]) -> DMatrix<f64> {
        let s = self.matrix_size();
        self.basis().iter().zip(coords).fold(DMatrix::zeros(s, s), |acc, (b, c)| acc + b * *c)
    }

    /// Inverse of [`GroupTag::algebra_matrix`] on the span of the basis.
    pub fn algebra_coords(self, x: &DMatrix<f64>) -> Vec<f64> {
        match self {
            GroupTag::Abelian(n) => (0..n).map(|i| x[(0, i + 1)]).collect(),
            GroupTag::Heisenberg => vec![x[(0, 1)], x[(1, 2)], -x[(0, 2)]],
            GroupTag::Sl2 => vec![x[(1, 1)], -x[(0, 1)], -x[(1, 0)]],
        }
    }

    pub fn identity(self) -> MatrixGroupElement {
        let s = self.matrix_size();
        MatrixGroupElement { matrix: DMatrix::identity(s, s), tag: self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGroupElement {
    pub matrix: DMatrix<f64>,
    pub tag: GroupTag,
}

impl MatrixGroupElement {
    pub fn new(matrix: DMatrix<f64>, tag: GroupTag) -> Result<Self> {
        let s = tag.matrix_size();
        if matrix.shape() != (s, s) {
            return Err(G2Error::Shape(format!("expected a {s}x{s} matrix")));
        }
        if matrix.determinant().abs() <= 1e-10 {
            return Err(G2Error::Invalid("matrix is singular".into()));
        }
        Ok(MatrixGroupElement { matrix, tag })
    }

    pub fn mul(&self, other: &Self) -> Self {
        MatrixGroupElement { matrix: &self.matrix * &other.matrix, tag: self.tag }
    }

    pub fn inv(&self) -> Self {
        let matrix = self.matrix.clone().try_inverse().expect("group elements are invertible");
        MatrixGroupElement { matrix, tag: self.tag }
    }

    /// `g x g⁻¹` for an algebra element in basis coordinates.
    pub fn adjoint(&self, coords: &[f64]) -> Vec<f64> {
        let x = self.tag.algebra_matrix(coords);
        self.tag.algebra_coords(&(&self.matrix * x * self.inv().matrix))
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).abs().max()
    }

    /// Matrix acting on a column vector, for groups acting linearly on `R^k`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(x)).iter().copied().collect()
    }
}

/// Exponential of `Σ coords_i B_i`: a finite sum for the nilpotent entries,
/// scaling and squaring otherwise.
pub fn exp_to_group(coords: &[f64], tag: GroupTag) -> Result<MatrixGroupElement> {
    if coords.len() != tag.dim() {
        return Err(G2Error::Shape(format!("{tag:?} has dimension {}", tag.dim())));
    }
    let x = tag.algebra_matrix(coords);
    let s = tag.matrix_size();
    let matrix = if tag.nilpotent() {
        // X³ = 0 for every nilpotent catalog entry
        DMatrix::identity(s, s) + &x + &x * &x * 0.5
    } else {
        x.exp()
    };
    Ok(MatrixGroupElement { matrix, tag })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiKind {
    Conjugation,
    Trivial,
}

/// A crossed module of matrix groups with `G = H` as groups and `t = id`;
/// the catalog varies the group and the action `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCrossedModule {
    pub tag: GroupTag,
    pub phi_kind: PhiKind,
}

impl GroupCrossedModule {
    pub fn conjugation(tag: GroupTag) -> Self {
        GroupCrossedModule { tag, phi_kind: PhiKind::Conjugation }
    }

    pub fn g_tag(&self) -> GroupTag {
        self.tag
    }

    pub fn h_tag(&self) -> GroupTag {
        self.tag
    }

    pub fn t(&self, h: &MatrixGroupElement) -> MatrixGroupElement {
        h.clone()
    }

    pub fn phi(&self, g: &MatrixGroupElement, h: &MatrixGroupElement) -> MatrixGroupElement {
        match self.phi_kind {
            PhiKind::Conjugation => g.mul(h).mul(&g.inv()),
            PhiKind::Trivial => h.clone(),
        }
    }

    /// Derivative of `φ(g)` at the identity of `H`, acting on `𝔥` coordinates.
    pub fn act_on_h(&self, g: &MatrixGroupElement, w: &[f64]) -> Vec<f64> {
        match self.phi_kind {
            PhiKind::Conjugation => g.adjoint(w),
            PhiKind::Trivial => w.to_vec(),
        }
    }

    pub fn e_g(&self) -> MatrixGroupElement {
        self.tag.identity()
    }

    pub fn e_h(&self) -> MatrixGroupElement {
        self.tag.identity()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoGroupElement {
    pub h: MatrixGroupElement,
    pub g: MatrixGroupElement,
}

impl TwoGroupElement {
    pub fn dist(&self, other: &Self) -> f64 {
        self.h.dist(&other.h).max(self.g.dist(&other.g))
    }
}

/// `(h₁ φ(g₁)(h₂), g₁ g₂)`.
pub fn twogroup_mul(cm: &GroupCrossedModule, a: &TwoGroupElement, b: &TwoGroupElement) -> TwoGroupElement {
    TwoGroupElement { h: a.h.mul(&cm.phi(&a.g, &b.h)), g: a.g.mul(&b.g) }
}

pub fn twogroup_inv(cm: &GroupCrossedModule, a: &TwoGroupElement) -> TwoGroupElement {
    let gi = a.g.inv();
    TwoGroupElement { h: cm.phi(&gi, &a.h.inv()), g: gi }
}

pub fn twogroup_src(a: &TwoGroupElement) -> MatrixGroupElement {
    a.g.clone()
}

pub fn twogroup_tgt(cm: &GroupCrossedModule, a: &TwoGroupElement) -> MatrixGroupElement {
    cm.t(&a.h).mul(&a.g)
}

/// Groupoid composition of the action groupoid `H × G ⇉ G`:
/// `(h, g) ∘ (h', g') = (h h', g')` when `g = t(h') g'`.
pub fn twogroup_compose(
    cm: &GroupCrossedModule,
    a: &TwoGroupElement,
    b: &TwoGroupElement,
    tol: f64,
) -> Result<TwoGroupElement> {
    let gap = twogroup_src(a).dist(&twogroup_tgt(cm, b));
    if gap > tol {
        return Err(G2Error::NotComposable(format!("s(a) and t(b) differ by {gap:.3e}")));
    }
    Ok(TwoGroupElement { h: a.h.mul(&b.h), g: b.g.clone() })
}

/// `(w₁ + g₁·w₂, g₁ g₂)` on `𝔥 ⋊ G`.
pub fn la_group_mul(
    cm: &GroupCrossedModule,
    a: &(Vec<f64>, MatrixGroupElement),
    b: &(Vec<f64>, MatrixGroupElement),
) -> (Vec<f64>, MatrixGroupElement) {
    let moved = cm.act_on_h(&a.1, &b.0);
    let w = a.0.iter().zip(&moved).map(|(x, y)| x + y).collect();
    (w, a.1.mul(&b.1))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coords(rng: &mut impl Rng, dim: usize, radius: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-radius..radius)).collect()
}

pub fn random_element(rng: &mut impl Rng, tag: GroupTag, radius: f64) -> MatrixGroupElement {
    exp_to_group(&random_coords(rng, tag.dim(), radius), tag).expect("dimension matches")
}

/// `[x, y]` for real coordinate vectors.
pub fn bracket_f64(alg: &StructureConstants, x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; alg.dim];
    for i in 0..alg.dim {
        for j in 0..alg.dim {
            for (k, o) in out.iter_mut().enumerate() {
                *o += x[i] * y[j] * rat_to_f64(&alg.c[i][j][k]);
            }
        }
    }
    out
}

pub fn vec_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Finite-difference step used for derivative checks at the group level.
pub const FD_STEP: f64 = 1e-4;

/// Group, crossed-module, 2-group and LA-group identities on sampled elements.
pub fn validate_group_crossed_module(
    cm: &GroupCrossedModule,
    samples: usize,
    seed: u64,
    tol: f64,
    fd_tol: f64,
) -> Report {
    let mut r = Report::new(format!("group crossed module {:?} / {:?}", cm.tag, cm.phi_kind));
    let mut rng = seeded_rng(seed);
    let tag = cm.tag;
    let radius = 1.0;
    let [mut assoc, mut unit, mut inverse, mut equiv, mut peiffer, mut phi_act, mut phi_aut] =
        [MaxResidual::default(); 7];
    let [mut tg_assoc, mut tg_unit, mut tg_inv, mut st_hom, mut comp_assoc, mut comp_unit] =
        [MaxResidual::default(); 6];
    let [mut la_assoc, mut la_unit, mut la_diff, mut tg_la] = [MaxResidual::default(); 4];
    let alg = tag.algebra();
    let e = tag.identity();
    for _ in 0..samples {
        let g1 = random_element(&mut rng, tag, radius);
        let g2 = random_element(&mut rng, tag, radius);
        let g3 = random_element(&mut rng, tag, radius);
        let h1 = random_element(&mut rng, tag, radius);
        let h2 = random_element(&mut rng, tag, radius);

        assoc.see(g1.mul(&g2).mul(&g3).dist(&g1.mul(&g2.mul(&g3))));
        unit.see(g1.mul(&e).dist(&g1).max(e.mul(&g1).dist(&g1)));
        inverse.see(g1.mul(&g1.inv()).dist(&e));

        let lhs = cm.t(&cm.phi(&g1, &h1));
        let rhs = g1.mul(&cm.t(&h1)).mul(&g1.inv());
        equiv.see(lhs.dist(&rhs));
        peiffer.see(cm.phi(&cm.t(&h1), &h2).dist(&h1.mul(&h2).mul(&h1.inv())));
        phi_act.see(cm.phi(&g1.mul(&g2), &h1).dist(&cm.phi(&g1, &cm.phi(&g2, &h1))));
        phi_aut.see(cm.phi(&g1, &h1.mul(&h2)).dist(&cm.phi(&g1, &h1).mul(&cm.phi(&g1, &h2))));

        let a = TwoGroupElement { h: h1.clone(), g: g1.clone() };
        let b = TwoGroupElement { h: h2.clone(), g: g2.clone() };
        let c = TwoGroupElement { h: random_element(&mut rng, tag, radius), g: g3.clone() };
        let one = TwoGroupElement { h: cm.e_h(), g: cm.e_g() };
        tg_assoc.see(twogroup_mul(cm, &twogroup_mul(cm, &a, &b), &c).dist(&twogroup_mul(
            cm,
            &a,
            &twogroup_mul(cm, &b, &c),
        )));
        tg_unit.see(twogroup_mul(cm, &a, &one).dist(&a).max(twogroup_mul(cm, &one, &a).dist(&a)));
        tg_inv.see(twogroup_mul(cm, &a, &twogroup_inv(cm, &a)).dist(&one));
        let ab = twogroup_mul(cm, &a, &b);
        st_hom.see(twogroup_src(&ab).dist(&twogroup_src(&a).mul(&twogroup_src(&b))));
        st_hom.see(twogroup_tgt(cm, &ab).dist(&twogroup_tgt(cm, &a).mul(&twogroup_tgt(cm, &b))));

        // composable chain a3 ∘ a2 ∘ a1 over g1
        let a1 = TwoGroupElement { h: h1.clone(), g: g1.clone() };
        let a2 = TwoGroupElement { h: h2.clone(), g: twogroup_tgt(cm, &a1) };
        let a3 = TwoGroupElement { h: g3.clone(), g: twogroup_tgt(cm, &a2) };
        match (|| -> Result<f64> {
            let l = twogroup_compose(cm, &twogroup_compose(cm, &a3, &a2, tol)?, &a1, tol)?;
            let rr = twogroup_compose(cm, &a3, &twogroup_compose(cm, &a2, &a1, tol)?, tol)?;
            Ok(l.dist(&rr))
        })() {
            Ok(d) => comp_assoc.see(d),
            Err(_) => comp_assoc.see(f64::INFINITY),
        }
        let unit_at = TwoGroupElement { h: cm.e_h(), g: twogroup_tgt(cm, &a1) };
        match twogroup_compose(cm, &unit_at, &a1, tol) {
            Ok(x) => comp_unit.see(x.dist(&a1)),
            Err(_) => comp_unit.see(f64::INFINITY),
        }

        let w1 = random_coords(&mut rng, tag.dim(), radius);
        let w2 = random_coords(&mut rng, tag.dim(), radius);
        let w3 = random_coords(&mut rng, tag.dim(), radius);
        let p = (w1.clone(), g1.clone());
        let q = (w2.clone(), g2.clone());
        let s = (w3, g3.clone());
        let l = la_group_mul(cm, &la_group_mul(cm, &p, &q), &s);
        let rr = la_group_mul(cm, &p, &la_group_mul(cm, &q, &s));
        la_assoc.see(vec_dist(&l.0, &rr.0).max(l.1.dist(&rr.1)));
        let zero = (vec![0.0; tag.dim()], e.clone());
        let u = la_group_mul(cm, &zero, &p);
        la_unit.see(vec_dist(&u.0, &p.0).max(u.1.dist(&p.1)));

        // d/dt (0, exp(tv))·(w, e) at t = 0 reproduces −[v, w] on 𝔥
        let v = random_coords(&mut rng, tag.dim(), radius);
        let at = |t: f64| {
            let gt = exp_to_group(&v.iter().map(|x| x * t).collect::<Vec<_>>(), tag).expect("dim");
            la_group_mul(cm, &(vec![0.0; tag.dim()], gt), &(w1.clone(), e.clone())).0
        };
        let plus = at(FD_STEP);
        let minus = at(-FD_STEP);
        let deriv: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * FD_STEP)).collect();
        let expected: Vec<f64> = match cm.phi_kind {
            PhiKind::Conjugation => bracket_f64(&alg, &v, &w1).iter().map(|x| -x).collect(),
            PhiKind::Trivial => vec![0.0; tag.dim()],
        };
        la_diff.see(vec_dist(&deriv, &expected));

        // H-part of twogroup_mul linearised at e_H gives la_group_mul's 𝔥-part
        let hw = |t: f64| exp_to_group(&w2.iter().map(|x| x * t).collect::<Vec<_>>(), tag).expect("dim");
        let prod = |t: f64| {
            let x = TwoGroupElement { h: hw(t), g: e.clone() };
            let y = TwoGroupElement { h: e.clone(), g: g1.clone() };
            let z = twogroup_mul(cm, &y, &x);
            tag.algebra_coords(&(z.h.matrix - DMatrix::identity(tag.matrix_size(), tag.matrix_size())))
        };
        let (pp, mm) = (prod(FD_STEP), prod(-FD_STEP));
        let d: Vec<f64> = pp.iter().zip(&mm).map(|(a, b)| (a - b) / (2.0 * FD_STEP)).collect();
        let la = la_group_mul(cm, &(vec![0.0; tag.dim()], g1.clone()), &(w2.clone(), e.clone())).0;
        tg_la.see(vec_dist(&d, &la));
    }
    let n = format!("{samples} samples");
    r.numeric("G associativity", "(g1 g2) g3 = g1 (g2 g3)", assoc.0, tol, &n);
    r.numeric("G unit", "g e = e g = g", unit.0, tol, &n);
    r.numeric("G inverse", "g g^-1 = e", inverse.0, tol, &n);
    r.numeric("t equivariance", "t(phi(g)h) = g t(h) g^-1", equiv.0, tol, &n);
    r.numeric("Peiffer", "phi(t(h))h' = h h' h^-1", peiffer.0, tol, &n);
    r.numeric("phi is an action", "phi(g1 g2) = phi(g1) phi(g2)", phi_act.0, tol, &n);
    r.numeric("phi by automorphisms", "phi(g)(h h') = phi(g)h phi(g)h'", phi_aut.0, tol, &n);
    r.numeric("2-group associativity", "(ab)c = a(bc)", tg_assoc.0, tol, &n);
    r.numeric("2-group unit", "a (e,e) = (e,e) a = a", tg_unit.0, tol, &n);
    r.numeric("2-group inverse", "a a^-1 = (e,e)", tg_inv.0, tol, &n);
    r.numeric("s, t are morphisms", "s(ab) = s(a)s(b), t(ab) = t(a)t(b)", st_hom.0, tol, &n);
    r.numeric("vertical associativity", "(a3 a2) a1 = a3 (a2 a1)", comp_assoc.0, tol, &n);
    r.numeric("vertical unit", "(e, t(a)) a = a", comp_unit.0, tol, &n);
    r.numeric("LA-group associativity", "((w1,g1)(w2,g2))(w3,g3) = (w1,g1)((w2,g2)(w3,g3))", la_assoc.0, tol, &n);
    r.numeric("LA-group unit", "(0,e)(w,g) = (w,g)", la_unit.0, tol, &n);
    r.numeric("LA-group differentiates to the bracket", "d/dt (0,exp tv)(w,e) = -[v,w]", la_diff.0, fd_tol, &n);
    r.numeric("2-group linearises to the LA-group", "d/dt (e,g)(exp tw, e) = (g.w, g)", tg_la.0, fd_tol, &n);
    r
}

/// A point of a catalog groupoid `Γ ⇉ M`.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupoidElement {
    /// Pair groupoid `M × M`: target `m1`, source `m2`.
    Pair(Vec<f64>, Vec<f64>),
    /// Action groupoid of a linear action: source `m`, target `k·m`.
    Action(MatrixGroupElement, Vec<f64>),
    /// A group viewed as a groupoid over a point.
    Group(MatrixGroupElement),
}

impl GroupoidElement {
    pub fn src(&self) -> Vec<f64> {
        match self {
            GroupoidElement::Pair(_, m2) => m2.clone(),
            GroupoidElement::Action(_, m) => m.clone(),
            GroupoidElement::Group(_) => Vec::new(),
        }
    }

    pub fn tgt(&self) -> Vec<f64> {
        match self {
            GroupoidElement::Pair(m1, _) => m1.clone(),
            GroupoidElement::Action(k, m) => k.apply(m),
            GroupoidElement::Group(_) => Vec::new(),
        }
    }

    /// `self ∘ other`, defined when `s(self) = t(other)`.
    pub fn compose(&self, other: &Self, tol: f64) -> Result<Self> {
        let gap = vec_dist(&self.src(), &other.tgt());
        if gap > tol {
            return Err(G2Error::NotComposable(format!("groupoid arrows miss by {gap:.3e}")));
        }
        match (self, other) {
            (GroupoidElement::Pair(m1, _), GroupoidElement::Pair(_, m3)) => {
                Ok(GroupoidElement::Pair(m1.clone(), m3.clone()))
            }
            (GroupoidElement::Action(k1, _), GroupoidElement::Action(k2, m2)) => {
                Ok(GroupoidElement::Action(k1.mul(k2), m2.clone()))
            }
            (GroupoidElement::Group(a), GroupoidElement::Group(b)) => Ok(GroupoidElement::Group(a.mul(b))),
            _ => Err(G2Error::NotComposable("arrows from different groupoids".into())),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupoidElement::Pair(m1, m2) => GroupoidElement::Pair(m2.clone(), m1.clone()),
            GroupoidElement::Action(k, m) => GroupoidElement::Action(k.inv(), k.apply(m)),
            GroupoidElement::Group(a) => GroupoidElement::Group(a.inv()),
        }
    }

    pub fn dist(&self, other: &Self) -> f64 {
        match (self, other) {
            (GroupoidElement::Pair(a1, a2), GroupoidElement::Pair(b1, b2)) => vec_dist(a1, b1).max(vec_dist(a2, b2)),
            (GroupoidElement::Action(k1, m1), GroupoidElement::Action(k2, m2)) => k1.dist(k2).max(vec_dist(m1, m2)),
            (GroupoidElement::Group(a), GroupoidElement::Group(b)) => a.dist(b),
            _ => f64::INFINITY,
        }
    }
}
