//! Lie algebroids over a single polynomial chart, in frame coordinates.
//!
//! The chart has base coordinates `x1..xn` (degree 0) followed by fibre
//! coordinates `xi1..xir` (degree 1) on `A[1]`. Sections are degree −1 vector
//! fields `f_a ∂/∂xi_a`; degree 0 fields of the shape
//! `g_i ∂/∂x_i + f_ab xi_a ∂/∂xi_b` are covariant differential operators on
//! the dual bundle.
//!
//! Frame convention for [`CdoData`]: `matrix[i][j]` is the coefficient of the
//! i-th frame element in `Y(e_j)`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{G2Error, Result};
use crate::graded_poly::{gcommutator, ratio, Derivation, GradedContext, GradedPoly, Rat};
use crate::lie2::StructureConstants;
use crate::report::Report;

pub fn algebroid_context(n: usize, r: usize) -> Arc<GradedContext> {
    let vars = (1..=n).map(|i| (format!("x{i}"), 0u8)).chain((1..=r).map(|a| (format!("xi{a}"), 1u8)));
    GradedContext::new(vars).expect("generated names are unique")
}

/// Reads `(n, r)` from a context laid out as `x1..xn, xi1..xir`.
pub fn chart_dims(ctx: &GradedContext) -> Result<(usize, usize)> {
    let n = ctx.vars().iter().take_while(|(_, d)| *d == 0).count();
    let r = ctx.len() - n;
    for i in 0..n {
        if ctx.name(i) != format!("x{}", i + 1) {
            return Err(G2Error::Shape(format!("expected x{} at position {i}", i + 1)));
        }
    }
    for a in 0..r {
        if ctx.name(n + a) != format!("xi{}", a + 1) || ctx.degree(n + a) != 1 {
            return Err(G2Error::Shape(format!("expected xi{} at position {}", a + 1, n + a)));
        }
    }
    Ok((n, r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebroidData {
    ctx: Arc<GradedContext>,
    pub base_dim: usize,
    pub rank: usize,
    /// `c[i][j][k]` with `[e_i, e_j] = c_ij^k e_k`.
    c: Vec<Vec<Vec<GradedPoly>>>,
    /// `rho[i][alpha]` with `ρ(e_i) = ρ_i^alpha ∂/∂x_alpha`.
    rho: Vec<Vec<GradedPoly>>,
}

impl LieAlgebroidData {
    /// The zero structure on the trivial bundle of rank `r` over `R^n`.
    pub fn new(n: usize, r: usize) -> Self {
        let ctx = algebroid_context(n, r);
        let z = GradedPoly::zero(&ctx);
        LieAlgebroidData {
            c: vec![vec![vec![z.clone(); r]; r]; r],
            rho: vec![vec![z; n]; r],
            ctx,
            base_dim: n,
            rank: r,
        }
    }

    /// A Lie algebra viewed as an algebroid over a point.
    pub fn from_lie_algebra(g: &StructureConstants) -> Self {
        let mut a = Self::new(0, g.dim);
        for i in 0..g.dim {
            for j in (i + 1)..g.dim {
                for k in 0..g.dim {
                    let p = GradedPoly::constant(&a.ctx, g.c[i][j][k].clone());
                    a.set_c(i, j, k, p).expect("constants are body functions");
                }
            }
        }
        a
    }

    /// Tangent bundle of `R^n` with the coordinate frame.
    pub fn tangent(n: usize) -> Self {
        let mut a = Self::new(n, n);
        for i in 0..n {
            a.set_rho(i, i, GradedPoly::one(&a.ctx)).expect("constant");
        }
        a
    }

    pub fn ctx(&self) -> &Arc<GradedContext> {
        &self.ctx
    }

    pub fn x(&self, alpha: usize) -> GradedPoly {
        GradedPoly::var(&self.ctx, alpha)
    }

    pub fn xi(&self, a: usize) -> GradedPoly {
        GradedPoly::var(&self.ctx, self.base_dim + a)
    }

    pub fn xi_index(&self, a: usize) -> usize {
        self.base_dim + a
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &GradedPoly {
        &self.c[i][j][k]
    }

    pub fn rho(&self, i: usize, alpha: usize) -> &GradedPoly {
        &self.rho[i][alpha]
    }

    fn body(&self, p: GradedPoly) -> Result<GradedPoly> {
        let p = if Arc::ptr_eq(p.ctx(), &self.ctx) { p } else { p.embed(&self.ctx)? };
        if !p.is_body_function() {
            return Err(G2Error::Shape(format!("{p} is not a function on the base")));
        }
        Ok(p)
    }

    /// Sets `c_ij^k` and, for `i != j`, `c_ji^k = −c_ij^k`.
    pub fn set_c(&mut self, i: usize, j: usize, k: usize, p: GradedPoly) -> Result<()> {
        let p = self.body(p)?;
        if i == j {
            if !p.is_zero() {
                return Err(G2Error::Shape("c_ii^k must vanish".into()));
            }
            return Ok(());
        }
        self.c[j][i][k] = p.neg();
        self.c[i][j][k] = p;
        Ok(())
    }

    pub fn set_rho(&mut self, i: usize, alpha: usize, p: GradedPoly) -> Result<()> {
        self.rho[i][alpha] = self.body(p)?;
        Ok(())
    }

    pub fn frame(&self, i: usize) -> Section {
        let mut coeffs = vec![GradedPoly::zero(&self.ctx); self.rank];
        coeffs[i] = GradedPoly::one(&self.ctx);
        Section { coeffs }
    }

    pub fn zero_section(&self) -> Section {
        Section { coeffs: vec![GradedPoly::zero(&self.ctx); self.rank] }
    }

    /// Anchor image of a section as a vector field on the base.
    pub fn anchor(&self, s: &Section) -> Result<Vec<GradedPoly>> {
        let mut out = vec![GradedPoly::zero(&self.ctx); self.base_dim];
        for (i, f) in s.coeffs.iter().enumerate() {
            for (alpha, slot) in out.iter_mut().enumerate() {
                *slot = slot.add(&f.mul(&self.rho[i][alpha])?)?;
            }
        }
        Ok(out)
    }

    /// Bracket of sections from the structure functions and the anchor:
    /// `[f e_a, g e_b] = f g c_ab^k e_k + f ρ_a(g) e_b − g ρ_b(f) e_a`.
    pub fn classical_bracket(&self, s1: &Section, s2: &Section) -> Result<Section> {
        let mut out = self.zero_section();
        for (a, f) in s1.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (b, g) in s2.coeffs.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let fg = f.mul(g)?;
                for k in 0..self.rank {
                    out.coeffs[k] = out.coeffs[k].add(&fg.mul(&self.c[a][b][k])?)?;
                }
                let rho_a_g = base_derivative(&self.rho[a], g)?;
                out.coeffs[b] = out.coeffs[b].add(&f.mul(&rho_a_g)?)?;
                let rho_b_f = base_derivative(&self.rho[b], f)?;
                out.coeffs[a] = out.coeffs[a].sub(&g.mul(&rho_b_f)?)?;
            }
        }
        Ok(out)
    }
}

/// `X(f)` for a vector field `X = X^alpha ∂/∂x_alpha` on the base.
pub fn base_derivative(field: &[GradedPoly], f: &GradedPoly) -> Result<GradedPoly> {
    let mut out = GradedPoly::zero(f.ctx());
    for (alpha, xa) in field.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        out = out.add(&xa.mul(&f.partial(alpha))?)?;
    }
    Ok(out)
}

/// Commutator of two vector fields on the base.
pub fn base_commutator(x: &[GradedPoly], y: &[GradedPoly]) -> Result<Vec<GradedPoly>> {
    x.iter().zip(y).map(|(xa, ya)| base_derivative(x, ya)?.sub(&base_derivative(y, xa)?)).collect()
}

/// A section, stored by its frame coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub coeffs: Vec<GradedPoly>,
}

impl Section {
    pub fn add(&self, other: &Section) -> Result<Section> {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(Section { coeffs })
    }

    pub fn scale(&self, c: &Rat) -> Section {
        Section { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn mul_fn(&self, f: &GradedPoly) -> Result<Section> {
        let coeffs = self.coeffs.iter().map(|p| f.mul(p)).collect::<Result<_>>()?;
        Ok(Section { coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GradedPoly::is_zero)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.coeffs.iter().map(|p| p.eval_f64(point)).collect()
    }
}

/// A covariant differential operator in frame form.
#[derive(Debug, Clone, PartialEq)]
pub struct CdoData {
    pub matrix: Vec<Vec<GradedPoly>>,
    pub symbol: Vec<GradedPoly>,
}

/// `Q = ½ ξ^j ξ^i c_ij^k ∂/∂ξ^k + ρ_i^α ξ^i ∂/∂x_α`.
pub fn build_q(a: &LieAlgebroidData) -> Result<Derivation> {
    let ctx = a.ctx();
    let mut q = Derivation::zero(ctx);
    let half = ratio(1, 2);
    for k in 0..a.rank {
        let mut comp = GradedPoly::zero(ctx);
        for i in 0..a.rank {
            for j in 0..a.rank {
                if a.c[i][j][k].is_zero() {
                    continue;
                }
                let t = a.xi(j).mul(&a.xi(i))?.mul(&a.c[i][j][k])?.scale(&half);
                comp = comp.add(&t)?;
            }
        }
        q.set_component(a.xi_index(k), comp)?;
    }
    for alpha in 0..a.base_dim {
        let mut comp = GradedPoly::zero(ctx);
        for i in 0..a.rank {
            comp = comp.add(&a.rho[i][alpha].mul(&a.xi(i))?)?;
        }
        q.set_component(alpha, comp)?;
    }
    Ok(q)
}

/// Expands `[Q,Q]` and reports the first nonzero coefficient.
pub fn check_homological(q: &Derivation) -> Result<Report> {
    match q.degree()? {
        None | Some(1) => {}
        Some(d) => return Err(G2Error::Invalid(format!("expected a degree 1 field, got degree {d}"))),
    }
    let qq = gcommutator(q, q)?;
    let mut r = Report::new("homological vector field");
    r.exact("[Q,Q] = 0", "[Q,Q] = 0", qq.is_zero(), first_nonzero(&qq));
    Ok(r)
}

/// Human-readable location of the first nonzero coefficient of a field.
pub fn first_nonzero(d: &Derivation) -> String {
    for (i, p) in d.components() {
        if let Some((m, c)) = p.terms().iter().next() {
            let single = GradedPoly::monomial(d.ctx(), m.clone(), c.clone());
            return format!("component d/d{}: term {}", d.ctx().name(*i), single);
        }
    }
    String::new()
}

pub fn section_to_vf(s: &Section) -> Result<Derivation> {
    let ctx = s.coeffs.first().map(|p| p.ctx().clone()).ok_or_else(|| G2Error::Shape("rank 0 section".into()))?;
    let (n, r) = chart_dims(&ctx)?;
    if s.coeffs.len() != r {
        return Err(G2Error::Shape(format!("section has {} coefficients, rank is {r}", s.coeffs.len())));
    }
    let mut d = Derivation::zero(&ctx);
    for (a, f) in s.coeffs.iter().enumerate() {
        if !f.is_body_function() {
            return Err(G2Error::Shape(format!("section coefficient {f} depends on the fibre")));
        }
        d.set_component(n + a, f.clone())?;
    }
    Ok(d)
}

/// Inverse of [`section_to_vf`]; fails unless the field is `f_a ∂/∂ξ^a` with
/// base-function coefficients.
pub fn vf_to_section(d: &Derivation) -> Result<Section> {
    let (n, r) = chart_dims(d.ctx())?;
    let mut coeffs = vec![GradedPoly::zero(d.ctx()); r];
    for (i, p) in d.components() {
        if *i < n || !p.is_body_function() {
            return Err(G2Error::Shape(format!("{d} is not a section")));
        }
        coeffs[*i - n] = p.clone();
    }
    Ok(Section { coeffs })
}

pub fn cdo_to_vf(y: &CdoData) -> Result<Derivation> {
    let ctx = y
        .symbol
        .first()
        .or_else(|| y.matrix.first().and_then(|row| row.first()))
        .map(|p| p.ctx().clone())
        .ok_or_else(|| G2Error::Shape("empty CDO".into()))?;
    let (n, r) = chart_dims(&ctx)?;
    if y.symbol.len() != n || y.matrix.len() != r || y.matrix.iter().any(|row| row.len() != r) {
        return Err(G2Error::Shape("CDO dimensions do not match the chart".into()));
    }
    let mut d = Derivation::zero(&ctx);
    for (i, g) in y.symbol.iter().enumerate() {
        d.set_component(i, g.clone())?;
    }
    for b in 0..r {
        let mut comp = GradedPoly::zero(&ctx);
        for a in 0..r {
            let xi_a = GradedPoly::var(&ctx, n + a);
            comp = comp.add(&y.matrix[a][b].mul(&xi_a)?)?;
        }
        d.set_component(n + b, comp)?;
    }
    Ok(d)
}

/// Reads a degree 0 field `g_i ∂/∂x_i + f_ab ξ^a ∂/∂ξ^b` as a CDO on the
/// dual frame: `matrix[a][b] = f_ab`, `symbol = g`.
pub fn vf_to_cdo(x0: &Derivation) -> Result<CdoData> {
    let ctx = x0.ctx();
    let (n, r) = chart_dims(ctx)?;
    let z = GradedPoly::zero(ctx);
    let mut symbol = vec![z.clone(); n];
    let mut matrix = vec![vec![z; r]; r];
    let fibre: Vec<usize> = (n..n + r).collect();
    for (i, p) in x0.components() {
        if *i < n {
            if !p.is_body_function() {
                return Err(G2Error::Shape(format!("base component {p} depends on the fibre")));
            }
            symbol[*i] = p.clone();
        } else {
            for (a, f) in p.split_linear(&fibre)? {
                if !f.is_body_function() {
                    return Err(G2Error::Shape(format!("fibre component {p} is not linear")));
                }
                matrix[a - n][*i - n] = f;
            }
        }
    }
    Ok(CdoData { matrix, symbol })
}

/// Dual CDO: `⟨Y*ξ, e⟩ + ⟨ξ, Ye⟩ = Y̲⟨ξ, e⟩`; on frames the matrix becomes
/// `−Mᵀ` and the symbol is unchanged.
pub fn dual_cdo(y: &CdoData) -> CdoData {
    let r = y.matrix.len();
    let matrix = (0..r).map(|i| (0..r).map(|j| y.matrix[j][i].neg()).collect()).collect();
    CdoData { matrix, symbol: y.symbol.clone() }
}

/// `Y(a)_i = Y̲(a_i) + Σ_j matrix[i][j] a_j`.
pub fn cdo_apply(y: &CdoData, s: &Section) -> Result<Section> {
    let mut coeffs = Vec::with_capacity(s.coeffs.len());
    for (i, row) in y.matrix.iter().enumerate() {
        let mut c = base_derivative(&y.symbol, &s.coeffs[i])?;
        for (j, m) in row.iter().enumerate() {
            c = c.add(&m.mul(&s.coeffs[j])?)?;
        }
        coeffs.push(c);
    }
    Ok(Section { coeffs })
}

/// `[a,b]_A = [[Q,a],b]`.
pub fn derived_bracket(q: &Derivation, a: &Section, b: &Section) -> Result<Section> {
    let qa = gcommutator(q, &section_to_vf(a)?)?;
    let out = gcommutator(&qa, &section_to_vf(b)?)?;
    vf_to_section(&out).map_err(|_| G2Error::Invalid("derived bracket is not a section".into()))
}

/// `ρ(a)f = [[Q,a],f] = [Q,a](f)`.
pub fn derived_anchor(q: &Derivation, a: &Section, f: &GradedPoly) -> Result<GradedPoly> {
    if !f.is_body_function() {
        return Err(G2Error::Shape(format!("{f} is not a base function")));
    }
    let qa = gcommutator(q, &section_to_vf(a)?)?;
    let out = qa.apply(f)?;
    if !out.is_body_function() {
        return Err(G2Error::Invalid("derived anchor left the base functions".into()));
    }
    Ok(out)
}

/// Cotangent algebroid of a bivector on `R^n`, frame `dx_i`:
/// `ρ(dx_i) = π_ij ∂/∂x_j` and `[dx_i, dx_j] = d π_ij`.
pub fn poisson_to_algebroid(pi: &[Vec<GradedPoly>]) -> Result<LieAlgebroidData> {
    let n = pi.len();
    if pi.iter().any(|row| row.len() != n) {
        return Err(G2Error::Shape("bivector must be square".into()));
    }
    let mut a = LieAlgebroidData::new(n, n);
    let ctx = a.ctx().clone();
    let emb: Vec<Vec<GradedPoly>> =
        pi.iter().map(|row| row.iter().map(|p| p.embed(&ctx)).collect::<Result<_>>()).collect::<Result<_>>()?;
    for i in 0..n {
        for j in 0..n {
            if emb[i][j] != emb[j][i].neg() {
                return Err(G2Error::Invalid(format!("bivector not antisymmetric at ({i},{j})")));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            a.set_rho(i, j, emb[i][j].clone())?;
        }
        for j in (i + 1)..n {
            for k in 0..n {
                a.set_c(i, j, k, emb[i][j].partial(k))?;
            }
        }
    }
    Ok(a)
}

/// Constant frame change `e'_i = Σ_j m[i][j] e_j` (m invertible).
pub fn change_frame(a: &LieAlgebroidData, m: &[Vec<Rat>]) -> Result<LieAlgebroidData> {
    let r = a.rank;
    let inv = invert_rational(m).ok_or_else(|| G2Error::Invalid("singular frame change".into()))?;
    let mut out = LieAlgebroidData::new(a.base_dim, r);
    let ctx = out.ctx().clone();
    let emb = |p: &GradedPoly| p.embed(&ctx);
    for i in 0..r {
        for alpha in 0..a.base_dim {
            let mut s = GradedPoly::zero(&ctx);
            for j in 0..r {
                s = s.add(&emb(&a.rho[j][alpha])?.scale(&m[i][j]))?;
            }
            out.set_rho(i, alpha, s)?;
        }
    }
    // constant m: [e'_i, e'_j] = m_ip m_jq c_pq^l (m⁻¹)_lk e'_k
    for i in 0..r {
        for j in (i + 1)..r {
            for k in 0..r {
                let mut s = GradedPoly::zero(&ctx);
                for p in 0..r {
                    for q in 0..r {
                        let coef = &m[i][p] * &m[j][q];
                        if coef.is_zero() {
                            continue;
                        }
                        for l in 0..r {
                            let t = &coef * &inv[l][k];
                            if t.is_zero() {
                                continue;
                            }
                            s = s.add(&emb(&a.c[p][q][l])?.scale(&t))?;
                        }
                    }
                }
                out.set_c(i, j, k, s)?;
            }
        }
    }
    Ok(out)
}

/// Gauss–Jordan inverse over the rationals.
pub fn invert_rational(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_poly::rat;

    #[test]
    fn tangent_line_is_de_rham() {
        let a = LieAlgebroidData::tangent(1);
        let q = build_q(&a).unwrap();
        let mut expect = Derivation::zero(a.ctx());
        expect.set_component(0, a.xi(0)).unwrap();
        assert_eq!(q, expect);
        assert!(check_homological(&q).unwrap().passed());
    }

    #[test]
    fn sl2_bracket_and_perturbation() {
        let g = StructureConstants::sl2();
        let a = LieAlgebroidData::from_lie_algebra(&g);
        let q = build_q(&a).unwrap();
        assert!(check_homological(&q).unwrap().passed());
        let ef = derived_bracket(&q, &a.frame(1), &a.frame(2)).unwrap();
        assert_eq!(ef, a.frame(0));
        assert!(derived_bracket(&q, &a.frame(1), &a.frame(1)).unwrap().is_zero());

        let mut bad = a.clone();
        let ctx = bad.ctx().clone();
        bad.set_c(0, 1, 1, GradedPoly::constant(&ctx, rat(3))).unwrap();
        let rep = check_homological(&build_q(&bad).unwrap()).unwrap();
        assert!(!rep.passed());
        assert!(rep.checks[0].details.contains("component"));
    }

    #[test]
    fn constant_cdo_dual_is_minus_transpose() {
        let a = LieAlgebroidData::new(0, 2);
        let c = a.ctx();
        let k = |v| GradedPoly::constant(c, rat(v));
        let y = CdoData { matrix: vec![vec![k(1), k(2)], vec![k(3), k(4)]], symbol: vec![] };
        let d = dual_cdo(&y);
        assert_eq!(d.matrix[0][1], k(-3));
        assert_eq!(dual_cdo(&d), y);
    }

    #[test]
    fn single_entry_vf_roundtrip() {
        let a = LieAlgebroidData::new(1, 2);
        let mut x0 = Derivation::zero(a.ctx());
        x0.set_component(a.xi_index(1), a.xi(0)).unwrap();
        let y = vf_to_cdo(&x0).unwrap();
        assert_eq!(y.matrix[0][1], GradedPoly::one(a.ctx()));
        assert_eq!(cdo_to_vf(&y).unwrap(), x0);
    }

    #[test]
    fn rejects_non_antisymmetric_bivector() {
        let a = LieAlgebroidData::new(2, 0);
        let c = a.ctx();
        let one = GradedPoly::one(c);
        let pi = vec![vec![GradedPoly::zero(c), one.clone()], vec![one, GradedPoly::zero(c)]];
        assert!(poisson_to_algebroid(&pi).is_err());
    }
}
