//! Graded-commutative polynomials with exact rational coefficients, graded
//! derivations, and their graded commutator.
//!
//! Variables carry degree 0, 1 or 2. Degree-1 variables anticommute and
//! square to zero; everything else commutes. A monomial is stored as an
//! exponent vector in context order, and any reordering sign is folded into
//! the coefficient, so two equal polynomials always have identical term maps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{G2Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"`; a zero denominator is an error.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| G2Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let d: BigInt = den.parse().map_err(|_| G2Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(G2Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Ordered list of named coordinates with their degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedContext {
    vars: Vec<(String, u8)>,
}

impl GradedContext {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, u8)>) -> Result<Arc<Self>> {
        let vars: Vec<(String, u8)> = vars.into_iter().map(|(n, d)| (n.into(), d)).collect();
        for (i, (name, deg)) in vars.iter().enumerate() {
            if *deg > 2 {
                return Err(G2Error::Shape(format!("variable {name} has degree {deg}")));
            }
            if vars[..i].iter().any(|(n, _)| n == name) {
                return Err(G2Error::Shape(format!("duplicate variable {name}")));
            }
        }
        Ok(Arc::new(GradedContext { vars }))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].0
    }

    pub fn degree(&self, i: usize) -> u8 {
        self.vars[i].1
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    pub fn vars(&self) -> &[(String, u8)] {
        &self.vars
    }

    fn is_odd(&self, i: usize) -> bool {
        self.vars[i].1 % 2 == 1
    }
}

fn same_ctx(a: &Arc<GradedContext>, b: &Arc<GradedContext>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(G2Error::ContextMismatch)
    }
}

pub type Monomial = Vec<u32>;

/// Product of two monomials with the Koszul sign, or `None` when an odd
/// variable would appear twice.
fn mul_monomials(ctx: &GradedContext, a: &[u32], b: &[u32]) -> Option<(Monomial, bool)> {
    let mut out = Vec::with_capacity(a.len());
    let mut negate = false;
    // parity of odd variables of `a` strictly after position i
    let mut odd_after = 0u32;
    for i in (0..a.len()).rev() {
        if ctx.is_odd(i) {
            if a[i] + b[i] > 1 {
                return None;
            }
            if b[i] == 1 && odd_after % 2 == 1 {
                negate = !negate;
            }
            odd_after += a[i];
        }
    }
    for i in 0..a.len() {
        out.push(a[i] + b[i]);
    }
    Some((out, negate))
}

fn monomial_degree(ctx: &GradedContext, m: &[u32]) -> i64 {
    m.iter().enumerate().map(|(i, e)| *e as i64 * ctx.degree(i) as i64).sum()
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedPoly {
    ctx: Arc<GradedContext>,
    terms: BTreeMap<Monomial, Rat>,
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(
                    |(i, e)| {
                        if *e == 1 {
                            self.ctx.name(i).to_string()
                        } else {
                            format!("{}^{}", self.ctx.name(i), e)
                        }
                    },
                )
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_rat(&a))?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rat(&a), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl GradedPoly {
    pub fn zero(ctx: &Arc<GradedContext>) -> Self {
        GradedPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<GradedContext>, c: Rat) -> Self {
        let mut p = Self::zero(ctx);
        p.add_term(vec![0; ctx.len()], c);
        p
    }

    pub fn one(ctx: &Arc<GradedContext>) -> Self {
        Self::constant(ctx, Rat::one())
    }

    pub fn var(ctx: &Arc<GradedContext>, i: usize) -> Self {
        let mut m = vec![0; ctx.len()];
        m[i] = 1;
        let mut p = Self::zero(ctx);
        p.add_term(m, Rat::one());
        p
    }

    pub fn var_named(ctx: &Arc<GradedContext>, name: &str) -> Result<Self> {
        let i = ctx.index(name).ok_or_else(|| G2Error::Shape(format!("unknown variable {name}")))?;
        Ok(Self::var(ctx, i))
    }

    /// Builds a term from an exponent list given in context order. Odd
    /// exponents above one give zero.
    pub fn monomial(ctx: &Arc<GradedContext>, exps: Monomial, coef: Rat) -> Self {
        let mut p = Self::zero(ctx);
        if exps.iter().enumerate().any(|(i, e)| ctx.is_odd(i) && *e > 1) {
            return p;
        }
        p.add_term(exps, coef);
        p
    }

    pub fn ctx(&self) -> &Arc<GradedContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Degree if every term has the same degree; `None` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = monomial_degree(&self.ctx, m);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(G2Error::NotHomogeneous(format!("polynomial {self}")));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &other.ctx)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(&self.ctx);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &other.ctx)?;
        let mut out = Self::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negate)) = mul_monomials(&self.ctx, ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if negate { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Left partial derivative with respect to variable `i`: the variable is
    /// moved to the front before being removed.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m[i];
            if e == 0 {
                continue;
            }
            let mut c = c * Rat::from_integer(BigInt::from(e));
            if self.ctx.is_odd(i) {
                let before: u32 = (0..i).filter(|&j| self.ctx.is_odd(j)).map(|j| m[j]).sum();
                if before % 2 == 1 {
                    c = -c;
                }
            }
            let mut nm = m.clone();
            nm[i] -= 1;
            out.add_term(nm, c);
        }
        out
    }

    /// Re-expresses the polynomial in a context containing every variable it
    /// actually uses (matched by name, with equal degrees).
    pub fn embed(&self, target: &Arc<GradedContext>) -> Result<Self> {
        let map = index_map(&self.ctx, target);
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            // the target may interleave odd variables in a different order
            let mut acc = Self::one(target);
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let j = map[i].ok_or(G2Error::ContextMismatch)?;
                for _ in 0..*e {
                    acc = acc.mul(&Self::var(target, j))?;
                }
            }
            out = out.add(&acc.scale(c))?;
        }
        Ok(out)
    }

    /// Evaluates a polynomial in even variables only at a real point given in
    /// context order.
    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.ctx.len() {
            return Err(G2Error::Shape("evaluation point has wrong length".into()));
        }
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut v = rat_to_f64(c);
            for (i, e) in m.iter().enumerate() {
                if *e > 0 {
                    if self.ctx.degree(i) != 0 {
                        return Err(G2Error::Shape(format!("cannot evaluate graded variable {}", self.ctx.name(i))));
                    }
                    v *= point[i].powi(*e as i32);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// True when no variable of nonzero degree occurs.
    pub fn is_body_function(&self) -> bool {
        self.terms.keys().all(|m| m.iter().enumerate().all(|(i, e)| *e == 0 || self.ctx.degree(i) == 0))
    }

    /// Coefficient of a single variable in a polynomial that is linear in the
    /// variables of `odd_set`, returned as a polynomial in the remaining
    /// variables. Fails if some term is not of that shape.
    pub fn split_linear(&self, odd_set: &[usize]) -> Result<BTreeMap<usize, GradedPoly>> {
        let mut out: BTreeMap<usize, GradedPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let hits: Vec<usize> = odd_set.iter().copied().filter(|&i| m[i] > 0).collect();
            if hits.len() != 1 || m[hits[0]] != 1 {
                return Err(G2Error::Shape(format!("term of {self} is not linear in the fibre")));
            }
            let i = hits[0];
            // move the chosen variable to the front: same sign rule as partial
            let mut single = Self::zero(&self.ctx);
            single.terms.insert(m.clone(), c.clone());
            let d = single.partial(i);
            let slot = out.entry(i).or_insert_with(|| Self::zero(&self.ctx));
            *slot = slot.add(&d)?;
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let monos: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let exps: serde_json::Map<String, serde_json::Value> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| (self.ctx.name(i).to_string(), serde_json::json!(e)))
                    .collect();
                serde_json::json!({"exps": exps, "coef": fmt_rat(c)})
            })
            .collect();
        serde_json::json!({ "monomials": monos })
    }

    pub fn from_json(ctx: &Arc<GradedContext>, v: &serde_json::Value) -> Result<Self> {
        let monos = v
            .get("monomials")
            .and_then(|m| m.as_array())
            .ok_or_else(|| G2Error::Parse("polynomial needs a \"monomials\" array".into()))?;
        let mut out = Self::zero(ctx);
        for (k, mono) in monos.iter().enumerate() {
            let coef = mono.get("coef").ok_or_else(|| G2Error::Parse(format!("monomial {k}: missing coef")))?;
            let coef = match coef {
                serde_json::Value::String(s) => parse_rat(s)?,
                serde_json::Value::Number(n) if n.is_i64() => rat(n.as_i64().unwrap_or(0)),
                _ => return Err(G2Error::Parse(format!("monomial {k}: coef must be \"p/q\""))),
            };
            let mut term = Self::constant(ctx, coef);
            if let Some(exps) = mono.get("exps") {
                let exps =
                    exps.as_object().ok_or_else(|| G2Error::Parse(format!("monomial {k}: exps must be an object")))?;
                for (name, e) in exps {
                    let e = e.as_u64().ok_or_else(|| G2Error::Parse(format!("monomial {k}: bad exponent")))?;
                    let v = Self::var_named(ctx, name)
                        .map_err(|_| G2Error::Parse(format!("monomial {k}: unknown variable {name}")))?;
                    for _ in 0..e {
                        term = term.mul(&v)?;
                    }
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

fn index_map(from: &GradedContext, to: &GradedContext) -> Vec<Option<usize>> {
    from.vars.iter().map(|(n, d)| to.index(n).filter(|&j| to.degree(j) == *d)).collect()
}

/// A vector field `Σ f_y ∂/∂y` given by its values on the coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    ctx: Arc<GradedContext>,
    comps: BTreeMap<usize, GradedPoly>,
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.comps.iter().map(|(i, p)| format!("({p}) d/d{}", self.ctx.name(*i))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Derivation {
    pub fn zero(ctx: &Arc<GradedContext>) -> Self {
        Derivation { ctx: ctx.clone(), comps: BTreeMap::new() }
    }

    /// The coordinate field `∂/∂y`.
    pub fn coord(ctx: &Arc<GradedContext>, i: usize) -> Self {
        let mut d = Self::zero(ctx);
        d.comps.insert(i, GradedPoly::one(ctx));
        d
    }

    pub fn ctx(&self) -> &Arc<GradedContext> {
        &self.ctx
    }

    pub fn component(&self, i: usize) -> GradedPoly {
        self.comps.get(&i).cloned().unwrap_or_else(|| GradedPoly::zero(&self.ctx))
    }

    pub fn components(&self) -> &BTreeMap<usize, GradedPoly> {
        &self.comps
    }

    pub fn set_component(&mut self, i: usize, p: GradedPoly) -> Result<()> {
        same_ctx(&self.ctx, p.ctx())?;
        if p.is_zero() {
            self.comps.remove(&i);
        } else {
            self.comps.insert(i, p);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Degree `deg(f_y) − deg(y)` shared by all components; `None` for zero.
    pub fn degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for (i, p) in &self.comps {
            let Some(dp) = p.homogeneous_degree()? else {
                continue;
            };
            let d = dp - self.ctx.degree(*i) as i64;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(G2Error::NotHomogeneous(format!("vector field {self}")));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &other.ctx)?;
        let mut out = self.clone();
        for (i, p) in &other.comps {
            let s = out.component(*i).add(p)?;
            out.set_component(*i, s)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (i, p) in &self.comps {
            let q = p.scale(c);
            if !q.is_zero() {
                out.comps.insert(*i, q);
            }
        }
        out
    }

    /// Left multiplication `f · D`.
    pub fn mul_left(&self, f: &GradedPoly) -> Result<Self> {
        same_ctx(&self.ctx, f.ctx())?;
        let mut out = Self::zero(&self.ctx);
        for (i, p) in &self.comps {
            out.set_component(*i, f.mul(p)?)?;
        }
        Ok(out)
    }

    /// `D(p) = Σ f_y · ∂p/∂y` with left derivatives.
    pub fn apply(&self, p: &GradedPoly) -> Result<GradedPoly> {
        same_ctx(&self.ctx, p.ctx())?;
        let mut out = GradedPoly::zero(&self.ctx);
        for (i, f) in &self.comps {
            let dp = p.partial(*i);
            if dp.is_zero() {
                continue;
            }
            out = out.add(&f.mul(&dp)?)?;
        }
        Ok(out)
    }

    /// Composition evaluated on coordinates: `y ↦ D1(D2(y))`. This is not a
    /// derivation in general; the result only records coordinate values.
    pub fn compose_on_coords(&self, other: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &other.ctx)?;
        let mut out = Self::zero(&self.ctx);
        for (i, p) in &other.comps {
            out.set_component(*i, self.apply(p)?)?;
        }
        Ok(out)
    }

    /// Re-expresses the field in a larger context; the new variables get
    /// zero components.
    pub fn embed(&self, target: &Arc<GradedContext>) -> Result<Self> {
        let map = index_map(&self.ctx, target);
        let mut out = Self::zero(target);
        for (i, p) in &self.comps {
            let j = map[*i].ok_or(G2Error::ContextMismatch)?;
            out.set_component(j, p.embed(target)?)?;
        }
        Ok(out)
    }
}

/// Graded commutator `[D1,D2] = D1∘D2 − (−1)^{|D1||D2|} D2∘D1`.
pub fn gcommutator(d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
    same_ctx(&d1.ctx, &d2.ctx)?;
    let (Some(a), Some(b)) = (d1.degree()?, d2.degree()?) else {
        return Ok(Derivation::zero(&d1.ctx));
    };
    let sign = if (a * b).rem_euclid(2) == 1 { -Rat::one() } else { Rat::one() };
    let mut out = Derivation::zero(&d1.ctx);
    let keys: std::collections::BTreeSet<usize> = d1.comps.keys().chain(d2.comps.keys()).copied().collect();
    for y in keys {
        let left = d1.apply(&d2.component(y))?;
        let right = d2.apply(&d1.component(y))?;
        out.set_component(y, left.sub(&right.scale(&sign))?)?;
    }
    Ok(out)
}

pub fn mul(p: &GradedPoly, q: &GradedPoly) -> Result<GradedPoly> {
    p.mul(q)
}

pub fn apply(d: &Derivation, p: &GradedPoly) -> Result<GradedPoly> {
    d.apply(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<GradedContext> {
        GradedContext::new([("x", 0), ("xi1", 1), ("xi2", 1), ("P", 2)]).unwrap()
    }

    #[test]
    fn odd_pair_sign() {
        let c = ctx();
        let a = GradedPoly::var(&c, 1);
        let b = GradedPoly::var(&c, 2);
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap().neg());
        assert!(a.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn even_odd_commute() {
        let c = ctx();
        let x = GradedPoly::var(&c, 0);
        let xi = GradedPoly::var(&c, 1);
        assert_eq!(x.mul(&xi).unwrap(), xi.mul(&x).unwrap());
    }

    #[test]
    fn odd_partial_moves_to_front() {
        let c = ctx();
        let xi1 = GradedPoly::var(&c, 1);
        let xi2 = GradedPoly::var(&c, 2);
        let p = xi1.mul(&xi2).unwrap();
        assert_eq!(Derivation::coord(&c, 1).apply(&p).unwrap(), xi2);
        assert_eq!(Derivation::coord(&c, 2).apply(&p).unwrap(), xi1.neg());
    }

    #[test]
    fn euler_field_on_square() {
        let c = ctx();
        let x = GradedPoly::var(&c, 0);
        let mut e = Derivation::zero(&c);
        e.set_component(0, x.clone()).unwrap();
        let x2 = x.mul(&x).unwrap();
        assert_eq!(e.apply(&x2).unwrap(), x2.scale(&rat(2)));
    }

    #[test]
    fn commutator_examples() {
        let c = ctx();
        let dx = Derivation::coord(&c, 0);
        let x_dx = dx.mul_left(&GradedPoly::var(&c, 0)).unwrap();
        assert_eq!(gcommutator(&dx, &x_dx).unwrap(), dx);
        let dxi = Derivation::coord(&c, 1);
        assert!(gcommutator(&dxi, &dxi).unwrap().is_zero());
    }

    #[test]
    fn embed_reorders_odd_variables() {
        let small = GradedContext::new([("a", 1), ("b", 1)]).unwrap();
        let big = GradedContext::new([("b", 1), ("a", 1)]).unwrap();
        let ab = GradedPoly::var(&small, 0).mul(&GradedPoly::var(&small, 1)).unwrap();
        let e = ab.embed(&big).unwrap();
        let ba = GradedPoly::var(&big, 0).mul(&GradedPoly::var(&big, 1)).unwrap();
        assert_eq!(e, ba.neg());
    }

    #[test]
    fn json_roundtrip() {
        let c = ctx();
        let p = GradedPoly::var(&c, 0)
            .mul(&GradedPoly::var(&c, 2))
            .unwrap()
            .scale(&ratio(3, 2))
            .add(&GradedPoly::constant(&c, rat(-1)))
            .unwrap();
        let back = GradedPoly::from_json(&c, &p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(parse_rat("1/0").is_err());
        assert_eq!(parse_rat("-6/4").unwrap(), ratio(-3, 2));
    }
}
