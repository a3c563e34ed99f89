//! Brute-force reference computations used only by tests.
//!
//! Everything here works with plain commutative polynomials and explicit
//! basis expansions, and shares no code with `g2kit-core`.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Commutative polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Q::one());
        p
    }

    pub fn term(nvars: usize, exps: Vec<u32>, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut p = Self::zero(self.nvars);
        if !c.is_zero() {
            for (m, v) in &self.terms {
                p.terms.insert(m.clone(), v * c);
            }
        }
        p
    }

    pub fn deriv(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            p.accumulate(m2, v * q(m[i] as i64));
        }
        p
    }

    fn accumulate(&mut self, m: Vec<u32>, c: Q) {
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let cf = c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap();
                m.iter().zip(x).fold(cf, |acc, (e, xi)| acc * xi.powi(*e as i32))
            })
            .sum()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, v) in &o.terms {
            p.accumulate(m.clone(), v.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                p.accumulate(m, c1 * c2);
            }
        }
        p
    }
}

/// `X(f)` for `X = Σ field[α] ∂/∂x_α`.
pub fn apply_field(field: &[Poly], f: &Poly) -> Poly {
    field.iter().enumerate().fold(Poly::zero(f.nvars), |acc, (a, xa)| &acc + &(xa * &f.deriv(a)))
}

/// Residuals of the two Lie algebroid axioms on frames:
/// anchor `ρ_i(ρ_j^α) − ρ_j(ρ_i^α) − c_ij^k ρ_k^α` and the cyclic sum
/// `Σ_cyc (c_ij^l c_lk^m − ρ_k(c_ij^m))`. Empty iff the data is a Lie algebroid.
pub fn algebroid_violations(c: &[Vec<Vec<Poly>>], rho: &[Vec<Poly>], nvars: usize) -> Vec<String> {
    let r = c.len();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let s = &c[i][j];
            for k in 0..r {
                if c[i][j][k] != -&c[j][i][k] {
                    out.push(format!("c not antisymmetric at ({i},{j},{k})"));
                }
            }
            for a in 0..nvars {
                let mut res = &apply_field(&rho[i], &rho[j][a]) - &apply_field(&rho[j], &rho[i][a]);
                for k in 0..r {
                    res = &res - &(&s[k] * &rho[k][a]);
                }
                if !res.is_zero() {
                    out.push(format!("anchor fails on ({i},{j}) in direction {a}"));
                }
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for m in 0..r {
                    let mut res = Poly::zero(nvars);
                    for (a, b, d) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for l in 0..r {
                            res = &res + &(&c[a][b][l] * &c[l][d][m]);
                        }
                        res = &res - &apply_field(&rho[d], &c[a][b][m]);
                    }
                    if !res.is_zero() {
                        out.push(format!("Jacobi fails on ({i},{j},{k}) component {m}"));
                    }
                }
            }
        }
    }
    out
}

/// `Σ_l (π_li ∂_l π_jk + π_lj ∂_l π_ki + π_lk ∂_l π_ij)` for all `i<j<k`;
/// vanishes iff the bivector is Poisson.
pub fn schouten_residuals(pi: &[Vec<Poly>]) -> Vec<Poly> {
    let n = pi.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut s = Poly::zero(n);
                for l in 0..n {
                    s = &s + &(&pi[l][i] * &pi[j][k].deriv(l));
                    s = &s + &(&pi[l][j] * &pi[k][i].deriv(l));
                    s = &s + &(&pi[l][k] * &pi[i][j].deriv(l));
                }
                out.push(s);
            }
        }
    }
    out
}

pub fn is_poisson(pi: &[Vec<Poly>]) -> bool {
    schouten_residuals(pi).iter().all(Poly::is_zero)
}

/// Antisymmetry plus Jacobi on basis triples.
pub fn lie_algebra_ok(c: &[Vec<Vec<Q>>]) -> bool {
    let n = c.len();
    let br = |x: &[Q], y: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            for j in 0..n {
                for (k, o) in out.iter_mut().enumerate() {
                    *o += &x[i] * &y[j] * &c[i][j][k];
                }
            }
        }
        out
    };
    let e = |i: usize| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect::<Vec<_>>();
    for i in 0..n {
        for j in 0..n {
            let a = br(&e(i), &e(j));
            let b = br(&e(j), &e(i));
            if a.iter().zip(&b).any(|(x, y)| x != &-y) {
                return false;
            }
            for k in 0..n {
                let t1 = br(&e(i), &br(&e(j), &e(k)));
                let t2 = br(&e(j), &br(&e(k), &e(i)));
                let t3 = br(&e(k), &br(&e(i), &e(j)));
                if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

/// A strict Lie 2-algebra as a single graded vector space `L = 𝔤 ⊕ 𝔥`, with
/// `𝔤` in degree 0 listed first and `𝔥` in degree −1 after it.
pub struct GradedLie {
    pub degs: Vec<i32>,
    /// `br[a][b][c]`: `[e_a, e_b] = Σ br·e_c`.
    pub br: Vec<Vec<Vec<Q>>>,
    /// `d[a][b]`: `δ e_a = Σ d·e_b`.
    pub d: Vec<Vec<Q>>,
}

impl GradedLie {
    pub fn from_parts(bracket_g: &[Vec<Vec<Q>>], act: &[Vec<Vec<Q>>], delta: &[Vec<Q>]) -> Self {
        let g = bracket_g.len();
        let h = delta.len();
        let n = g + h;
        let mut br = vec![vec![vec![Q::zero(); n]; n]; n];
        let mut d = vec![vec![Q::zero(); n]; n];
        for i in 0..g {
            for j in 0..g {
                for k in 0..g {
                    br[i][j][k] = bracket_g[i][j][k].clone();
                }
            }
            for a in 0..h {
                for b in 0..h {
                    br[i][g + a][g + b] = act[i][a][b].clone();
                    // [w, v] = −(−1)^{0·(−1)} [v, w]
                    br[g + a][i][g + b] = -act[i][a][b].clone();
                }
            }
        }
        for a in 0..h {
            for i in 0..g {
                d[g + a][i] = delta[a][i].clone();
            }
        }
        let degs = (0..n).map(|i| if i < g { 0 } else { -1 }).collect();
        GradedLie { degs, br, d }
    }

    fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.degs.len();
        let mut out = vec![Q::zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                for (c, o) in out.iter_mut().enumerate() {
                    *o += &x[a] * &y[b] * &self.br[a][b][c];
                }
            }
        }
        out
    }

    fn delta(&self, x: &[Q]) -> Vec<Q> {
        let n = self.degs.len();
        let mut out = vec![Q::zero(); n];
        for a in 0..n {
            for (b, o) in out.iter_mut().enumerate() {
                *o += &x[a] * &self.d[a][b];
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Q> {
        (0..self.degs.len()).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
    }

    /// Graded antisymmetry, graded Jacobi, `δ² = 0` and `δ` a degree 1
    /// derivation, all on basis elements.
    pub fn is_dgla(&self) -> bool {
        let n = self.degs.len();
        let sgn = |k: i32| if k.rem_euclid(2) == 0 { q(1) } else { q(-1) };
        for a in 0..n {
            let ea = self.unit(a);
            if self.delta(&self.delta(&ea)).iter().any(|x| !x.is_zero()) {
                return false;
            }
            for b in 0..n {
                let eb = self.unit(b);
                let (da, db) = (self.degs[a], self.degs[b]);
                let ab = self.bracket(&ea, &eb);
                let ba = self.bracket(&eb, &ea);
                let s = sgn(da * db);
                if ab.iter().zip(&ba).any(|(x, y)| x != &(-(&s * y))) {
                    return false;
                }
                // δ[a,b] = [δa,b] + (−1)^{|a|}[a,δb]
                let lhs = self.delta(&ab);
                let r1 = self.bracket(&self.delta(&ea), &eb);
                let r2 = self.bracket(&ea, &self.delta(&eb));
                let sa = sgn(da);
                if lhs.iter().zip(&r1).zip(&r2).any(|((l, x), y)| l != &(x + &(&sa * y))) {
                    return false;
                }
                for c in 0..n {
                    let ec = self.unit(c);
                    // [a,[b,c]] = [[a,b],c] + (−1)^{|a||b|}[b,[a,c]]
                    let lhs = self.bracket(&ea, &self.bracket(&eb, &ec));
                    let r1 = self.bracket(&ab, &ec);
                    let r2 = self.bracket(&eb, &self.bracket(&ea, &ec));
                    if lhs.iter().zip(&r1).zip(&r2).any(|((l, x), y)| l != &(x + &(&s * y))) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `[w_α, w_β]_𝔥 = Σ_i D_αi act_iβ^γ w_γ`.
pub fn crossed_bracket_h(delta: &[Vec<Q>], act: &[Vec<Vec<Q>>]) -> Vec<Vec<Vec<Q>>> {
    let h = delta.len();
    let g = act.len();
    let mut out = vec![vec![vec![Q::zero(); h]; h]; h];
    for a in 0..h {
        for b in 0..h {
            for c in 0..h {
                for i in 0..g {
                    out[a][b][c] += &delta[a][i] * &act[i][b][c];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lie_poisson_so3_is_poisson() {
        let x = |i| Poly::var(3, i);
        let z = Poly::zero(3);
        let pi = vec![vec![z.clone(), x(2), -&x(1)], vec![-&x(2), z.clone(), x(0)], vec![x(1), -&x(0), z.clone()]];
        assert!(is_poisson(&pi));
        let mut bad = pi.clone();
        bad[0][1] = &x(2) * &x(0);
        bad[1][0] = -&bad[0][1];
        assert!(!is_poisson(&bad));
    }

    #[test]
    fn heisenberg_is_lie() {
        let mut c = vec![vec![vec![q(0); 3]; 3]; 3];
        c[0][1][2] = q(1);
        c[1][0][2] = q(-1);
        assert!(lie_algebra_ok(&c));
        c[0][2][0] = q(1);
        c[2][0][0] = q(-1);
        assert!(!lie_algebra_ok(&c));
    }
}
