#![allow(dead_code)]

use g2kit_core::algebroid::LieAlgebroidData;
use g2kit_core::graded_poly::GradedPoly;
use g2kit_oracle::Poly;

/// Body polynomial as an oracle polynomial in the first `n` variables.
pub fn to_oracle(p: &GradedPoly, n: usize) -> Poly {
    let mut out = Poly::zero(n);
    for (m, c) in p.terms() {
        assert!(m[n..].iter().all(|e| *e == 0), "{p} depends on the fibre");
        out.terms.insert(m[..n].to_vec(), c.clone());
    }
    out
}

pub fn oracle_structure(a: &LieAlgebroidData) -> (Vec<Vec<Vec<Poly>>>, Vec<Vec<Poly>>) {
    let (n, r) = (a.base_dim, a.rank);
    let c = (0..r).map(|i| (0..r).map(|j| (0..r).map(|k| to_oracle(a.c(i, j, k), n)).collect()).collect()).collect();
    let rho = (0..r).map(|i| (0..n).map(|al| to_oracle(a.rho(i, al), n)).collect()).collect();
    (c, rho)
}

pub fn oracle_is_algebroid(a: &LieAlgebroidData) -> bool {
    let (c, rho) = oracle_structure(a);
    g2kit_oracle::algebroid_violations(&c, &rho, a.base_dim).is_empty()
}
