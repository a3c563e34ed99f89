#![allow(clippy::needless_range_loop)]

mod common;

use g2kit_core::algebroid::{
    build_q, cdo_apply, cdo_to_vf, check_homological, derived_anchor, derived_bracket, dual_cdo, poisson_to_algebroid,
    vf_to_cdo, CdoData, LieAlgebroidData, Section,
};
use g2kit_core::catalog::{lie_poisson, random_algebroids, random_body_poly};
use g2kit_core::graded_poly::{rat, GradedPoly};
use g2kit_core::groups::seeded_rng;
use g2kit_core::lie2::StructureConstants;
use g2kit_oracle::{is_poisson, Poly};
use proptest::prelude::*;

use common::{oracle_is_algebroid, to_oracle};

fn bumped(a: &LieAlgebroidData, which: usize) -> LieAlgebroidData {
    let mut b = a.clone();
    let one = GradedPoly::one(a.ctx());
    if a.rank >= 2 && which.is_multiple_of(2) {
        let k = which / 2 % a.rank;
        b.set_c(0, 1, k, a.c(0, 1, k).add(&one).unwrap()).unwrap();
    } else if a.base_dim > 0 {
        let x0 = a.x(0);
        b.set_rho(0, 0, a.rho(0, 0).add(&x0).unwrap()).unwrap();
    } else {
        b.set_c(0, 1 % a.rank, 0, a.c(0, 1 % a.rank, 0).add(&one).unwrap()).unwrap();
    }
    b
}

#[test]
fn homological_verdict_matches_oracle() {
    let mut agree = 0;
    let mut seen = [0usize; 2];
    for (idx, a) in random_algebroids(60, 17).unwrap().into_iter().enumerate() {
        for cand in [a.clone(), bumped(&a, idx)] {
            let ours = check_homological(&build_q(&cand).unwrap()).unwrap().passed();
            let theirs = oracle_is_algebroid(&cand);
            assert_eq!(ours, theirs, "verdicts differ on {cand:?}");
            seen[ours as usize] += 1;
            agree += 1;
        }
    }
    assert_eq!(agree, 120);
    assert!(seen[0] > 0 && seen[1] > 0, "both verdicts should occur: {seen:?}");
}

#[test]
fn derived_structure_reproduces_inputs() {
    for a in random_algebroids(40, 3).unwrap() {
        if !oracle_is_algebroid(&a) {
            continue;
        }
        let q = build_q(&a).unwrap();
        for i in 0..a.rank {
            for j in 0..a.rank {
                let b = derived_bracket(&q, &a.frame(i), &a.frame(j)).unwrap();
                for k in 0..a.rank {
                    assert_eq!(&b.coeffs[k], a.c(i, j, k));
                }
            }
            for al in 0..a.base_dim {
                assert_eq!(&derived_anchor(&q, &a.frame(i), &a.x(al)).unwrap(), a.rho(i, al));
            }
        }
    }
}

#[test]
fn derived_bracket_obeys_leibniz() {
    let mut rng = seeded_rng(21);
    let mut tested = 0;
    for a in random_algebroids(25, 8).unwrap() {
        if !oracle_is_algebroid(&a) || a.base_dim == 0 {
            continue;
        }
        let ctx = a.ctx().clone();
        let q = build_q(&a).unwrap();
        let sec = |rng: &mut _| Section {
            coeffs: (0..a.rank).map(|_| random_body_poly(rng, &ctx, a.base_dim, 2, 2)).collect(),
        };
        let (s, t) = (sec(&mut rng), sec(&mut rng));
        let f = random_body_poly(&mut rng, &ctx, a.base_dim, 2, 3);
        let lhs = derived_bracket(&q, &s, &t.mul_fn(&f).unwrap()).unwrap();
        let rf = derived_anchor(&q, &s, &f).unwrap();
        let rhs = t.mul_fn(&rf).unwrap().add(&derived_bracket(&q, &s, &t).unwrap().mul_fn(&f).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        tested += 1;
    }
    assert!(tested >= 5, "only {tested} algebroids exercised");
}

#[test]
fn poisson_cotangent_algebroid_matches_schouten_oracle() {
    let mut rng = seeded_rng(5);
    let mut seen = [0usize; 2];
    let lp = lie_poisson(&StructureConstants::sl2()).unwrap();
    assert!(check_homological(&build_q(&lp).unwrap()).unwrap().passed());
    for trial in 0..30 {
        let n = 3;
        let ctx = LieAlgebroidData::new(n, n).ctx().clone();
        let mut pi = vec![vec![GradedPoly::zero(&ctx); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let p = if trial % 3 == 0 {
                    // a linear so(3) bracket
                    GradedPoly::var(&ctx, 3 - i - j).scale(&rat(if (i + j) % 2 == 0 { 1 } else { -1 }))
                } else {
                    random_body_poly(&mut rng, &ctx, n, 2, 2)
                };
                pi[j][i] = p.neg();
                pi[i][j] = p;
            }
        }
        let oracle_pi: Vec<Vec<Poly>> = pi.iter().map(|row| row.iter().map(|p| to_oracle(p, n)).collect()).collect();
        let a = poisson_to_algebroid(&pi).unwrap();
        let ours = check_homological(&build_q(&a).unwrap()).unwrap().passed();
        assert_eq!(ours, is_poisson(&oracle_pi), "bivector {pi:?}");
        seen[ours as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

fn random_cdo(seed: u64, n: usize, r: usize) -> (LieAlgebroidData, CdoData) {
    let mut rng = seeded_rng(seed);
    let a = LieAlgebroidData::new(n, r);
    let ctx = a.ctx().clone();
    let matrix = (0..r).map(|_| (0..r).map(|_| random_body_poly(&mut rng, &ctx, n, 2, 2)).collect()).collect();
    let symbol = (0..n).map(|_| random_body_poly(&mut rng, &ctx, n, 2, 2)).collect();
    (a, CdoData { matrix, symbol })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dual_cdo_is_an_involution(seed in 0u64..10_000, n in 1usize..3, r in 1usize..4) {
        let (_, y) = random_cdo(seed, n, r);
        prop_assert_eq!(dual_cdo(&dual_cdo(&y)), y);
    }

    #[test]
    fn dual_cdo_preserves_the_pairing(seed in 0u64..10_000, n in 1usize..3, r in 1usize..4) {
        let (a, y) = random_cdo(seed, n, r);
        let ctx = a.ctx().clone();
        let mut rng = seeded_rng(seed ^ 0x5eed);
        let s = Section { coeffs: (0..r).map(|_| random_body_poly(&mut rng, &ctx, n, 2, 2)).collect() };
        let t = Section { coeffs: (0..r).map(|_| random_body_poly(&mut rng, &ctx, n, 2, 2)).collect() };
        let pair = |u: &Section, v: &Section| {
            u.coeffs.iter().zip(&v.coeffs).fold(GradedPoly::zero(&ctx), |acc, (p, q)| acc.add(&p.mul(q).unwrap()).unwrap())
        };
        let lhs = pair(&cdo_apply(&dual_cdo(&y), &t).unwrap(), &s)
            .add(&pair(&t, &cdo_apply(&y, &s).unwrap()))
            .unwrap();
        let rhs = g2kit_core::algebroid::base_derivative(&y.symbol, &pair(&t, &s)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cdo_field_round_trip(seed in 0u64..10_000, n in 1usize..3, r in 1usize..4) {
        let (_, y) = random_cdo(seed, n, r);
        prop_assert_eq!(vf_to_cdo(&cdo_to_vf(&y).unwrap()).unwrap(), y);
    }
}
