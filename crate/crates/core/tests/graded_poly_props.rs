use std::sync::Arc;

use g2kit_core::graded_poly::{gcommutator, rat, Derivation, GradedContext, GradedPoly, Rat};
use num_traits::One;
use proptest::prelude::*;

fn ctx() -> Arc<GradedContext> {
    GradedContext::new([("x", 0), ("y", 0), ("a", 1), ("b", 1), ("c", 1), ("u", 2)]).unwrap()
}

fn weight(exps: &[u32], ctx: &GradedContext) -> i64 {
    exps.iter().enumerate().map(|(i, e)| *e as i64 * ctx.degree(i) as i64).sum()
}

type Terms = Vec<(Vec<u32>, i64)>;

fn term_strategy() -> impl Strategy<Value = (Vec<u32>, i64)> {
    (prop::collection::vec(0u32..3, 2), prop::collection::vec(0u32..2, 3), 0u32..2, -3i64..4).prop_map(
        |(body, odd, u, c)| {
            let mut e = body;
            e.extend(odd);
            e.push(u);
            (e, c)
        },
    )
}

/// Homogeneous polynomial of graded degree `deg`, built from the terms of that weight.
fn homogeneous(ctx: &Arc<GradedContext>, terms: &[(Vec<u32>, i64)], deg: i64) -> GradedPoly {
    let mut p = GradedPoly::zero(ctx);
    for (e, c) in terms {
        if weight(e, ctx) == deg {
            p = p.add(&GradedPoly::monomial(ctx, e.clone(), rat(*c))).unwrap();
        }
    }
    p
}

fn poly_strategy() -> impl Strategy<Value = (Terms, i64)> {
    (prop::collection::vec(term_strategy(), 0..12), 0i64..4)
}

fn derivation_strategy() -> impl Strategy<Value = (Vec<Terms>, i64)> {
    (prop::collection::vec(prop::collection::vec(term_strategy(), 0..5), 6), -1i64..3)
}

fn derivation(ctx: &Arc<GradedContext>, comps: &[Terms], deg: i64) -> Derivation {
    let mut d = Derivation::zero(ctx);
    for (i, terms) in comps.iter().enumerate() {
        let target = deg + ctx.degree(i) as i64;
        d.set_component(i, homogeneous(ctx, terms, target)).unwrap();
    }
    d
}

fn koszul(a: i64, b: i64) -> Rat {
    if (a * b).rem_euclid(2) == 1 {
        -Rat::one()
    } else {
        Rat::one()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_graded_commutative(p in poly_strategy(), q in poly_strategy()) {
        let c = ctx();
        let f = homogeneous(&c, &p.0, p.1);
        let g = homogeneous(&c, &q.0, q.1);
        let lhs = f.mul(&g).unwrap();
        let rhs = g.mul(&f).unwrap().scale(&koszul(p.1, q.1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_is_associative(p in poly_strategy(), q in poly_strategy(), r in poly_strategy()) {
        let c = ctx();
        let (f, g, h) = (homogeneous(&c, &p.0, p.1), homogeneous(&c, &q.0, q.1), homogeneous(&c, &r.0, r.1));
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
    }

    #[test]
    fn derivations_obey_graded_leibniz(d in derivation_strategy(), p in poly_strategy(), q in poly_strategy()) {
        let c = ctx();
        let dd = derivation(&c, &d.0, d.1);
        let f = homogeneous(&c, &p.0, p.1);
        let g = homogeneous(&c, &q.0, q.1);
        let lhs = dd.apply(&f.mul(&g).unwrap()).unwrap();
        let first = dd.apply(&f).unwrap().mul(&g).unwrap();
        let second = f.mul(&dd.apply(&g).unwrap()).unwrap().scale(&koszul(d.1, p.1));
        prop_assert_eq!(lhs, first.add(&second).unwrap());
    }

    #[test]
    fn commutator_acts_as_operator_commutator(d1 in derivation_strategy(), d2 in derivation_strategy(), p in poly_strategy()) {
        let c = ctx();
        let (a, b) = (derivation(&c, &d1.0, d1.1), derivation(&c, &d2.0, d2.1));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let f = homogeneous(&c, &p.0, p.1);
        let lhs = gcommutator(&a, &b).unwrap().apply(&f).unwrap();
        let ab = a.apply(&b.apply(&f).unwrap()).unwrap();
        let ba = b.apply(&a.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, ab.sub(&ba.scale(&koszul(d1.1, d2.1))).unwrap());
    }

    #[test]
    fn commutator_is_graded_antisymmetric(d1 in derivation_strategy(), d2 in derivation_strategy()) {
        let c = ctx();
        let (a, b) = (derivation(&c, &d1.0, d1.1), derivation(&c, &d2.0, d2.1));
        let ab = gcommutator(&a, &b).unwrap();
        let ba = gcommutator(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.scale(&-koszul(d1.1, d2.1)));
    }

    #[test]
    fn commutator_satisfies_graded_jacobi(
        d1 in derivation_strategy(),
        d2 in derivation_strategy(),
        d3 in derivation_strategy(),
    ) {
        let c = ctx();
        let (a, b, e) = (derivation(&c, &d1.0, d1.1), derivation(&c, &d2.0, d2.1), derivation(&c, &d3.0, d3.1));
        prop_assume!(!a.is_zero() && !b.is_zero() && !e.is_zero());
        let lhs = gcommutator(&a, &gcommutator(&b, &e).unwrap()).unwrap();
        let r1 = gcommutator(&gcommutator(&a, &b).unwrap(), &e).unwrap();
        let r2 = gcommutator(&b, &gcommutator(&a, &e).unwrap()).unwrap().scale(&koszul(d1.1, d2.1));
        prop_assert_eq!(lhs, r1.add(&r2).unwrap());
    }

    #[test]
    fn odd_self_commutator_is_twice_the_square(d in derivation_strategy()) {
        let c = ctx();
        let deg = if d.1.rem_euclid(2) == 1 { d.1 } else { 1 };
        let q = derivation(&c, &d.0, deg);
        let lhs = gcommutator(&q, &q).unwrap();
        let rhs = q.compose_on_coords(&q).unwrap().scale(&rat(2));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn odd_variables_square_to_zero() {
    let c = ctx();
    let a = GradedPoly::var(&c, 2);
    let b = GradedPoly::var(&c, 3);
    assert!(a.mul(&a).unwrap().is_zero());
    assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap().neg());
    let u = GradedPoly::var(&c, 5);
    assert_eq!(u.mul(&a).unwrap(), a.mul(&u).unwrap());
}
