use std::sync::OnceLock;

use g2kit_core::catalog::{lie2, random_lie2s, LIE2_NAMES};
use g2kit_core::graded_poly::{ratio, Rat};
use g2kit_core::lie2::{
    build_qdelta_qbr, check_qalgebra, from_crossed_module, h_semidirect_g, readback, to_crossed_module,
    validate_crossed_module, validate_lie2, StrictLie2Data, StructureConstants,
};
use g2kit_oracle::{crossed_bracket_h, lie_algebra_ok, GradedLie};
use proptest::prelude::*;

fn instances() -> Vec<(String, StrictLie2Data)> {
    static CACHE: OnceLock<Vec<(String, StrictLie2Data)>> = OnceLock::new();
    CACHE.get_or_init(build_instances).clone()
}

fn build_instances() -> Vec<(String, StrictLie2Data)> {
    let mut out: Vec<(String, StrictLie2Data)> = LIE2_NAMES.iter().map(|n| (n.to_string(), lie2(n).unwrap())).collect();
    for (i, l) in random_lie2s(20, 31).unwrap().into_iter().enumerate() {
        out.push((format!("random #{i}"), l));
    }
    out
}

fn oracle_dgla(l: &StrictLie2Data) -> bool {
    GradedLie::from_parts(&l.bracket_g, &l.act, &l.delta).is_dgla()
}

#[test]
fn catalog_algebras_satisfy_jacobi() {
    for g in [StructureConstants::sl2(), StructureConstants::heisenberg(), StructureConstants::so3()] {
        assert!(lie_algebra_ok(&g.c));
        assert!(g.jacobi_violations().is_empty());
    }
}

#[test]
fn crossed_module_round_trip() {
    for (name, l) in instances() {
        assert!(validate_lie2(&l).passed(), "{name}");
        let c = to_crossed_module(&l).unwrap();
        assert!(validate_crossed_module(&c).passed(), "{name}");
        assert_eq!(c.bracket_h, crossed_bracket_h(&l.delta, &l.act), "{name}");
        assert_eq!(from_crossed_module(&c).unwrap(), l, "{name}");
        assert_eq!(to_crossed_module(&from_crossed_module(&c).unwrap()).unwrap(), c, "{name}");
    }
}

#[test]
fn homological_fields_read_back() {
    for (name, l) in instances() {
        let (qd, qb) = build_qdelta_qbr(&l).unwrap();
        assert_eq!(readback(&qd, &qb).unwrap(), l, "{name}");
    }
}

#[test]
fn semidirect_product_is_a_lie_algebra() {
    for (name, l) in instances() {
        let sd = h_semidirect_g(&l).unwrap();
        assert!(lie_algebra_ok(&sd.c), "{name}");
    }
}

#[test]
fn every_single_slot_perturbation_agrees_three_ways() {
    let mut seen = [0usize; 2];
    for (name, l) in instances().into_iter().take(10) {
        for slot in l.slots() {
            let p = l.perturbed(slot, &ratio(1, 2));
            let a = validate_lie2(&p).passed();
            let b = check_qalgebra(&p).passed();
            let c = oracle_dgla(&p);
            assert!(a == b && b == c, "{name} {slot:?}: validate {a}, Q-algebra {b}, oracle {c}");
            seen[a as usize] += 1;
        }
    }
    assert!(seen[0] > 50, "{seen:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn random_perturbations_agree_three_ways(idx in 0usize..26, pick in 0usize..1000, num in -5i64..6, den in 1i64..4) {
        let all = instances();
        let (name, l) = &all[idx % all.len()];
        let slots = l.slots();
        prop_assume!(!slots.is_empty());
        let p = l.perturbed(slots[pick % slots.len()], &Rat::new(num.into(), den.into()));
        let a = validate_lie2(&p).passed();
        prop_assert_eq!(a, check_qalgebra(&p).passed(), "{}", name);
        prop_assert_eq!(a, oracle_dgla(&p), "{}", name);
    }
}
