use g2kit_core::action::ActionSlot;
use g2kit_core::graded_poly::GradedPoly;
use g2kit_core::groups::{
    exp_to_group, validate_group_crossed_module, GroupCrossedModule, GroupTag, GroupoidElement, TwoGroupElement,
};
use g2kit_core::integrate::{
    build_phi, check_phi, check_psi, check_psi_action_law, check_psi_anchor, BundlePoint, IntegrationSetup, Tolerances,
    SETUPS,
};
use g2kit_core::two_groupoid::{calibrate, default_tolerance, verify_two_groupoid, VerticalConvention};
use nalgebra::DMatrix;

// Reference values below were computed once with scipy.linalg.expm in the
// same bases and are frozen here.

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn sl2_exponential_matches_reference() {
    let g = exp_to_group(&[0.3, 0.2, -0.1], GroupTag::Sl2).unwrap();
    let want = DMatrix::from_row_slice(2, 2, &[0.731692370, -0.202341510, 0.101170755, 1.338716910]);
    assert!((&g.matrix - want).abs().max() < 1e-8, "{}", g.matrix);
}

#[test]
fn adjoint_psi_matches_reference() {
    let s = IntegrationSetup::by_name("adjoint").unwrap();
    let g = exp_to_group(&[0.3, 0.2, -0.1], GroupTag::Sl2).unwrap();
    let out = s.big_psi(&[0.5, 0.0, 0.25], &g, &BundlePoint { x: vec![], a: vec![1.0, 2.0, -1.0] });
    assert!(out.x.is_empty());
    assert!(close(&out.a, &[1.58188417627159, 1.40779303078515, -1.29175601342219], 1e-12), "{:?}", out.a);
}

#[test]
fn heisenberg_psi_matches_reference() {
    let s = IntegrationSetup::by_name("heisenberg").unwrap();
    let g = exp_to_group(&[0.4, -0.7, 0.25], GroupTag::Heisenberg).unwrap();
    let out = s.big_psi(&[0.1, 0.2, -0.3], &g, &BundlePoint { x: vec![], a: vec![1.5, -0.5, 2.0] });
    assert!(close(&out.a, &[1.6, -0.3, 0.85], 1e-12), "{:?}", out.a);
}

#[test]
fn adjoint_phi_is_twisted_conjugation() {
    let s = IntegrationSetup::by_name("adjoint").unwrap();
    let g = exp_to_group(&[0.3, 0.2, -0.1], GroupTag::Sl2).unwrap();
    let h = exp_to_group(&[0.1, -0.2, 0.05], GroupTag::Sl2).unwrap();
    let k = exp_to_group(&[-0.3, 0.1, 0.4], GroupTag::Sl2).unwrap();
    let out = build_phi(&s, &TwoGroupElement { h, g }, &GroupoidElement::Group(k)).unwrap();
    let GroupoidElement::Group(m) = out else { panic!("expected a group element, got {out:?}") };
    let want =
        DMatrix::from_row_slice(2, 2, &[1.20049612024615, 0.178205039046655, -0.787157649142925, 0.716141040274528]);
    assert!((&m.matrix - want).abs().max() < 1e-12, "{}", m.matrix);
}

#[test]
fn tm_phi_translates_both_ends() {
    let s = IntegrationSetup::by_name("tm").unwrap();
    let g = exp_to_group(&[0.75], GroupTag::Abelian(1)).unwrap();
    let h = exp_to_group(&[-0.5], GroupTag::Abelian(1)).unwrap();
    let out = build_phi(&s, &TwoGroupElement { h, g }, &GroupoidElement::Pair(vec![2.0], vec![-1.0])).unwrap();
    assert_eq!(out, GroupoidElement::Pair(vec![2.25], vec![-0.25]));
}

#[test]
fn group_crossed_modules_validate() {
    for tag in [GroupTag::Abelian(1), GroupTag::Abelian(2), GroupTag::Heisenberg, GroupTag::Sl2] {
        let rep = validate_group_crossed_module(&GroupCrossedModule::conjugation(tag), 100, 3, 1e-9, 1e-5);
        assert!(rep.passed(), "{tag:?}: {}", rep.to_text());
    }
}

#[test]
fn every_setup_integrates() {
    for name in SETUPS {
        let s = IntegrationSetup::by_name(name).unwrap();
        let psi = check_psi(&s, 100, 7, Tolerances::default());
        assert!(psi.passed(), "{}", psi.to_text());
        let phi = check_phi(&s, 100, 8, Tolerances::default());
        assert!(phi.passed(), "{}", phi.to_text());
    }
}

#[test]
fn shifted_mu_h_breaks_equivariance() {
    let mut s = IntegrationSetup::by_name("adjoint").unwrap();
    s.s = s.s.perturbed(ActionSlot::MuH(0, 1)).unwrap();
    let rep = check_psi_action_law(&s, 20, 1, Tolerances::default());
    assert!(!rep.check("equivariance").unwrap().passed());
}

#[test]
fn shifted_base_field_breaks_the_anchor_identity() {
    let mut s = IntegrationSetup::by_name("tm").unwrap();
    s.s = s.s.perturbed(ActionSlot::MuGBase(0, 0)).unwrap();
    assert!(!check_psi_anchor(&s, 20, 1, Tolerances::default()).passed());

    let mut s = IntegrationSetup::by_name("ga-sl2").unwrap();
    let one = GradedPoly::one(s.s.a.ctx());
    let bumped = s.s.a.rho(0, 0).add(&one).unwrap();
    s.s.a.set_rho(0, 0, bumped).unwrap();
    assert!(!check_psi_anchor(&s, 20, 1, Tolerances::default()).passed());
}

#[test]
fn calibration_adopts_keep_gamma() {
    let (conv, rows) = calibrate(30, 2).unwrap();
    assert_eq!(conv, VerticalConvention::KeepGammaSrcTgt);
    let verbatim = rows.iter().find(|r| r.convention == VerticalConvention::ComposeGammaSrcTgt).unwrap();
    assert!(!verbatim.passed);
}

#[test]
fn two_groupoid_axioms_hold_on_every_setup() {
    for name in SETUPS {
        let s = IntegrationSetup::by_name(name).unwrap();
        let rep = verify_two_groupoid(&s, 100, 4, default_tolerance(&s));
        assert!(rep.passed(), "{}", rep.to_text());
        assert!(rep.check("interchange").is_some(), "{name}");
        assert!(rep.notes.iter().any(|n| n.starts_with("adopted vertical product")), "{name}");
    }
}
