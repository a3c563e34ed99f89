use g2kit_core::catalog::{random_algebroids, random_lie2s};
use g2kit_core::io::{parse_bundle, parse_bundle_str, to_pretty, Bundle};
use g2kit_core::lie2::to_crossed_module;
use g2kit_core::report::{Check, Report, Status};
use proptest::prelude::*;

fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

#[test]
fn random_bundles_round_trip() {
    for a in random_algebroids(20, 12).unwrap() {
        let text = to_pretty(&Bundle::Algebroid(a.clone()).to_json());
        match parse_bundle_str(&text).unwrap() {
            Bundle::Algebroid(back) => assert_eq!(back, a),
            other => panic!("read back a {} bundle", other.kind()),
        }
    }
    for l in random_lie2s(20, 12).unwrap() {
        let c = to_crossed_module(&l).unwrap();
        match parse_bundle_str(&Bundle::Crossed(c.clone()).to_json().to_string()).unwrap() {
            Bundle::Crossed(back) => assert_eq!(back, c),
            other => panic!("read back a {} bundle", other.kind()),
        }
    }
}

#[test]
fn fixtures_parse_with_the_expected_kind() {
    for (file, kind) in [("abelian.json", "lie2"), ("sl2_lie2.json", "lie2"), ("ga_sl2.json", "action")] {
        assert_eq!(parse_bundle(fixture(file)).unwrap().kind(), kind, "{file}");
    }
}

#[test]
fn errors_name_the_offending_field() {
    let e = parse_bundle_str(r#"{"dim_h":1,"dim_g":1,"delta":[[0,0,"x"]]}"#).unwrap_err().to_string();
    assert!(e.contains("$.delta[0][2]"), "{e}");
    let e = parse_bundle(fixture("missing.json")).unwrap_err().to_string();
    assert!(e.contains("missing.json"), "{e}");
    let e = parse_bundle_str(r#"{"schema":"other/9"}"#).unwrap_err().to_string();
    assert!(e.contains("$.schema"), "{e}");
}

fn check_strategy() -> impl Strategy<Value = Check> {
    ("[a-z ]{1,12}", "[a-z=() ]{0,20}", any::<bool>(), prop::option::of(0.0f64..1e3), "[ -~]{0,16}").prop_map(
        |(name, anchor, ok, residual, details)| Check {
            name,
            anchor,
            status: if ok { Status::Pass } else { Status::Fail },
            residual,
            details,
        },
    )
}

proptest! {
    #[test]
    fn reports_round_trip_through_json(
        subject in "[ -~]{0,20}",
        notes in prop::collection::vec("[ -~]{0,20}", 0..3),
        checks in prop::collection::vec(check_strategy(), 0..6),
    ) {
        let mut r = Report::new(subject);
        for n in notes {
            r.note(n);
        }
        let all_pass = checks.iter().all(Check::passed);
        for c in checks {
            r.push(c);
        }
        let back = Report::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(back.passed(), all_pass);
        prop_assert_eq!(back, r);
    }
}
