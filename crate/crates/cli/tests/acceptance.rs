//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use g2kit_core::action::{check_double_q, validate_action_classical, validate_action_dgla, StrictActionData};
use g2kit_core::algebroid::{build_q, check_homological, derived_anchor, derived_bracket, LieAlgebroidData};
use g2kit_core::catalog::{self, ACTION_NAMES, LIE2_NAMES};
use g2kit_core::graded_poly::{ratio, GradedPoly};
use g2kit_core::integrate::{check_phi, check_psi, IntegrationSetup, Tolerances, SETUPS};
use g2kit_core::io::{parse_bundle, Bundle};
use g2kit_core::lie2::{
    check_qalgebra, from_crossed_module, to_crossed_module, validate_crossed_module, validate_lie2, StrictLie2Data,
};
use g2kit_core::report::Report;
use g2kit_core::two_groupoid::{default_tolerance, verify_two_groupoid};
use g2kit_oracle::{algebroid_violations, GradedLie, Poly};

type Outcome = Result<String, String>;

const SAMPLES: usize = 100;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn to_oracle(p: &GradedPoly, n: usize) -> Poly {
    let mut out = Poly::zero(n);
    for (m, c) in p.terms() {
        out.terms.insert(m[..n].to_vec(), c.clone());
    }
    out
}

fn oracle_is_algebroid(a: &LieAlgebroidData) -> bool {
    let (n, r) = (a.base_dim, a.rank);
    let c: Vec<Vec<Vec<Poly>>> =
        (0..r).map(|i| (0..r).map(|j| (0..r).map(|k| to_oracle(a.c(i, j, k), n)).collect()).collect()).collect();
    let rho: Vec<Vec<Poly>> = (0..r).map(|i| (0..n).map(|al| to_oracle(a.rho(i, al), n)).collect()).collect();
    algebroid_violations(&c, &rho, n).is_empty()
}

fn homological(a: &LieAlgebroidData) -> Result<bool, String> {
    let q = build_q(a).map_err(|e| e.to_string())?;
    Ok(check_homological(&q).map_err(|e| e.to_string())?.passed())
}

fn algebroids() -> Vec<LieAlgebroidData> {
    catalog::random_algebroids(60, 2024).expect("random algebroids")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let list = algebroids();
    let mut counts = [0usize; 2];
    for (i, a) in list.iter().enumerate() {
        let ours = homological(a)?;
        ensure(ours == oracle_is_algebroid(a), || format!("instance {i}: verdicts differ"))?;
        counts[ours as usize] += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!(
        "{} instances, {} pass, {} fail, all agree with the oracle, {secs:.2} s",
        list.len(),
        counts[1],
        counts[0]
    ))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for (idx, a) in algebroids().iter().enumerate() {
        if !homological(a)? {
            continue;
        }
        let q = build_q(a).map_err(|e| e.to_string())?;
        for i in 0..a.rank {
            for j in 0..a.rank {
                let b = derived_bracket(&q, &a.frame(i), &a.frame(j)).map_err(|e| e.to_string())?;
                for k in 0..a.rank {
                    ensure(&b.coeffs[k] == a.c(i, j, k), || format!("instance {idx}: bracket ({i},{j}) slot {k}"))?;
                }
            }
            for al in 0..a.base_dim {
                let f = derived_anchor(&q, &a.frame(i), &a.x(al)).map_err(|e| e.to_string())?;
                ensure(&f == a.rho(i, al), || format!("instance {idx}: anchor ({i},{al})"))?;
            }
        }
        checked += 1;
    }
    ensure(checked > 0, || "no homological instances".into())?;
    Ok(format!("{checked} homological instances reproduce brackets and anchors exactly"))
}

fn lie2_instances() -> Result<Vec<(String, StrictLie2Data)>, String> {
    let mut out: Vec<(String, StrictLie2Data)> = Vec::new();
    for n in LIE2_NAMES {
        out.push((n.to_string(), catalog::lie2(n).map_err(|e| e.to_string())?));
    }
    for (i, l) in catalog::random_lie2s(14, 77).map_err(|e| e.to_string())?.into_iter().enumerate() {
        out.push((format!("random #{i}"), l));
    }
    match parse_bundle(fixture("sl2_lie2.json")).map_err(|e| e.to_string())? {
        Bundle::Lie2(l) => out.push(("fixtures/sl2_lie2.json".into(), l)),
        b => return Err(format!("fixture is a {} bundle", b.kind())),
    }
    Ok(out)
}

fn criterion_3() -> Outcome {
    let list = lie2_instances()?;
    ensure(list.len() >= 20, || format!("only {} instances", list.len()))?;
    for (name, l) in &list {
        ensure(validate_lie2(l).passed(), || format!("{name} does not validate"))?;
        let c = to_crossed_module(l).map_err(|e| format!("{name}: {e}"))?;
        ensure(validate_crossed_module(&c).passed(), || format!("{name}: crossed module fails"))?;
        let back = from_crossed_module(&c).map_err(|e| format!("{name}: {e}"))?;
        ensure(&back == l, || format!("{name}: Lie 2-algebra does not round-trip"))?;
        let again = to_crossed_module(&back).map_err(|e| format!("{name}: {e}"))?;
        ensure(again == c, || format!("{name}: crossed module does not round-trip"))?;
    }
    Ok(format!("{} instances round-trip both ways", list.len()))
}

fn criterion_4() -> Outcome {
    let list = lie2_instances()?;
    let mut cases: Vec<(String, StrictLie2Data)> = list.clone();
    for (idx, (name, l)) in list.iter().enumerate() {
        let slots = l.slots();
        for (k, slot) in slots.iter().enumerate().filter(|(k, _)| (k + idx) % 3 == 0).take(4) {
            cases.push((format!("{name} {slot:?}"), l.perturbed(*slot, &ratio(1 + k as i64 % 3, 2))));
        }
    }
    let perturbed = cases.len() - list.len();
    ensure(perturbed >= 50, || format!("only {perturbed} perturbations"))?;
    let mut failing = 0;
    for (name, l) in &cases {
        let a = validate_lie2(l).passed();
        let b = check_qalgebra(l).passed();
        let c = GradedLie::from_parts(&l.bracket_g, &l.act, &l.delta).is_dgla();
        ensure(a == b && b == c, || format!("{name}: validate {a}, Q-algebra {b}, oracle {c}"))?;
        failing += usize::from(!a);
    }
    Ok(format!("{} instances and {perturbed} perturbations agree three ways, {failing} rejected", list.len()))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let base: Vec<(String, StrictActionData)> = ACTION_NAMES
        .iter()
        .map(|n| catalog::action(n).map(|s| (n.to_string(), s)).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let mut cases = base.clone();
    for (name, s) in &base {
        for slot in s.slots().into_iter().step_by(2).take(10) {
            cases.push((format!("{name} {slot:?}"), s.perturbed(slot).map_err(|e| e.to_string())?));
        }
    }
    let perturbed = cases.len() - base.len();
    ensure(perturbed >= 50, || format!("only {perturbed} perturbations"))?;
    let mut rejected = 0;
    for (i, (name, s)) in cases.iter().enumerate() {
        let a = validate_action_dgla(s).passed();
        let b = validate_action_classical(s).passed();
        let c = check_double_q(s).passed();
        ensure(a == b && b == c, || format!("{name}: dgla {a}, classical {b}, double Q {c}"))?;
        ensure(i >= base.len() || a, || format!("catalog action {name} fails"))?;
        rejected += usize::from(!a);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.2} s"))?;
    Ok(format!(
        "{} catalog actions and {perturbed} perturbations agree three ways, {rejected} rejected, {secs:.2} s",
        base.len()
    ))
}

fn require_checks(rep: &Report, names: &[&str]) -> Result<(), String> {
    for n in names {
        let c = rep.check(n).ok_or_else(|| format!("{}: missing check {n:?}", rep.subject))?;
        ensure(c.passed(), || format!("{}: {n} failed, residual {:?}", rep.subject, c.residual))?;
    }
    ensure(rep.passed(), || rep.to_text())
}

const PSI_CHECKS: [&str; 8] = [
    "Psi action law",
    "Psi unit",
    "equivariance",
    "psi integrates mu~ on g",
    "Psi integrates mu~ on h",
    "anchor",
    "multiplicativity",
    "bracket transport",
];

fn criterion_6() -> Outcome {
    let tol = Tolerances { algebraic: 1e-9, finite_difference: 1e-5 };
    let mut worst = 0.0f64;
    for name in ["adjoint", "tm", "heisenberg"] {
        let s = IntegrationSetup::by_name(name).map_err(|e| e.to_string())?;
        let rep = check_psi(&s, SAMPLES, 11, tol);
        require_checks(&rep, &PSI_CHECKS)?;
        worst = worst.max(rep.max_residual());
    }
    Ok(format!("Psi checks pass on adjoint, tm, heisenberg at 1e-9 / 1e-5; worst residual {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let tol = Tolerances { algebraic: 1e-9, finite_difference: 1e-5 };
    let mut tm_closed = f64::NAN;
    for name in ["adjoint", "tm", "heisenberg"] {
        let s = IntegrationSetup::by_name(name).map_err(|e| e.to_string())?;
        let rep = check_phi(&s, SAMPLES, 12, tol);
        require_checks(
            &rep,
            &["Phi action law", "Phi unit", "Phi groupoid morphism", "Lie(Phi) = Psi", "base points"],
        )?;
        if name == "tm" {
            require_checks(&rep, &["Phi closed form", "product action"])?;
            let closed = rep.check("Phi closed form").and_then(|c| c.residual).unwrap_or(f64::INFINITY);
            let product = rep.check("product action").and_then(|c| c.residual).unwrap_or(f64::INFINITY);
            ensure(closed <= 1e-12 && product <= 1e-12, || {
                format!("tm closed form {closed:.1e}, product {product:.1e}")
            })?;
            tm_closed = closed.max(product);
        }
    }
    Ok(format!("Phi checks pass on adjoint, tm, heisenberg; tm closed form and product action within {tm_closed:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    for name in SETUPS {
        let s = IntegrationSetup::by_name(name).map_err(|e| e.to_string())?;
        let tol = default_tolerance(&s);
        let want = if name == "tm" { 1e-12 } else { 1e-9 };
        ensure(tol == want, || format!("{name}: tolerance {tol:e}"))?;
        let rep = verify_two_groupoid(&s, SAMPLES, 13, tol);
        ensure(rep.check("interchange").is_some(), || format!("{name}: no interchange check"))?;
        ensure(rep.notes.iter().any(|n| n.starts_with("adopted vertical product")), || {
            format!("{name}: no convention note")
        })?;
        ensure(rep.passed(), || rep.to_text())?;
        parts.push(format!("{name} {:.1e}", rep.max_residual()));
    }
    Ok(format!("2-groupoid axioms hold; max residuals {}", parts.join(", ")))
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_g2kit"))
        .args(args)
        .output()
        .map_err(|e| format!("could not run g2kit: {e}"))?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn criterion_9() -> Outcome {
    let abelian = fixture("abelian.json");
    let ga = fixture("ga_sl2.json");
    let (code, _) = run_cli(&["check", "lie2", abelian.to_str().unwrap()])?;
    ensure(code == 0, || format!("check lie2 exited {code}"))?;
    let (code, out) = run_cli(&["--format", "json", "check", "action", ga.to_str().unwrap()])?;
    ensure(code == 0, || format!("check action exited {code}"))?;
    let rep = Report::from_json(&out).map_err(|e| format!("action report is not JSON: {e}"))?;
    require_checks(
        &rep,
        &[
            "(c)",
            "(d)",
            "(a)",
            "(b)",
            "[-Q_delta + Q_A, Q_br + Q_action] = 0",
            "[Q_br + Q_action, Q_br + Q_action] = 0",
            "[-Q_delta + Q_A, -Q_delta + Q_A] = 0",
        ],
    )?;
    let (code, out) = run_cli(&["--format", "json", "verify", "2groupoid", "--example", "tm"])?;
    ensure(code == 0, || format!("verify 2groupoid exited {code}"))?;
    let rep = Report::from_json(&out).map_err(|e| format!("report is not JSON: {e}"))?;
    let interchange = rep
        .check("interchange")
        .and_then(|c| c.residual)
        .ok_or_else(|| "no interchange residual in the report".to_string())?;
    ensure(interchange <= 1e-12, || format!("interchange residual {interchange:e}"))?;
    Ok(format!("three commands exit 0; interchange residual {interchange:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let mut failed = 0;
    for (i, run) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("criterion {}: PASS: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
