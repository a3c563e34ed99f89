//! `g2kit`: validate, convert and integrate strict Lie 2-algebra actions.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 on
//! usage or input errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use g2kit_core::action::{check_double_q, validate_action_classical, validate_action_dgla};
use g2kit_core::algebroid::{build_q, check_homological, derived_anchor, derived_bracket, LieAlgebroidData};
use g2kit_core::catalog;
use g2kit_core::integrate::{check_phi, check_psi, IntegrationSetup, Tolerances, SETUPS};
use g2kit_core::io::{self, Bundle};
use g2kit_core::lie2::{
    build_qdelta_qbr, check_qalgebra, from_crossed_module, readback, to_crossed_module, validate_crossed_module,
    validate_lie2,
};
use g2kit_core::report::Report;
use g2kit_core::two_groupoid::{default_tolerance, verify_two_groupoid};
use g2kit_core::G2Error;

#[derive(Parser)]
#[command(name = "g2kit", version, about = "Checks for strict Lie 2-algebra actions on Lie algebroids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Tolerance for algebraic numeric identities (exact checks ignore it).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Tolerance for finite-difference identities.
    #[arg(long, global = true, default_value_t = 1e-5)]
    fd_tol: f64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Samples per sampled identity.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a bundle file.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        file: PathBuf,
    },
    /// Convert between a strict Lie 2-algebra and a crossed module; FROM names the input kind.
    Convert {
        #[arg(value_enum)]
        from: ConvertFrom,
        file: PathBuf,
    },
    /// Recover brackets from the homological vector field of a bundle.
    Derive {
        #[arg(value_enum)]
        what: DeriveWhat,
        file: PathBuf,
    },
    /// Check the integrated LA-group action and 2-group action of a catalog setup.
    Integrate {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SETUPS))]
        example: String,
        /// Skip the 2-group action.
        #[arg(long)]
        psi_only: bool,
    },
    /// Verify the 2-groupoid of a catalog setup.
    Verify {
        #[arg(value_enum)]
        what: VerifyWhat,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SETUPS))]
        example: String,
    },
    /// Print a catalog entry as a bundle.
    Catalog {
        #[arg(value_enum)]
        kind: CatalogKind,
        /// Entry name; omit to list the names.
        name: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Lie2,
    Algebroid,
    Action,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertFrom {
    Lie2,
    Crossed,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeriveWhat {
    Brackets,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyWhat {
    #[value(name = "2groupoid")]
    TwoGroupoid,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogKind {
    Lie2,
    Action,
}

enum Failure {
    Input(String),
}

impl From<G2Error> for Failure {
    fn from(e: G2Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    report: Option<Report>,
    data: Option<serde_json::Value>,
}

fn emit(cli: &Cli, out: &Outcome) {
    // a closed pipe on stdout is not an error worth reporting
    let mut stdout = std::io::stdout().lock();
    if let Some(d) = &out.data {
        let _ = writeln!(stdout, "{}", io::to_pretty(d));
    }
    if let Some(r) = &out.report {
        let text = match cli.format {
            Format::Json => r.to_json(),
            Format::Text => r.to_text(),
        };
        // data goes to stdout, so a report next to it goes to stderr
        if out.data.is_some() {
            eprintln!("{text}");
        } else {
            let _ = writeln!(stdout, "{}", text.trim_end());
        }
    }
}

fn mismatch(want: &str, found: &Bundle) -> Failure {
    Failure::Input(format!("expected a {want} bundle, found {}", found.kind()))
}

fn check(kind: CheckKind, file: &PathBuf) -> Result<Outcome, Failure> {
    let b = io::parse_bundle(file)?;
    let report = match (kind, b) {
        (CheckKind::Lie2, Bundle::Lie2(l)) => {
            let mut r = Report::new(format!("strict Lie 2-algebra {}", file.display()));
            r.extend(validate_lie2(&l));
            r.extend(check_qalgebra(&l));
            r
        }
        (CheckKind::Lie2, Bundle::Crossed(c)) => {
            let mut r = Report::new(format!("crossed module {}", file.display()));
            r.extend(validate_crossed_module(&c));
            r
        }
        (CheckKind::Algebroid, Bundle::Algebroid(a)) => {
            let mut r = Report::new(format!("Lie algebroid {}", file.display()));
            r.extend(check_homological(&build_q(&a)?)?);
            r
        }
        (CheckKind::Action, Bundle::Action(s)) => {
            let mut r = Report::new(format!("strict action {}", file.display()));
            r.extend(validate_action_classical(&s));
            r.extend(validate_action_dgla(&s));
            r.extend(check_double_q(&s));
            r
        }
        (k, b) => {
            let want = match k {
                CheckKind::Lie2 => "lie2",
                CheckKind::Algebroid => "algebroid",
                CheckKind::Action => "action",
            };
            return Err(mismatch(want, &b));
        }
    };
    Ok(Outcome { report: Some(report), data: None })
}

fn convert(from: ConvertFrom, file: &PathBuf) -> Result<Outcome, Failure> {
    let b = io::parse_bundle(file)?;
    match (from, b) {
        (ConvertFrom::Lie2, Bundle::Lie2(l)) => {
            let rep = validate_lie2(&l);
            let data = to_crossed_module(&l).ok().map(|c| io::crossed_to_json(&c));
            Ok(Outcome { report: Some(rep), data })
        }
        (ConvertFrom::Crossed, Bundle::Crossed(c)) => {
            let rep = validate_crossed_module(&c);
            let data = from_crossed_module(&c).ok().map(|l| io::lie2_to_json(&l));
            Ok(Outcome { report: Some(rep), data })
        }
        (ConvertFrom::Lie2, b) => Err(mismatch("lie2", &b)),
        (ConvertFrom::Crossed, b) => Err(mismatch("crossed", &b)),
    }
}

fn derive_algebroid(a: &LieAlgebroidData) -> Result<(LieAlgebroidData, Report), G2Error> {
    let q = build_q(a)?;
    let mut out = LieAlgebroidData::new(a.base_dim, a.rank);
    for i in 0..a.rank {
        for j in (i + 1)..a.rank {
            let b = derived_bracket(&q, &a.frame(i), &a.frame(j))?;
            for (k, c) in b.coeffs.into_iter().enumerate() {
                out.set_c(i, j, k, c)?;
            }
        }
        for al in 0..a.base_dim {
            out.set_rho(i, al, derived_anchor(&q, &a.frame(i), &a.x(al))?)?;
        }
    }
    let mut r = check_homological(&q)?;
    let same_c = (0..a.rank).all(|i| (0..a.rank).all(|j| (0..a.rank).all(|k| out.c(i, j, k) == a.c(i, j, k))));
    let same_rho = (0..a.rank).all(|i| (0..a.base_dim).all(|al| out.rho(i, al) == a.rho(i, al)));
    r.exact("derived bracket", "[e_i, e_j] = [[Q, e_i], e_j]", same_c, "");
    r.exact("derived anchor", "rho(e_i) f = [[Q, e_i], f]", same_rho, "");
    Ok((out, r))
}

fn derive(file: &PathBuf) -> Result<Outcome, Failure> {
    match io::parse_bundle(file)? {
        Bundle::Algebroid(a) => {
            let (out, r) = derive_algebroid(&a)?;
            Ok(Outcome { report: Some(r), data: Some(io::algebroid_to_json(&out)) })
        }
        Bundle::Lie2(l) => {
            let (qd, qb) = build_qdelta_qbr(&l)?;
            let back = readback(&qd, &qb)?;
            let mut r = check_qalgebra(&l);
            r.exact("read back", "[e_i, e_j] = (-1)^|e_j| Q^k_ij e_k, delta e_i = (-1)^|e_i| Q^k_i e_k", back == l, "");
            Ok(Outcome { report: Some(r), data: Some(io::lie2_to_json(&back)) })
        }
        b => Err(Failure::Input(format!("derive brackets expects a lie2 or algebroid bundle, found {}", b.kind()))),
    }
}

fn catalog_cmd(kind: CatalogKind, name: Option<&str>) -> Result<Outcome, Failure> {
    let data = match (kind, name) {
        (CatalogKind::Lie2, None) => serde_json::json!(catalog::LIE2_NAMES),
        (CatalogKind::Action, None) => serde_json::json!(catalog::ACTION_NAMES),
        (CatalogKind::Lie2, Some(n)) => io::lie2_to_json(&catalog::lie2(n)?),
        (CatalogKind::Action, Some(n)) => io::action_to_json(&catalog::action(n)?),
    };
    Ok(Outcome { report: None, data: Some(data) })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if cli.samples == 0 {
        return Err(Failure::Input("--samples must be positive".into()));
    }
    match &cli.command {
        Command::Check { kind, file } => check(*kind, file),
        Command::Convert { from, file } => convert(*from, file),
        Command::Derive { what: DeriveWhat::Brackets, file } => derive(file),
        Command::Integrate { example, psi_only } => {
            let setup = IntegrationSetup::by_name(example)?;
            let tol = Tolerances { algebraic: cli.tol.unwrap_or(1e-9), finite_difference: cli.fd_tol };
            let mut r = Report::new(format!("integration on {example}"));
            r.extend(check_psi(&setup, cli.samples, cli.seed, tol));
            if !psi_only {
                r.extend(check_phi(&setup, cli.samples, cli.seed.wrapping_add(10), tol));
            }
            Ok(Outcome { report: Some(r), data: None })
        }
        Command::Verify { what: VerifyWhat::TwoGroupoid, example } => {
            let setup = IntegrationSetup::by_name(example)?;
            let tol = cli.tol.unwrap_or_else(|| default_tolerance(&setup));
            Ok(Outcome { report: Some(verify_two_groupoid(&setup, cli.samples, cli.seed, tol)), data: None })
        }
        Command::Catalog { kind, name } => catalog_cmd(*kind, name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&cli, &out);
            match &out.report {
                Some(r) if !r.passed() => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("g2kit: {msg}");
            ExitCode::from(2)
        }
    }
}
