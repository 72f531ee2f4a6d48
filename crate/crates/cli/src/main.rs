//! `qfrft` command-line driver.
//!
//! Exit codes: 0 success, 1 failed check, 2 domain error, 3 file or format
//! error, 4 usage error.

mod output;
mod report;

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::json;

use qfrft_core::bounds::{BoundsEvaluator, TheoremId};
use qfrft_core::extremals::{eq_tol, verify_equality, ExtremalSpec};
use qfrft_core::signals::random_field;
use qfrft_core::suites::{run_suite, Suite, SuiteConfig};
use qfrft_core::transform::{iqfrft, iqfrft_fast, qfrft, qfrft_fast};
use qfrft_core::{qsig, Axis, Error, Grid, Order, Quat};

/// Cosine magnitude below which an angle counts as a right angle.
const RIGHT_ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "qfrft",
    version,
    about = "Quaternion fractional Fourier transform toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transform a QSIG field.
    Transform(TransformArgs),
    /// Run a named property suite on seeded random fields.
    Verify(VerifyArgs),
    /// Evaluate an uncertainty bound and report every term.
    Bounds(BoundsArgs),
    /// Build an equality-case Gaussian and check that it saturates its bound.
    Extremal(ExtremalArgs),
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    alpha1: f64,
    #[arg(long, allow_hyphen_values = true)]
    alpha2: f64,
    /// Use the chirp-z evaluation instead of direct quadrature.
    #[arg(long)]
    fast: bool,
    /// Apply the inverse transform.
    #[arg(long)]
    inverse: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    #[arg(long, default_value_t = 257)]
    n: usize,
    #[arg(long, default_value_t = 8.0)]
    extent: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    fields: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "random"])))]
struct BoundsArgs {
    #[arg(value_parser = parse_theorem)]
    theorem: TheoremId,
    #[arg(long)]
    input: Option<PathBuf>,
    /// Seed of a random smooth field sampled on `--n`/`--extent`.
    #[arg(long)]
    random: Option<u64>,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    alpha1: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    alpha2: f64,
    /// Second order for thm12 (defaults to the first).
    #[arg(long, allow_hyphen_values = true)]
    beta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta2: Option<f64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    axis: u8,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Allowed negative slack; defaults to 1e-6 max(1, lhs).
    #[arg(long, allow_hyphen_values = true)]
    tol_slack: Option<f64>,
    #[arg(long, default_value_t = 257)]
    n: usize,
    #[arg(long, default_value_t = 8.0)]
    extent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Peraxis,
    Spatial,
    Example51,
}

#[derive(Debug, Args)]
struct ExtremalArgs {
    #[arg(value_enum)]
    variant: VariantArg,
    #[arg(long)]
    lambda: f64,
    /// Second-axis width for peraxis (defaults to `--lambda`).
    #[arg(long)]
    lambda2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha2: Option<f64>,
    /// Pure phase slope as `b1,b2,b3`.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    beta: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    beta1: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    beta2: Option<[f64; 3]>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    axis: u8,
    #[arg(long, default_value_t = 257)]
    n: usize,
    #[arg(long, default_value_t = 8.0)]
    extent: f64,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Allow example51 away from a right angle; the slack is reported, not checked.
    #[arg(long)]
    general_alpha: bool,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{s}`, expected one of {}", names.join(", "))
    })
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    TheoremId::from_slug(s).ok_or_else(|| {
        let names: Vec<_> = TheoremId::ALL.iter().map(|t| t.slug()).collect();
        format!(
            "unknown theorem `{s}`, expected one of {}",
            names.join(", ")
        )
    })
}

fn parse_vector(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|e| format!("bad component `{p}`: {e}"))?;
    }
    Ok(v)
}

enum Failure {
    Check(String),
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 4,
            Failure::Core(Error::Format(_) | Error::Io(_)) => 3,
            Failure::Core(Error::OracleMismatch { .. }) => 1,
            Failure::Core(_) => 2,
        }
    }
}

type Outcome = Result<(), Failure>;

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    output::write_atomic(path, bytes).map_err(|e| Failure::Core(Error::Io(e)))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn transform(args: &TransformArgs) -> Outcome {
    let order = Order::new(args.alpha1, args.alpha2)?;
    let f = qsig::read_file(&args.input)?;
    let grid = *f.grid();
    let out = match (args.fast, args.inverse) {
        (false, false) => qfrft(&f, &order, &grid)?,
        (false, true) => iqfrft(&f, &order, &grid)?,
        (true, false) => qfrft_fast(&f, &order, &grid)?,
        (true, true) => iqfrft_fast(&f, &order, &grid)?,
    };
    write_file(&args.output, &qsig::to_bytes(&out))?;
    println!(
        "{} {}x{} field at alpha = ({}, {}) -> {}",
        if args.inverse {
            "inverse-transformed"
        } else {
            "transformed"
        },
        grid.n1(),
        grid.n2(),
        args.alpha1,
        args.alpha2,
        args.output.display()
    );
    Ok(())
}

fn verify(args: &VerifyArgs) -> Outcome {
    let config = SuiteConfig {
        n: args.n,
        extent: args.extent,
        seed: args.seed,
        fields: args.fields,
    };
    let r = run_suite(args.suite, &config)?;
    print!("{}", r.table());
    if let Some(path) = &args.report {
        write_file(path, &report::render(&report::suite(&r)))?;
    }
    let failed = r.failures().count();
    println!("{}: {} cases, {} failed", r.suite, r.cases.len(), failed);
    if failed > 0 {
        return Err(Failure::Check(format!(
            "{failed} {} case(s) out of tolerance",
            r.suite
        )));
    }
    Ok(())
}

fn axis_arg(k: u8) -> Axis {
    Axis::from_number(k).expect("clap restricts the axis to 1 or 2")
}

fn bounds(args: &BoundsArgs) -> Outcome {
    let f = match (&args.input, args.random) {
        (Some(path), _) => qsig::read_file(path)?,
        (None, Some(seed)) => random_field(&Grid::symmetric(args.n, args.n, args.extent)?, seed)?,
        (None, None) => unreachable!("clap requires a field source"),
    };
    let order = Order::new(args.alpha1, args.alpha2)?;
    let second = match (args.beta1, args.beta2) {
        (None, None) => None,
        (b1, b2) => Some(Order::new(
            b1.unwrap_or(args.alpha1),
            b2.unwrap_or(args.alpha2),
        )?),
    };
    let mut ev = BoundsEvaluator::new(&f)?;
    let r = ev.evaluate(args.theorem, &order, second.as_ref(), axis_arg(args.axis))?;
    let tol = args.tol_slack.unwrap_or_else(|| r.tol_slack());
    let pass = r.passes(tol);
    let axis = r
        .axis
        .map(|a| format!(" axis {}", a.number()))
        .unwrap_or_default();
    println!(
        "{}{axis}: lhs = {:.10e}, rhs = {:.10e}, slack = {:.3e} ({})",
        r.theorem_id,
        r.lhs,
        r.rhs,
        r.slack,
        if pass { "PASS" } else { "FAIL" }
    );
    for t in &r.rhs_terms {
        println!(
            "  {} {:<20} {:.10e}",
            if t.sign < 0 { '-' } else { '+' },
            t.label,
            t.value
        );
    }
    if let Some(path) = &args.report {
        let doc = report::bound(&r, json!({ "tol_slack": tol }), pass);
        write_file(path, &report::render(&doc))?;
    }
    if !pass {
        return Err(Failure::Check(format!(
            "slack {:e} is below -{tol:e}",
            r.slack
        )));
    }
    Ok(())
}

fn slope(v: Option<[f64; 3]>, name: &str) -> Result<Quat, Failure> {
    let [b1, b2, b3] = v.ok_or_else(|| Failure::Usage(format!("--{name} is required")))?;
    Ok(Quat::pure(b1, b2, b3))
}

fn extremal(args: &ExtremalArgs) -> Outcome {
    let alpha1 = args
        .alpha1
        .or(args.alpha)
        .ok_or_else(|| Failure::Usage("--alpha or --alpha1 is required".into()))?;
    let alpha2 = args.alpha2.or(args.alpha).unwrap_or(alpha1);
    let spec = match args.variant {
        VariantArg::Peraxis => ExtremalSpec::per_axis(
            (args.lambda, args.lambda2.unwrap_or(args.lambda)),
            (alpha1, alpha2),
            (
                slope(args.beta1.or(args.beta), "beta1")?,
                slope(args.beta2.or(args.beta), "beta2")?,
            ),
        ),
        VariantArg::Spatial => {
            ExtremalSpec::spatial(args.lambda, (alpha1, alpha2), slope(args.beta, "beta")?)
        }
        VariantArg::Example51 => {
            if alpha1 != alpha2 {
                return Err(Failure::Usage("example51 takes a single --alpha".into()));
            }
            ExtremalSpec::example51(args.lambda, alpha1, slope(args.beta, "beta")?)
        }
    };
    let right_angle =
        alpha1.cos().abs() <= RIGHT_ANGLE_TOL && alpha2.cos().abs() <= RIGHT_ANGLE_TOL;
    let asserted = args.variant != VariantArg::Example51 || right_angle;
    if !asserted && !args.general_alpha {
        return Err(Failure::Core(Error::InvalidSpec(
            "example51 equality is only checked at alpha = pi/2; pass --general-alpha to report other orders".into(),
        )));
    }
    let grid = Grid::symmetric(args.n, args.n, args.extent)?;
    let f = qfrft_core::extremals::build_extremal(&spec, &grid)?;
    write_file(&args.output, &qsig::to_bytes(&f))?;
    let r = verify_equality(&spec, &grid, axis_arg(args.axis))?;
    let tol = eq_tol(&grid);
    let within = r.relative_slack() <= tol;
    let verdict = match (asserted, within) {
        (false, _) => "not checked",
        (true, true) => "PASS",
        (true, false) => "FAIL",
    };
    let axis = r
        .axis
        .map(|a| format!(" axis {}", a.number()))
        .unwrap_or_default();
    println!(
        "{}{axis}: lhs = {:.10e}, rhs = {:.10e}, relative slack = {:.3e} (tol {tol:e}, {verdict})",
        r.theorem_id,
        r.lhs,
        r.rhs,
        r.relative_slack()
    );
    if let Some(path) = &args.report {
        let tolerances = json!({ "relative_slack": tol, "checked": asserted });
        write_file(
            path,
            &report::render(&report::bound(&r, tolerances, within)),
        )?;
    }
    if asserted && !within {
        return Err(Failure::Check(format!(
            "relative slack {:e} exceeds {tol:e}",
            r.relative_slack()
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Transform(a) => transform(a),
        Command::Verify(a) => verify(a),
        Command::Bounds(a) => bounds(a),
        Command::Extremal(a) => extremal(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Check(msg) | Failure::Usage(msg) => eprintln!("qfrft: {msg}"),
                Failure::Core(e) => eprintln!("qfrft: {e}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
