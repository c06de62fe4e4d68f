//! Command-line front end: `solve`, `filter`, `count` and `gap`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nhfeast::contour::{
    build_filter, default_radii, eta_curve, Contour, ContourError, QuadratureRule, RuleKind,
    DEFAULT_DELTA,
};
use nhfeast::feast::{estimate_count, filter_gap, solve, FeastError, Variant};
use nhfeast::io::{read_spectrum, write_text, ContourSource, IoError, RunSpec};
use nhfeast::projector::ProjectorOptions;
use nhfeast::C64;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "nhfeast",
    version,
    about = "Contour-integral eigensolver for non-Hermitian pencils"
)]
struct Cli {
    /// Report failures as a JSON object on stderr.
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run R-FEAST or Bi-FEAST; writes result.json and history.csv.
    Solve(SolveArgs),
    /// Dump filter poles and coefficients (poles.csv) and, for ellipses, eta.csv.
    Filter(FilterArgs),
    /// Estimate the number of eigenvalues inside the contour.
    Count(CountArgs),
    /// Filter-gap report for a known spectrum.
    Gap(GapArgs),
}

#[derive(Args, Debug)]
struct ContourArgs {
    /// Ellipse center as `re[,im]`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    center: String,
    /// Horizontal semi-axis [default: 1].
    #[arg(long)]
    radius: Option<f64>,
    /// Ratio of vertical to horizontal semi-axis.
    #[arg(long, default_value_t = 1.0)]
    aspect: f64,
    /// JSON list of arc/line segments; replaces the ellipse.
    #[arg(long, conflicts_with_all = ["radius"])]
    contour_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RuleArgs {
    /// gauss or trapezoid.
    #[arg(long, default_value = "gauss")]
    quadrature: RuleKind,
    /// Nodes per contour segment.
    #[arg(long, default_value_t = 8)]
    nodes: usize,
}

#[derive(Args, Debug)]
struct PencilArgs {
    /// Matrix Market file for A.
    #[arg(long)]
    matrix_a: PathBuf,
    /// Identity when omitted.
    #[arg(long)]
    matrix_b: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    pencil: PencilArgs,
    #[command(flatten)]
    contour: ContourArgs,
    #[command(flatten)]
    rule: RuleArgs,
    /// Subspace dimension p; should exceed the eigenvalue count inside.
    #[arg(long)]
    subspace: usize,
    /// r or bi.
    #[arg(long, default_value = "r")]
    variant: Variant,
    /// Stop when the relative trace change falls below this.
    #[arg(long, default_value = "1e-12")]
    tol_trace: f64,
    /// Stop when every candidate residual falls below this.
    #[arg(long, default_value = "1e-10")]
    tol_res: f64,
    /// Residual below which an inside Ritz value counts as a candidate.
    #[arg(long, default_value = "1e-4")]
    tol_candidate: f64,
    #[arg(long, default_value_t = 30)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output directory; the result JSON goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FilterArgs {
    #[command(flatten)]
    contour: ContourArgs,
    #[command(flatten)]
    rule: RuleArgs,
    /// Output directory; the pole CSV goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    pencil: PencilArgs,
    #[command(flatten)]
    contour: ContourArgs,
    #[command(flatten)]
    rule: RuleArgs,
    /// Probe block size.
    #[arg(long)]
    subspace: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GapArgs {
    /// One eigenvalue per line as `re im` or `re,im`.
    #[arg(long)]
    spectrum: PathBuf,
    #[command(flatten)]
    contour: ContourArgs,
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(long)]
    subspace: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit 1 for bad input or settings, 2 when the solver itself fails.
#[derive(Debug)]
enum CliError {
    Config(String),
    Solver(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Solver(_) => "solver",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Solver(m) => m,
        }
    }
}

impl From<FeastError> for CliError {
    fn from(e: FeastError) -> Self {
        match e {
            FeastError::Config(_) | FeastError::Pencil(_) | FeastError::Contour(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Feast(f) => f.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ContourError> for CliError {
    fn from(e: ContourError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn parse_center(s: &str) -> Result<C64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| CliError::Config(format!("cannot parse center '{s}' (expected re[,im])")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(CliError::Config(format!(
            "cannot parse center '{s}' (expected re[,im])"
        ))),
    }
}

impl ContourArgs {
    fn source(&self) -> Result<ContourSource, CliError> {
        match &self.contour_file {
            Some(path) => Ok(ContourSource::File(path.clone())),
            None => Ok(ContourSource::Ellipse {
                center: parse_center(&self.center)?,
                radius: self.radius.unwrap_or(1.0),
                aspect: self.aspect,
            }),
        }
    }
}

impl RuleArgs {
    fn build(&self) -> Result<QuadratureRule, CliError> {
        Ok(QuadratureRule::new(self.quadrature, self.nodes)?)
    }
}

fn emit(out: Option<&PathBuf>, name: &str, text: &str) -> Result<(), CliError> {
    match out {
        Some(dir) => Ok(write_text(dir.join(name), text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn run_solve(args: &SolveArgs) -> Result<(), CliError> {
    let spec = RunSpec {
        matrix_a: args.pencil.matrix_a.clone(),
        matrix_b: args.pencil.matrix_b.clone(),
        contour: args.contour.source()?,
        rule: args.rule.quadrature,
        nodes: args.rule.nodes,
        subspace: args.subspace,
        variant: args.variant,
        tol_trace: args.tol_trace,
        tol_residual: args.tol_res,
        tol_candidate: args.tol_candidate,
        max_iter: args.max_iter,
        seed: args.seed,
        workers: args.workers,
        out: args.out.clone(),
    };
    let (pencil, cfg) = spec.prepare()?;
    let result = solve(&pencil, &cfg)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    let doc = pretty(&result.to_json());
    match &spec.out {
        Some(dir) => {
            write_text(dir.join("result.json"), &doc)?;
            write_text(dir.join("history.csv"), &result.history_csv())?;
            println!(
                "{} candidates, {} after {} iterations",
                result.candidate_indices().len(),
                result.termination,
                result.iterations
            );
        }
        None => print!("{doc}"),
    }
    Ok(())
}

fn run_filter(args: &FilterArgs) -> Result<(), CliError> {
    let contour = args.contour.source()?.build()?;
    let rule = args.rule.build()?;
    let filter = build_filter(&contour, &rule);
    emit(args.out.as_ref(), "poles.csv", &filter.to_csv())?;
    if let (Some(dir), Some((_, _, aspect))) = (&args.out, contour.ellipse_params()) {
        let eta = eta_curve(&rule, aspect, &default_radii(DEFAULT_DELTA), DEFAULT_DELTA)?;
        write_text(dir.join("eta.csv"), &eta.to_csv())?;
    }
    Ok(())
}

fn run_count(args: &CountArgs) -> Result<(), CliError> {
    let mut spec = RunSpec::new(&args.pencil.matrix_a, args.contour.source()?, args.subspace);
    spec.matrix_b = args.pencil.matrix_b.clone();
    spec.rule = args.rule.quadrature;
    spec.nodes = args.rule.nodes;
    spec.workers = args.workers;
    spec.validate()?;
    let pencil = spec.load_pencil()?;
    let contour = spec.contour.build()?;
    let options = ProjectorOptions {
        workers: args.workers,
        ..ProjectorOptions::default()
    };
    let est = estimate_count(
        &pencil,
        &contour,
        &args.rule.build()?,
        args.subspace,
        args.seed,
        options,
    )?;
    if est.saturated {
        eprintln!(
            "warning: every retained value exceeds the threshold; the count may exceed {}",
            est.estimate
        );
    }
    let doc = pretty(&serde_json::to_value(&est).expect("estimate serializes"));
    emit(args.out.as_ref(), "count.json", &doc)
}

fn run_gap(args: &GapArgs) -> Result<(), CliError> {
    let lambdas = read_spectrum(&args.spectrum)?;
    let contour: Contour = args.contour.source()?.build()?;
    let filter = build_filter(&contour, &args.rule.build()?);
    let report = filter_gap(&filter, &lambdas, &contour, args.subspace)?;
    let doc = pretty(&serde_json::to_value(&report).expect("report serializes"));
    emit(args.out.as_ref(), "gap.json", &doc)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let json = std::env::args().any(|a| a == "--json-errors");
            let text = e.to_string();
            let err = CliError::Config(text.trim().trim_start_matches("error: ").to_string());
            report(&err, json);
            return ExitCode::from(err.code());
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Filter(a) => run_filter(a),
        Command::Count(a) => run_count(a),
        Command::Gap(a) => run_gap(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report(&err, cli.json_errors);
            ExitCode::from(err.code())
        }
    }
}

fn report(err: &CliError, json: bool) {
    if json {
        eprintln!(
            "{}",
            json!({"error": err.kind(), "message": err.message(), "exit_code": err.code()})
        );
    } else {
        eprintln!("error: {}", err.message());
    }
}
