//! Command-line front end: reads instance files and prints solver reports.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod instance;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use equicut::analysis::AnalysisError;
use equicut::oracle::{grid_search_equitable, OracleError};
use equicut::sample::random_raw_density;
use equicut::solver::{CutError, InstanceError, SolveOptions, SolverError, SweepOptions};
use equicut::topology::{sup_norm, TopologyError};
use equicut::{
    cuts_to_sphere, fairness_report, residual_map, solve_equitable, sphere_to_cuts,
    sweep_permutations, valuation_matrix, CutVector, DensityKind, EquitableSolution,
    FairnessReport, Permutation, SolveStatus, SpherePoint, SweepEntry,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use instance::{
    parse_instance, parse_instance_str, InstanceFile, InstanceFileError, LoadedInstance, PlayerSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BEST_EFFORT: i32 = 2;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "equicut",
    version,
    about = "Equitable contiguous divisions of [0, 1]"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for one player order and report fairness properties.
    Solve(SolveArgs),
    /// Solve every player order and tabulate the common values.
    Sweep(SweepArgs),
    /// Evaluate user-supplied cuts.
    Verify(VerifyArgs),
    /// Evaluate the sphere residual map at cuts or at a sphere point.
    Residual(ResidualArgs),
    /// Exhaustive grid search (at most 4 players).
    Oracle(OracleArgs),
    /// Print a seeded random instance file.
    Random(RandomArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Instance file.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Player order, 0-indexed: player sigma[i] owns piece i.
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<usize>>,
    /// Acceptance threshold on the equitability gap [default: 1e-9].
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Solve the orders on all cores.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Interior cut points, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub cuts: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<usize>>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("point").required(true).args(["cuts", "sphere"])))]
pub struct ResidualArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Interior cut points; mapped to the nonnegative sphere preimage.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub cuts: Option<Vec<f64>>,
    /// Point in R^n, projected onto the unit sphere.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sphere: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Grid spacing.
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindChoice {
    Constant,
    Linear,
    Mixed,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub players: usize,
    /// Pieces per density.
    #[arg(long, default_value_t = 4)]
    pub pieces: usize,
    #[arg(long, value_enum, default_value_t = KindChoice::Constant)]
    pub kind: KindChoice,
    #[arg(long, default_value_t = 4.0)]
    pub max_height: f64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Instance(#[from] InstanceFileError),
    #[error("sigma: {0}")]
    Sigma(#[from] InstanceError),
    #[error("cuts: {0}")]
    Cuts(#[from] CutError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Argument(String),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Parses `args` (including the program name) and runs the command.
///
/// Reports go to `out`, warnings and errors to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn execute(
    command: Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    match command {
        Command::Solve(a) => solve(a, out, err),
        Command::Sweep(a) => sweep(a, out, err),
        Command::Verify(a) => verify(a, out, err),
        Command::Residual(a) => residual(a, out, err),
        Command::Oracle(a) => oracle(a, out, err),
        Command::Random(a) => random(a, out),
    }
}

fn load(
    path: &Path,
    sigma: Option<Vec<usize>>,
    err: &mut dyn Write,
) -> Result<LoadedInstance, CliError> {
    let mut loaded = parse_instance(path)?;
    for w in &loaded.warnings {
        writeln!(err, "warning: {w}")?;
    }
    if let Some(order) = sigma {
        let sigma = Permutation::new(order)?;
        loaded.instance = loaded.instance.reordered(sigma)?;
    }
    Ok(loaded)
}

fn tolerance(flag: Option<f64>, loaded: &LoadedInstance) -> Result<f64, CliError> {
    let tol = flag.or(loaded.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        return Err(CliError::Argument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    Ok(tol)
}

fn exit_for(status: SolveStatus) -> i32 {
    if status.is_converged() {
        EXIT_OK
    } else {
        EXIT_BEST_EFFORT
    }
}

fn order_names(names: &[String], sigma: &Permutation) -> Vec<String> {
    sigma.as_slice().iter().map(|&p| names[p].clone()).collect()
}

fn yes_no(ok: bool) -> &'static str {
    if ok {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct SolveReport<'a> {
    players: &'a [String],
    sigma: &'a Permutation,
    solution: &'a EquitableSolution,
    valuations: &'a [Vec<f64>],
    fairness: &'a FairnessReport,
}

fn solve(a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let loaded = load(&a.input.file, a.sigma, err)?;
    let tol = tolerance(a.tol, &loaded)?;
    let inst = &loaded.instance;
    let solution = solve_equitable(inst, &SolveOptions::with_tol(tol))?;
    let vm = valuation_matrix(inst.densities(), &solution.cuts)?;
    let fairness = fairness_report(&vm, inst.sigma(), tol)?;
    match a.input.format {
        Format::Json => {
            let report = SolveReport {
                players: &loaded.names,
                sigma: inst.sigma(),
                solution: &solution,
                valuations: vm.rows(),
                fairness: &fairness,
            };
            writeln!(out, "{}", output::to_json(&report))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(SOLUTION_HEADER)?;
            w.write_record(solution_record(inst.sigma(), &solution))?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "order: {}",
                order_names(&loaded.names, inst.sigma()).join(" | ")
            )?;
            write_solution_text(out, &solution)?;
            write_fairness_text(out, &loaded.names, &fairness, tol)?;
            writeln!(out, "pieces:")?;
            for piece in 0..solution.cuts.pieces() {
                let (lo, hi) = solution.cuts.piece(piece);
                let owner = inst.sigma().owner(piece);
                writeln!(
                    out,
                    "  {} [{}, {}] worth {}",
                    loaded.names[owner],
                    output::num(lo),
                    output::num(hi),
                    output::num(vm.get(owner, piece))
                )?;
            }
        }
    }
    Ok(exit_for(solution.status))
}

const SOLUTION_HEADER: [&str; 7] = [
    "sigma",
    "value",
    "gap",
    "status",
    "residual_norm",
    "iterations",
    "cuts",
];

fn solution_record(sigma: &Permutation, s: &EquitableSolution) -> [String; 7] {
    [
        output::indices(sigma.as_slice(), ";"),
        output::num(s.value),
        output::num(s.gap),
        s.status.to_string(),
        output::num(s.residual_norm),
        s.iterations.to_string(),
        output::list(s.cuts.as_slice(), ";"),
    ]
}

fn write_solution_text(out: &mut dyn Write, s: &EquitableSolution) -> std::io::Result<()> {
    writeln!(
        out,
        "status: {} ({} bisection steps)",
        s.status, s.iterations
    )?;
    writeln!(out, "value: {}", output::num(s.value))?;
    writeln!(out, "cuts: {}", output::list(s.cuts.as_slice(), ", "))?;
    writeln!(out, "gap: {}", output::num(s.gap))?;
    writeln!(out, "residual norm: {}", output::num(s.residual_norm))
}

fn write_fairness_text(
    out: &mut dyn Write,
    names: &[String],
    r: &FairnessReport,
    tol: f64,
) -> std::io::Result<()> {
    writeln!(
        out,
        "equitable: {} (gap {})",
        yes_no(r.equitable_ok),
        output::num(r.equitable_gap)
    )?;
    write!(
        out,
        "proportional: {} (margin {})",
        yes_no(r.proportional_ok),
        output::num(r.proportional_margin)
    )?;
    let short: Vec<&str> = r
        .proportionality_failures(tol)
        .into_iter()
        .map(|p| names[p].as_str())
        .collect();
    if short.is_empty() {
        writeln!(out)?;
    } else {
        writeln!(out, "; below 1/n: {}", short.join(", "))?;
    }
    writeln!(
        out,
        "envy-free: {} (worst envy {})",
        yes_no(r.envy_free_ok),
        output::num(r.worst_envy)
    )?;
    writeln!(
        out,
        "exact: {} (gap {})",
        yes_no(r.exact_ok),
        output::num(r.exact_gap)
    )
}

#[derive(Serialize)]
struct SweepReport<'a> {
    players: &'a [String],
    entries: &'a [SweepEntry],
}

fn sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let loaded = load(&a.input.file, None, err)?;
    let tol = tolerance(a.tol, &loaded)?;
    let opts = SweepOptions {
        solve: SolveOptions::with_tol(tol),
        parallel: a.parallel,
        ..SweepOptions::default()
    };
    let entries = sweep_permutations(loaded.densities(), &opts)?;
    match a.input.format {
        Format::Json => {
            let report = SweepReport {
                players: &loaded.names,
                entries: &entries,
            };
            writeln!(out, "{}", output::to_json(&report))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(SOLUTION_HEADER)?;
            for e in &entries {
                w.write_record(solution_record(&e.sigma, &e.solution))?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "{:<16} {:<16} {:<16} {:<16} cuts",
                "sigma", "value", "gap", "status"
            )?;
            for e in &entries {
                let s = &e.solution;
                writeln!(
                    out,
                    "{:<16} {:<16} {:<16} {:<16} {}",
                    e.sigma.to_string(),
                    output::num(s.value),
                    output::num(s.gap),
                    s.status.to_string(),
                    output::list(s.cuts.as_slice(), ", ")
                )?;
            }
        }
    }
    let code = if entries.iter().all(|e| e.solution.status.is_converged()) {
        EXIT_OK
    } else {
        EXIT_BEST_EFFORT
    };
    Ok(code)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    players: &'a [String],
    sigma: &'a Permutation,
    cuts: &'a CutVector,
    valuations: &'a [Vec<f64>],
    fairness: &'a FairnessReport,
    proportionality_failures: Vec<&'a str>,
}

fn verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let loaded = load(&a.input.file, a.sigma, err)?;
    let tol = tolerance(a.tol, &loaded)?;
    let inst = &loaded.instance;
    let cuts = CutVector::for_players(a.cuts, inst.players())?;
    let vm = valuation_matrix(inst.densities(), &cuts)?;
    let fairness = fairness_report(&vm, inst.sigma(), tol)?;
    match a.input.format {
        Format::Json => {
            let report = VerifyReport {
                players: &loaded.names,
                sigma: inst.sigma(),
                cuts: &cuts,
                valuations: vm.rows(),
                proportionality_failures: fairness
                    .proportionality_failures(tol)
                    .into_iter()
                    .map(|p| loaded.names[p].as_str())
                    .collect(),
                fairness: &fairness,
            };
            writeln!(out, "{}", output::to_json(&report))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            let mut header = vec!["player".to_string(), "own".to_string()];
            header.extend((1..=cuts.pieces()).map(|j| format!("piece_{j}")));
            w.write_record(&header)?;
            for (p, row) in vm.rows().iter().enumerate() {
                let mut record = vec![loaded.names[p].clone(), output::num(fairness.own_values[p])];
                record.extend(row.iter().map(|&v| output::num(v)));
                w.write_record(&record)?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "order: {}",
                order_names(&loaded.names, inst.sigma()).join(" | ")
            )?;
            writeln!(out, "cuts: {}", output::list(cuts.as_slice(), ", "))?;
            for (p, row) in vm.rows().iter().enumerate() {
                writeln!(
                    out,
                    "  {}: own {} | all pieces {}",
                    loaded.names[p],
                    output::num(fairness.own_values[p]),
                    output::list(row, ", ")
                )?;
            }
            write_fairness_text(out, &loaded.names, &fairness, tol)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ResidualReport<'a> {
    sphere: &'a [f64],
    cuts: &'a CutVector,
    residual: &'a [f64],
    sup_norm: f64,
}

fn residual(a: ResidualArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let loaded = load(&a.input.file, a.sigma, err)?;
    let inst = &loaded.instance;
    let (point, cuts) = match (a.cuts, a.sphere) {
        (Some(cuts), _) => {
            let cuts = CutVector::for_players(cuts, inst.players())?;
            (cuts_to_sphere(&cuts), cuts)
        }
        (None, Some(raw)) => {
            let norm_sq: f64 = raw.iter().map(|c| c * c).sum();
            let point = SpherePoint::normalized(raw)?;
            if (norm_sq - 1.0).abs() > 1e-12 {
                writeln!(
                    err,
                    "warning: sphere point had squared norm {norm_sq}; projected onto the sphere"
                )?;
            }
            let cuts = sphere_to_cuts(&point);
            (point, cuts)
        }
        (None, None) => unreachable!("clap requires --cuts or --sphere"),
    };
    let f = residual_map(inst, &point)?;
    let norm = sup_norm(&f);
    match a.input.format {
        Format::Json => {
            let report = ResidualReport {
                sphere: point.as_slice(),
                cuts: &cuts,
                residual: &f,
                sup_norm: norm,
            };
            writeln!(out, "{}", output::to_json(&report))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["component", "sphere", "residual"])?;
            for (i, (e, r)) in point.as_slice().iter().zip(&f).enumerate() {
                w.write_record([(i + 1).to_string(), output::num(*e), output::num(*r)])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "sphere: {}", output::list(point.as_slice(), ", "))?;
            writeln!(out, "cuts: {}", output::list(cuts.as_slice(), ", "))?;
            writeln!(out, "residual: {}", output::list(&f, ", "))?;
            writeln!(out, "sup norm: {}", output::num(norm))?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct OracleReport<'a> {
    resolution: f64,
    cuts: &'a CutVector,
    gap: f64,
}

fn oracle(a: OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let loaded = load(&a.input.file, a.sigma, err)?;
    let best = grid_search_equitable(&loaded.instance, a.resolution)?;
    match a.input.format {
        Format::Json => {
            let report = OracleReport {
                resolution: a.resolution,
                cuts: &best.cuts,
                gap: best.gap,
            };
            writeln!(out, "{}", output::to_json(&report))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["resolution", "gap", "cuts"])?;
            w.write_record([
                output::num(a.resolution),
                output::num(best.gap),
                output::list(best.cuts.as_slice(), ";"),
            ])?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "resolution: {}", output::num(a.resolution))?;
            writeln!(out, "cuts: {}", output::list(best.cuts.as_slice(), ", "))?;
            writeln!(out, "gap: {}", output::num(best.gap))?;
        }
    }
    Ok(EXIT_OK)
}

/// Builds the instance file printed by `random`.
pub fn random_instance_file(a: &RandomArgs) -> Result<InstanceFile, CliError> {
    if a.players == 0 || a.pieces == 0 {
        return Err(CliError::Argument(
            "players and pieces must be positive".into(),
        ));
    }
    if !(a.max_height > 0.0 && a.max_height.is_finite()) {
        return Err(CliError::Argument(format!(
            "max height must be positive, got {}",
            a.max_height
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let players = (1..=a.players)
        .map(|i| {
            let kind = match a.kind {
                KindChoice::Constant => DensityKind::PiecewiseConstant,
                KindChoice::Linear => DensityKind::PiecewiseLinear,
                KindChoice::Mixed if rng.gen_bool(0.5) => DensityKind::PiecewiseConstant,
                KindChoice::Mixed => DensityKind::PiecewiseLinear,
            };
            PlayerSpec {
                name: format!("p{i}"),
                density: random_raw_density(&mut rng, kind, a.pieces, a.max_height),
            }
        })
        .collect();
    Ok(InstanceFile {
        players,
        sigma: None,
        tol: None,
    })
}

fn random(a: RandomArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = random_instance_file(&a)?;
    writeln!(out, "{}", output::to_json(&file))?;
    Ok(EXIT_OK)
}
