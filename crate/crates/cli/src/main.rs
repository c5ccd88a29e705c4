mod error;
mod io;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use possibility::converse::{converse_generalized, converse_optimal, converse_symmetric, SolverConfig};
use possibility::dist::{PossibilityDistribution, ProbabilityDistribution};
use possibility::experiments::{
    emit_binary_curve, emit_ternary_map, run_specificity_experiment, zipf_calibration,
    ExperimentConfig, ExperimentReport, Sampler,
};
use possibility::specificity::specificity_of_transform;
use possibility::transforms::{apply_transform, canonical_order, Exponent, TransformSpec};

use crate::error::CliError;
use crate::io::{csv, DistributionFile, Kind};

#[derive(Parser)]
#[command(name = "possibility", version, about = "Probability/possibility transformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transform a probability distribution into a possibility distribution.
    Transform {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        /// Tie-breaking order for weak-order, as comma-separated 0-based indices.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Recover a probability distribution from a possibility distribution.
    Invert {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Specificity of a transformation relative to the optimal one.
    Specificity {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
    },
    /// Monte Carlo specificity experiment; writes a CSV table.
    Experiment(ExperimentArgs),
    /// Plot-ready figure data as CSV.
    Figure {
        #[command(subcommand)]
        which: Figure,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Distribution file, or `-` for stdin.
    input: PathBuf,
    /// Treat the input as this kind, bypassing auto-detection.
    #[arg(long)]
    kind: Option<Kind>,
    /// Divide out a total in [0.999, 1.001] instead of rejecting it.
    #[arg(long)]
    renormalize: bool,
}

#[derive(Args)]
struct MethodArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Exponent of the generalized transformation (a positive number or `inf`).
    #[arg(long)]
    n: Option<Exponent>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Symmetric,
    Optimal,
    WeakOrder,
    Generalized,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = SolverConfig::default().residual_tolerance)]
    tolerance: f64,
    #[arg(long, default_value_t = SolverConfig::default().max_iterations)]
    max_iterations: usize,
    #[arg(long, default_value_t = SolverConfig::default().damping_floor)]
    damping_floor: f64,
    #[arg(long, default_value_t = SolverConfig::default().ordering_tolerance)]
    ordering_tolerance: f64,
    /// Exponent at which the initial guess switches from the symmetric to
    /// the optimal converse.
    #[arg(long, default_value_t = SolverConfig::default().seed_switch)]
    seed_switch: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Uniform,
    Zipf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    dist: Dist,
    /// Generator seed; required so that every run is reproducible.
    #[arg(long)]
    seed: u64,
    /// Zipf exponent.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Run the Zipf sampler once per listed exponent and score each against
    /// the reference table.
    #[arg(long, value_delimiter = ',')]
    alpha_sweep: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1000)]
    outcomes: usize,
    #[arg(long, default_value_t = 250_000)]
    samples: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,5,10,100")]
    n: Vec<f64>,
}

#[derive(Subcommand)]
enum Figure {
    /// π(w₁) against p for binary distributions [p, 1 − p].
    BinaryCurve {
        /// Comma-separated methods; `generalized` expands to one column per `--n`.
        #[arg(long, value_delimiter = ',', default_value = "generalized")]
        method: Vec<Method>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,10,100")]
        n: Vec<Exponent>,
        #[arg(long, default_value_t = 99)]
        grid_points: usize,
    },
    /// π_G(w₃) over the (p₁, p₂) simplex for ternary distributions.
    TernaryMap {
        #[arg(long, value_delimiter = ',', default_value = "1")]
        n: Vec<Exponent>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err((err, output)) => {
            if let Some(output) = output {
                print!("{output}");
            }
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

/// On failure, optionally carries a partial document to print anyway.
type RunResult = Result<String, (CliError, Option<String>)>;

fn run(command: Command) -> RunResult {
    let plain = |r: Result<String, CliError>| r.map_err(|e| (e, None));
    match command {
        Command::Transform { input, method, order } => plain(transform(&input, &method, order)),
        Command::Invert { input, method, solver } => invert(&input, &method, &solver),
        Command::Specificity { input, method } => plain(specificity(&input, &method)),
        Command::Experiment(args) => plain(experiment(&args)),
        Command::Figure { which } => plain(figure(which)),
    }
}

fn read_input(args: &InputArgs, expected: Kind) -> Result<DistributionFile, CliError> {
    let text = if args.input.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        text
    } else {
        std::fs::read_to_string(&args.input)?
    };
    let file = DistributionFile::parse(&text)?;
    file.require_kind(expected, args.kind)?;
    Ok(file)
}

fn read_probability(args: &InputArgs) -> Result<ProbabilityDistribution, CliError> {
    let file = read_input(args, Kind::Probability)?;
    Ok(ProbabilityDistribution::validate(file.values, args.renormalize)?)
}

fn read_possibility(args: &InputArgs) -> Result<PossibilityDistribution, CliError> {
    let file = read_input(args, Kind::Possibility)?;
    Ok(PossibilityDistribution::normalized(file.values)?)
}

fn transform_spec(method: &MethodArgs, order: Option<Vec<usize>>) -> Result<TransformSpec, CliError> {
    match (method.method, method.n) {
        (Method::Generalized, Some(n)) => Ok(TransformSpec::Generalized(n)),
        (Method::Generalized, None) => Err(CliError::Usage("--n is required for the generalized method".into())),
        (_, Some(_)) => Err(CliError::Usage("--n only applies to the generalized method".into())),
        (Method::Symmetric, None) => Ok(TransformSpec::Symmetric),
        (Method::Optimal, None) => Ok(TransformSpec::Optimal),
        (Method::WeakOrder, None) => Ok(TransformSpec::WeakOrder(order)),
    }
}

fn n_json(n: Option<Exponent>) -> Value {
    match n {
        Some(Exponent::Finite(n)) => json!(n),
        Some(Exponent::Infinite) => json!("inf"),
        None => Value::Null,
    }
}

fn document(value: Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
    text.push('\n');
    text
}

fn transform(input: &InputArgs, method: &MethodArgs, order: Option<Vec<usize>>) -> Result<String, CliError> {
    if order.is_some() && method.method != Method::WeakOrder {
        return Err(CliError::Usage("--order only applies to the weak-order method".into()));
    }
    let p = read_probability(input)?;
    let mut spec = transform_spec(method, order)?;
    if let TransformSpec::WeakOrder(None) = spec {
        spec = TransformSpec::WeakOrder(Some(canonical_order(&p)));
    }
    let pi = apply_transform(&p, &spec)?;
    let mut doc = json!({
        "command": "transform",
        "method": spec.name(),
        "n": n_json(method.n),
        "kind": "possibility",
        "values": pi.values(),
    });
    if let TransformSpec::WeakOrder(Some(order)) = &spec {
        doc["order"] = json!(order);
    }
    Ok(document(doc))
}

fn invert(input: &InputArgs, method: &MethodArgs, solver: &SolverArgs) -> RunResult {
    let pi = read_possibility(input).map_err(|e| (e, None))?;
    let spec = transform_spec(method, None).map_err(|e| (e, None))?;
    let mut doc = json!({
        "command": "invert",
        "method": spec.name(),
        "n": n_json(method.n),
        "kind": "probability",
    });
    let p = match spec {
        TransformSpec::Symmetric => converse_symmetric(&pi),
        // Distinct values reduce the optimal converse to the successive
        // differences that invert the weak-order variant.
        TransformSpec::Optimal | TransformSpec::WeakOrder(_) | TransformSpec::Generalized(Exponent::Infinite) => {
            converse_optimal(&pi)
        }
        TransformSpec::Generalized(n) => {
            let config = SolverConfig {
                residual_tolerance: solver.tolerance,
                max_iterations: solver.max_iterations,
                damping_floor: solver.damping_floor,
                ordering_tolerance: solver.ordering_tolerance,
                seed_switch: solver.seed_switch,
            };
            let report = converse_generalized(&pi, n, &config).map_err(|e| (e.into(), None))?;
            doc["values"] = json!(report.solution.masses());
            doc["solver"] = json!({
                "iterations": report.iterations,
                "residual": report.final_residual,
                "converged": report.converged,
            });
            if !report.converged {
                let err = CliError::NonConvergence {
                    iterations: report.iterations,
                    residual: report.final_residual,
                };
                return Err((err, Some(document(doc))));
            }
            return Ok(document(doc));
        }
    }
    .map_err(|e| (e.into(), None))?;
    doc["values"] = json!(p.masses());
    Ok(document(doc))
}

fn specificity(input: &InputArgs, method: &MethodArgs) -> Result<String, CliError> {
    let p = read_probability(input)?;
    let spec = transform_spec(method, None)?;
    let s = specificity_of_transform(&p, &spec)?;
    Ok(document(json!({
        "command": "specificity",
        "method": spec.name(),
        "n": n_json(method.n),
        "specificity": s.value(),
    })))
}

const EXPERIMENT_HEADER: [&str; 9] = ["sampler", "alpha", "outcomes", "samples", "trials", "seed", "n", "mean", "sd"];

fn report_rows(report: &ExperimentReport) -> impl Iterator<Item = Vec<String>> + '_ {
    let c = &report.config;
    report.rows.iter().map(move |row| {
        vec![
            c.sampler.name().to_string(),
            c.sampler.alpha().map(|a| a.to_string()).unwrap_or_default(),
            c.outcomes.to_string(),
            c.samples_per_distribution.to_string(),
            c.trials.to_string(),
            c.seed.to_string(),
            row.n.to_string(),
            row.mean.to_string(),
            row.sd.to_string(),
        ]
    })
}

fn experiment(args: &ExperimentArgs) -> Result<String, CliError> {
    let sampler = match args.dist {
        Dist::Uniform => Sampler::Uniform,
        Dist::Zipf => Sampler::Zipf { alpha: args.alpha },
    };
    let config = ExperimentConfig {
        sampler,
        outcomes: args.outcomes,
        samples_per_distribution: args.samples,
        trials: args.trials,
        exponents: args.n.clone(),
        seed: args.seed,
    };
    match &args.alpha_sweep {
        None => {
            let report = run_specificity_experiment(&config)?;
            Ok(csv(&EXPERIMENT_HEADER, report_rows(&report)))
        }
        Some(alphas) => {
            if !matches!(args.dist, Dist::Zipf) {
                return Err(CliError::Usage("--alpha-sweep requires --dist zipf".into()));
            }
            let sweep = zipf_calibration(&config, alphas)?;
            let mut header = EXPERIMENT_HEADER.to_vec();
            header.push("rms_deviation");
            let rows = sweep.iter().flat_map(|row| {
                report_rows(&row.report).map(move |mut cells| {
                    cells.push(row.rms_deviation.to_string());
                    cells
                })
            });
            Ok(csv(&header, rows))
        }
    }
}

fn figure(which: Figure) -> Result<String, CliError> {
    match which {
        Figure::BinaryCurve { method, n, grid_points } => {
            let mut specs = Vec::new();
            let mut header = vec!["p".to_string()];
            for m in method {
                match m {
                    Method::Generalized => {
                        for &n in &n {
                            specs.push(TransformSpec::Generalized(n));
                            header.push(format!("generalized_n={n}"));
                        }
                    }
                    Method::Symmetric => specs.push(TransformSpec::Symmetric),
                    Method::Optimal => specs.push(TransformSpec::Optimal),
                    Method::WeakOrder => specs.push(TransformSpec::WeakOrder(None)),
                }
                if m != Method::Generalized {
                    header.push(specs.last().unwrap().name().to_string());
                }
            }
            let curve = emit_binary_curve(&specs, grid_points)?;
            let rows = curve.rows.iter().map(|(p, values)| {
                std::iter::once(p).chain(values).map(f64::to_string).collect()
            });
            Ok(csv(&header, rows))
        }
        Figure::TernaryMap { n, step } => {
            let rows = emit_ternary_map(&n, step)?;
            let mut header = vec!["p1".to_string(), "p2".to_string(), "p3".to_string()];
            header.extend(n.iter().map(|n| format!("pi_w3_n={n}")));
            let rows = rows.iter().map(|row| {
                [row.p1, row.p2, row.p3]
                    .iter()
                    .chain(&row.values)
                    .map(f64::to_string)
                    .collect()
            });
            Ok(csv(&header, rows))
        }
    }
}
