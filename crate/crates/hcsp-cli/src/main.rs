//! Command line harness: solve, generate, benchmark and compare scheduling
//! instances with machine-readable JSON or CSV output.
//!
//! Exit codes: 0 success, 1 data error (unparseable input), 2 usage error
//! (bad flags, missing files). Every failure prints one `error:` line.

use std::collections::HashMap;
use std::env;
use std::fs;
use std::num::NonZeroU32;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hcsp::construct::Constructor;
use hcsp::instance::{
    generate_instance, parse_headered, parse_instance, EtcMatrix, InstanceClass, InstanceError,
};
use hcsp::oracle::brute_force_optimum;
use hcsp::search::SearchParams;
use hcsp::solver::{benchmark, best_of_k, solve, Budget, SolverConfig};
use hcsp::stats::{wilcoxon_signed_rank, PValueMethod, PairedSamples};

const DEFAULT_TASKS: usize = 512;
const DEFAULT_PROCS: usize = 16;

#[derive(Parser)]
#[command(
    name = "hcsp",
    version,
    about = "Heterogeneous multi-processor scheduling: min-min construction, \
             problem-processor local search and random swap shaking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the iterated local search on one instance
    Solve(SolveArgs),
    /// Emit a random instance of a benchmark class
    Generate(GenerateArgs),
    /// Summarize repeated best-of-k runs over instances
    Bench(BenchArgs),
    /// Wilcoxon signed-ranks test between two result files
    Compare(CompareArgs),
    /// Solve a tiny instance exactly by exhaustive enumeration
    Exact(ExactArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file, headered ("tasks procs" first line) or headerless
    #[arg(long)]
    instance: PathBuf,
    /// Tasks in a headerless file [default: 512]
    #[arg(long)]
    tasks: Option<usize>,
    /// Processors in a headerless file [default: 16]
    #[arg(long)]
    procs: Option<usize>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Wall-clock budget in seconds [default: 90]
    #[arg(long, conflicts_with = "iters")]
    time: Option<f64>,
    /// Budget in shake/descend cycles instead of wall-clock time
    #[arg(long)]
    iters: Option<u64>,
    /// Base random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Most swaps one shake may apply
    #[arg(long, default_value_t = NonZeroU32::new(9).unwrap())]
    max_swaps: NonZeroU32,
    /// Constructive heuristic for the initial schedule
    #[arg(long, value_enum, default_value_t = ConstructorArg::MinMin)]
    construct: ConstructorArg,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Independent seeded runs; the best one is reported
    #[arg(long, default_value_t = 1)]
    best_of: usize,
    /// Enumerate every assignment instead of searching (tiny instances)
    #[arg(long, conflicts_with_all = ["time", "iters", "best_of", "max_swaps", "construct"])]
    exact: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GenerateArgs {
    /// Instance class, e.g. u_c_hihi or u_s_lolo
    #[arg(long)]
    class: InstanceClass,
    #[arg(long, default_value_t = DEFAULT_TASKS)]
    tasks: usize,
    #[arg(long, default_value_t = DEFAULT_PROCS)]
    procs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files (headered or headerless)
    #[arg(required = true)]
    instances: Vec<PathBuf>,
    /// Tasks in headerless files [default: 512]
    #[arg(long)]
    tasks: Option<usize>,
    /// Processors in headerless files [default: 16]
    #[arg(long)]
    procs: Option<usize>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Independent runs per repetition; their best is one sample
    #[arg(long, default_value_t = 16)]
    best_of: usize,
    /// Repetitions (samples) per instance
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Two CSV files of `instance,makespan` rows, compared as matched pairs
    #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
    wilcoxon: Vec<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructorArg {
    #[value(name = "minmin")]
    MinMin,
    #[value(name = "minmax-extension")]
    MinMaxExtension,
    #[value(name = "random")]
    Random,
}

impl From<ConstructorArg> for Constructor {
    fn from(arg: ConstructorArg) -> Self {
        match arg {
            ConstructorArg::MinMin => Constructor::MinMin,
            ConstructorArg::MinMaxExtension => Constructor::MinMaxExtension,
            ConstructorArg::Random => Constructor::Random,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum CliError {
    /// Bad flags, missing files: exit 2.
    Usage(String),
    /// Well-formed invocation, unusable data: exit 1.
    Data(String),
}

impl CliError {
    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Data(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Data(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

/// Caps the rayon pool when HCSP_THREADS is set; must run before first use.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = env::var("HCSP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        CliError::Usage(format!(
            "HCSP_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|err| CliError::Usage(format!("cannot use {threads} threads: {err}")))
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve(args) => run_solve(args),
        Command::Generate(args) => run_generate(args),
        Command::Bench(args) => run_bench(args),
        Command::Compare(args) => run_compare(args),
        Command::Exact(args) => run_exact(args.input, args.output),
    }
}

#[derive(Serialize)]
struct ScheduleReport {
    assignment: Vec<usize>,
    makespan: f64,
}

#[derive(Serialize)]
struct SolveReport {
    instance: String,
    best_makespan: f64,
    iterations: u64,
    trace: Vec<(f64, f64)>,
    schedule: ScheduleReport,
}

fn run_solve(args: SolveArgs) -> Result<(), CliError> {
    if args.exact {
        return run_exact(args.input, args.output);
    }
    if args.best_of == 0 {
        return Err(CliError::Usage("--best-of must be at least 1".into()));
    }
    let (matrix, label) = load_instance(&args.input)?;
    let config = args.budget.solver_config()?;
    let result = if args.best_of == 1 {
        solve(&matrix, &config)
    } else {
        best_of_k(&matrix, &config, args.best_of, args.budget.seed)
    };
    let report = SolveReport {
        instance: label,
        best_makespan: result.best_makespan,
        iterations: result.iterations,
        trace: result.trace.unwrap_or_default(),
        schedule: ScheduleReport {
            assignment: result.best_schedule.assignment().to_vec(),
            makespan: result.best_makespan,
        },
    };
    let text = match args.output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => format!(
            "instance,best_makespan,iterations\n{},{},{}\n",
            report.instance, report.best_makespan, report.iterations
        ),
    };
    emit(&args.output.out, text)
}

fn run_exact(input: InstanceArgs, output: OutputArgs) -> Result<(), CliError> {
    let (matrix, label) = load_instance(&input)?;
    let optimum = brute_force_optimum(&matrix).map_err(|err| CliError::Data(err.to_string()))?;
    let report = SolveReport {
        instance: label,
        best_makespan: optimum.makespan,
        iterations: 0,
        trace: Vec::new(),
        schedule: ScheduleReport {
            assignment: optimum.assignment,
            makespan: optimum.makespan,
        },
    };
    let text = match output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => format!(
            "instance,best_makespan,iterations\n{},{},0\n",
            report.instance, report.best_makespan
        ),
    };
    emit(&output.out, text)
}

fn run_generate(args: GenerateArgs) -> Result<(), CliError> {
    let matrix = generate_instance(&args.class, args.tasks, args.procs, args.seed)
        .map_err(|err| CliError::Usage(err.to_string()))?;
    emit(&args.out, matrix.to_headered_text())
}

#[derive(Serialize)]
struct BenchRow {
    instance: String,
    mean: f64,
    cv_percent: f64,
    best: f64,
    samples: Vec<f64>,
}

fn run_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.best_of == 0 {
        return Err(CliError::Usage("--best-of must be at least 1".into()));
    }
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let mut labels = Vec::new();
    let mut matrices = Vec::new();
    for path in &args.instances {
        let (matrix, label) = load_instance_file(path, args.tasks, args.procs)?;
        labels.push(label);
        matrices.push(matrix);
    }
    let config = args.budget.solver_config()?;
    let stats = benchmark(&matrices, &config, args.best_of, args.reps);
    let rows: Vec<BenchRow> = labels
        .into_iter()
        .zip(stats)
        .map(|(instance, s)| BenchRow {
            instance,
            mean: s.mean,
            cv_percent: s.cv_percent,
            best: s.best,
            samples: s.samples,
        })
        .collect();
    let text = match args.output.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut out = String::from("instance,mean,cv_percent\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{:.1},{:.2}\n",
                    row.instance, row.mean, row.cv_percent
                ));
            }
            out
        }
    };
    emit(&args.output.out, text)
}

#[derive(Serialize)]
struct CompareRow {
    instance: String,
    a: f64,
    b: f64,
    diff: f64,
}

#[derive(Serialize)]
struct CompareReport {
    w_plus: f64,
    w_minus: f64,
    n_effective: usize,
    zeros_dropped: usize,
    p_two_sided: f64,
    method: String,
    differences: Vec<CompareRow>,
}

fn run_compare(args: CompareArgs) -> Result<(), CliError> {
    let a = read_results_csv(&args.wilcoxon[0])?;
    let b = read_results_csv(&args.wilcoxon[1])?;
    let samples = pair_samples(a, b, &args.wilcoxon[1])?;
    let test = wilcoxon_signed_rank(&samples).map_err(|err| CliError::Data(err.to_string()))?;
    let differences: Vec<CompareRow> = samples
        .labels()
        .iter()
        .zip(samples.a().iter().zip(samples.b()))
        .map(|(instance, (&a, &b))| CompareRow {
            instance: instance.clone(),
            a,
            b,
            diff: a - b,
        })
        .collect();
    let method = match test.method {
        PValueMethod::Exact => "exact",
        PValueMethod::NormalApproximation => "normal-approximation",
    };
    let report = CompareReport {
        w_plus: test.w_plus,
        w_minus: test.w_minus,
        n_effective: test.n_effective,
        zeros_dropped: test.zeros_dropped,
        p_two_sided: test.p_two_sided,
        method: method.to_string(),
        differences,
    };
    let text = match args.output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut out = format!(
                "# w_plus={} w_minus={} n={} p={} method={} zeros_dropped={}\n",
                report.w_plus,
                report.w_minus,
                report.n_effective,
                report.p_two_sided,
                report.method,
                report.zeros_dropped
            );
            out.push_str("instance,a,b,diff\n");
            for row in &report.differences {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    row.instance, row.a, row.b, row.diff
                ));
            }
            out
        }
    };
    emit(&args.output.out, text)
}

impl BudgetArgs {
    fn solver_config(&self) -> Result<SolverConfig, CliError> {
        let budget = match (self.time, self.iters) {
            (Some(secs), None) => {
                if !(secs.is_finite() && secs > 0.0) {
                    return Err(CliError::Usage(format!(
                        "--time must be a positive number of seconds, got {secs}"
                    )));
                }
                Budget::Time(Duration::from_secs_f64(secs))
            }
            (None, Some(iters)) => Budget::Iterations(iters),
            (None, None) => Budget::Time(Duration::from_secs(90)),
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("--time conflicts with --iters".into()));
            }
        };
        Ok(SolverConfig {
            budget,
            search: SearchParams {
                max_shake_swaps: self.max_swaps,
                rng_seed: self.seed,
            },
            constructor: self.construct.into(),
            ..SolverConfig::default()
        })
    }
}

fn load_instance(args: &InstanceArgs) -> Result<(EtcMatrix, String), CliError> {
    load_instance_file(&args.instance, args.tasks, args.procs)
}

fn load_instance_file(
    path: &Path,
    tasks: Option<usize>,
    procs: Option<usize>,
) -> Result<(EtcMatrix, String), CliError> {
    if !path.is_file() {
        return Err(CliError::Usage(format!(
            "instance file not found: {}",
            path.display()
        )));
    }
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Usage(format!("cannot read {}: {err}", path.display())))?;
    let matrix = parse_matrix(&text, tasks, procs)
        .map_err(|err| CliError::Data(format!("{}: {err}", path.display())))?;
    let label = path
        .file_name()
        .map(|name| name.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((matrix, label))
}

/// Headered files announce their own dimensions; headerless files use the
/// flags, defaulting to the 512x16 benchmark shape. Explicit flags win, but
/// a headered file that matches them is still accepted.
fn parse_matrix(
    text: &str,
    tasks: Option<usize>,
    procs: Option<usize>,
) -> Result<EtcMatrix, InstanceError> {
    if tasks.is_none() && procs.is_none() {
        return parse_headered(text)
            .or_else(|_| parse_instance(text, DEFAULT_TASKS, DEFAULT_PROCS));
    }
    let tasks = tasks.unwrap_or(DEFAULT_TASKS);
    let procs = procs.unwrap_or(DEFAULT_PROCS);
    parse_instance(text, tasks, procs).or_else(|plain_err| match parse_headered(text) {
        Ok(matrix) if matrix.num_tasks() == tasks && matrix.num_procs() == procs => Ok(matrix),
        _ => Err(plain_err),
    })
}

/// Reads `instance,makespan` rows; a first line whose second field is not a
/// number is treated as a header.
fn read_results_csv(path: &Path) -> Result<Vec<(String, f64)>, CliError> {
    if !path.is_file() {
        return Err(CliError::Usage(format!(
            "results file not found: {}",
            path.display()
        )));
    }
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Usage(format!("cannot read {}: {err}", path.display())))?;
    let mut rows = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((name, value)) = line.split_once(',') else {
            return Err(CliError::Data(format!(
                "{}:{}: expected `instance,makespan`",
                path.display(),
                index + 1
            )));
        };
        match value.trim().parse::<f64>() {
            Ok(makespan) if makespan.is_finite() => {
                rows.push((name.trim().to_string(), makespan));
            }
            _ if index == 0 => {}
            _ => {
                return Err(CliError::Data(format!(
                    "{}:{}: invalid makespan {:?}",
                    path.display(),
                    index + 1,
                    value.trim()
                )));
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Data(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}

/// Pairs by position when the label columns already agree, otherwise joins
/// on unique labels so differently ordered files still match up.
fn pair_samples(
    a: Vec<(String, f64)>,
    b: Vec<(String, f64)>,
    b_path: &Path,
) -> Result<PairedSamples, CliError> {
    let aligned = a.len() == b.len()
        && a.iter()
            .zip(&b)
            .all(|((name_a, _), (name_b, _))| name_a == name_b);
    let (labels, values_a, values_b) = if aligned {
        let labels = a.iter().map(|(name, _)| name.clone()).collect();
        let values_a = a.iter().map(|&(_, value)| value).collect();
        let values_b = b.iter().map(|&(_, value)| value).collect();
        (labels, values_a, values_b)
    } else {
        let mut by_label: HashMap<String, f64> = HashMap::with_capacity(b.len());
        for (name, value) in &b {
            if by_label.insert(name.clone(), *value).is_some() {
                return Err(CliError::Data(format!(
                    "duplicate instance {name:?} in {}; cannot join by label",
                    b_path.display()
                )));
            }
        }
        let mut labels = Vec::with_capacity(a.len());
        let mut values_a = Vec::with_capacity(a.len());
        let mut values_b = Vec::with_capacity(a.len());
        for (name, value) in a {
            let Some(matched) = by_label.remove(&name) else {
                return Err(CliError::Data(format!(
                    "instance {name:?} missing from {}",
                    b_path.display()
                )));
            };
            labels.push(name);
            values_a.push(value);
            values_b.push(matched);
        }
        if let Some(unmatched) = by_label.keys().next() {
            return Err(CliError::Data(format!(
                "instance {unmatched:?} in {} has no counterpart",
                b_path.display()
            )));
        }
        (labels, values_a, values_b)
    };
    PairedSamples::new(labels, values_a, values_b).map_err(|err| CliError::Data(err.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut text| {
            text.push('\n');
            text
        })
        .map_err(|err| CliError::Data(format!("cannot serialize output: {err}")))
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|err| CliError::Usage(format!("cannot write {}: {err}", path.display()))),
    }
}
