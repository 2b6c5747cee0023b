use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use palb::baselines::{irls_fit, oracle_fit, IrlsConfig, IrlsStatus};
use palb::bench::{
    compute_profile, isd_problems, merge_records, read_records_file, run_problems, solver_by_name, summarize,
    write_records, BenchProblem, Budget, Metric, Solver,
};
use palb::csvio::read_dataset_csv;
use palb::datagen::{ExperimentSpec, Family};
use palb::{fit, InitialGuess, SolverConfig, Status};

/// Datasets larger than this need `--force` with the cubic oracle.
const ORACLE_LIMIT: usize = 200;

#[derive(Parser)]
#[command(name = "palb", version, about = "Exact least-absolute-deviations line fitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a line to an `x,y` CSV file.
    Fit(FitArgs),
    /// Run a benchmark grid and write one record per (problem, solver).
    Bench(BenchArgs),
    /// Compute performance profiles from benchmark records.
    Profile(ProfileArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverName {
    Palb,
    Irls,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Linear,
    Poly5,
    Outliers,
    Isd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Time,
    Objective,
}

#[derive(Clone, Copy)]
enum StartSlope {
    Auto,
    Slope(f64),
}

fn parse_start(s: &str) -> Result<StartSlope, String> {
    if s == "auto" {
        return Ok(StartSlope::Auto);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(StartSlope::Slope(v)),
        _ => Err(format!("expected `auto` or a finite number, got `{s}`")),
    }
}

#[derive(clap::Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    /// Uncertainty factor of the initial bracket (PALB only).
    #[arg(long, default_value_t = 0.01)]
    mu: f64,
    /// Starting slope (PALB only).
    #[arg(long, default_value = "auto", value_parser = parse_start, allow_hyphen_values = true)]
    m0: StartSlope,
    /// Solve on the raw coordinates (PALB only).
    #[arg(long)]
    no_normalize: bool,
    #[arg(long, value_enum, default_value_t = SolverName::Palb)]
    solver: SolverName,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run the oracle even on large inputs.
    #[arg(long)]
    force: bool,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    experiment: Experiment,
    /// Comma-separated sample sizes (ignored for isd).
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    sizes: Vec<usize>,
    /// Number of seeds per size, starting at 0.
    #[arg(long, env = "PALB_SEED", default_value_t = 1)]
    seeds: u64,
    #[arg(long, value_delimiter = ',', default_value = "palb")]
    solvers: Vec<String>,
    /// Skip larger sizes for a solver once its median runtime exceeds this.
    #[arg(long)]
    budget_seconds: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    /// Directory of station CSVs for the isd experiment.
    #[arg(long)]
    input_dir: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ProfileArgs {
    #[arg(long, num_args = 1.., required = true)]
    records: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = MetricArg::Time)]
    metric: MetricArg,
    #[arg(long)]
    out: PathBuf,
}

struct FitReport {
    m: f64,
    t: f64,
    objective: f64,
    status: &'static str,
    expansion_steps: Option<usize>,
    subdivision_steps: Option<usize>,
    runtime_seconds: f64,
    converged: bool,
}

/// Seventeen significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<usize>, null: &str) -> String {
    v.map_or_else(|| null.to_string(), |n| n.to_string())
}

impl FitReport {
    fn json(&self) -> String {
        format!(
            "{{\"m\":{},\"t\":{},\"objective\":{},\"status\":\"{}\",\"expansion_steps\":{},\"subdivision_steps\":{},\"runtime_seconds\":{}}}",
            num(self.m),
            num(self.t),
            num(self.objective),
            self.status,
            opt(self.expansion_steps, "null"),
            opt(self.subdivision_steps, "null"),
            num(self.runtime_seconds),
        )
    }

    fn csv(&self) -> String {
        format!(
            "m,t,objective,status,expansion_steps,subdivision_steps,runtime_seconds\n{},{},{},{},{},{},{}",
            num(self.m),
            num(self.t),
            num(self.objective),
            self.status,
            opt(self.expansion_steps, ""),
            opt(self.subdivision_steps, ""),
            num(self.runtime_seconds),
        )
    }
}

fn cmd_fit(args: FitArgs) -> anyhow::Result<ExitCode> {
    let data = read_dataset_csv(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let start = Instant::now();
    let report = match args.solver {
        SolverName::Palb => {
            let config = SolverConfig {
                mu: args.mu,
                initial_guess: match args.m0 {
                    StartSlope::Auto => InitialGuess::Auto,
                    StartSlope::Slope(m) => InitialGuess::Explicit(m),
                },
                normalize: !args.no_normalize,
                ..SolverConfig::default()
            };
            let r = fit(&data, &config)?;
            FitReport {
                m: r.line.m,
                t: r.line.t,
                objective: r.objective,
                status: r.status.as_str(),
                expansion_steps: Some(r.expansion_steps),
                subdivision_steps: Some(r.subdivision_steps),
                runtime_seconds: start.elapsed().as_secs_f64(),
                converged: r.status == Status::Converged,
            }
        }
        SolverName::Irls => {
            let r = irls_fit(&data, &IrlsConfig::default())?;
            FitReport {
                m: r.line.m,
                t: r.line.t,
                objective: r.objective,
                status: r.status.as_str(),
                expansion_steps: None,
                subdivision_steps: None,
                runtime_seconds: start.elapsed().as_secs_f64(),
                converged: r.status == IrlsStatus::Converged,
            }
        }
        SolverName::Oracle => {
            if data.len() > ORACLE_LIMIT && !args.force {
                bail!(
                    "the oracle enumerates all point pairs (cubic cost); {} samples exceeds {ORACLE_LIMIT}, pass --force to run anyway",
                    data.len()
                );
            }
            let r = oracle_fit(&data)?;
            FitReport {
                m: r.line.m,
                t: r.line.t,
                objective: r.objective,
                status: "converged",
                expansion_steps: None,
                subdivision_steps: None,
                runtime_seconds: start.elapsed().as_secs_f64(),
                converged: true,
            }
        }
    };
    match args.format {
        Format::Json => println!("{}", report.json()),
        Format::Csv => println!("{}", report.csv()),
    }
    Ok(if report.converged { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    let solvers: Vec<Box<dyn Solver>> = args
        .solvers
        .iter()
        .map(|s| solver_by_name(s.trim()))
        .collect::<Result<_, _>>()?;
    let solver_refs: Vec<&dyn Solver> = solvers.iter().map(|s| s.as_ref()).collect();

    let family = match args.experiment {
        Experiment::Linear => Some(Family::Linear),
        Experiment::Poly5 => Some(Family::Poly5),
        Experiment::Outliers => Some(Family::Outliers),
        Experiment::Isd => None,
    };
    let problems: Vec<BenchProblem> = match family {
        Some(family) => {
            if args.sizes.is_empty() || args.sizes.contains(&0) {
                bail!("sizes must be positive");
            }
            let mut problems = Vec::new();
            for &n in &args.sizes {
                for seed in 0..args.seeds {
                    let spec = ExperimentSpec::new(family, n, seed);
                    spec.validate()?;
                    problems.push(BenchProblem::synthetic(spec));
                }
            }
            problems
        }
        None => {
            let dir = args.input_dir.as_deref().context("--input-dir is required for the isd experiment")?;
            let (mut problems, rejected) = isd_problems(dir)?;
            // small series first so the budget cut-off applies by size
            problems.sort_by_key(|p| (p.key.n, p.key.seed));
            let log_path = sidecar_log(&args.out);
            let mut log = create(&log_path)?;
            for (path, err) in &rejected {
                writeln!(log, "skipped {}: {err}", path.display())?;
            }
            log.flush()?;
            if !rejected.is_empty() {
                eprintln!("{} series skipped, see {}", rejected.len(), log_path.display());
            }
            problems
        }
    };

    let budget = args.budget_seconds.map(|seconds| Budget { seconds });
    let records = run_problems(&problems, &solver_refs, budget)?;
    let mut out = create(&args.out)?;
    write_records(&records, &mut out)?;
    out.flush()?;
    for row in summarize(&records) {
        eprintln!(
            "{:<8} {:<9} n={:<9} solved {}/{} median runtime {}",
            row.solver,
            row.experiment,
            row.n,
            row.solved,
            row.runs,
            row.median_runtime.map_or("-".into(), |t| format!("{t:.3e} s")),
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn sidecar_log(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".log");
    PathBuf::from(name)
}

fn cmd_profile(args: ProfileArgs) -> anyhow::Result<ExitCode> {
    let sets = args
        .records
        .iter()
        .map(|p| read_records_file(p).with_context(|| format!("reading {}", p.display())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let records = merge_records(sets)?;
    let metric = match args.metric {
        MetricArg::Time => Metric::Time,
        MetricArg::Objective => Metric::Objective,
    };
    let profile = compute_profile(&records, metric)?;
    let mut out = create(&args.out)?;
    profile.write_csv(&mut out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Profile(args) => cmd_profile(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
