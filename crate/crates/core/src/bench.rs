//! Benchmark grids and performance profiles.
//!
//! A *problem* is an `(experiment, n, seed)` triple. [`run_grid`] solves
//! every problem with every solver, timing only the solve call, and
//! [`compute_profile`] turns the resulting records into the step functions
//! `ρ_s(τ) = |{p : r_{p,s} ≤ τ}| / |P|`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{irls_fit, oracle_fit, IrlsConfig, IrlsStatus};
use crate::datagen::{generate, ExperimentSpec};
use crate::error::{Error, Result};
use crate::model::{Dataset, Line};
use crate::solver::{fit, SolverConfig, Status};
use crate::station::read_station_csv;

/// Runtimes below this are clamped before forming ratios.
pub const TIME_FLOOR: f64 = 1e-9;

/// Relative objective gap treated as a tie.
pub const OBJECTIVE_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordStatus {
    Ok,
    Nonconverged,
    Capped,
    Skipped,
}

impl RecordStatus {
    /// Whether the record counts as solved in a profile.
    pub fn solved(&self) -> bool {
        matches!(self, RecordStatus::Ok | RecordStatus::Capped)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub line: Line,
    pub objective: f64,
    pub status: RecordStatus,
    pub expansion_steps: Option<usize>,
    pub subdivision_steps: Option<usize>,
}

pub trait Solver {
    fn name(&self) -> &str;
    fn solve(&self, dataset: &Dataset) -> Result<SolveOutcome>;
}

#[derive(Debug, Clone, Default)]
pub struct PalbSolver {
    pub config: SolverConfig,
}

impl Solver for PalbSolver {
    fn name(&self) -> &str {
        "palb"
    }

    fn solve(&self, dataset: &Dataset) -> Result<SolveOutcome> {
        let r = fit(dataset, &self.config)?;
        Ok(SolveOutcome {
            line: r.line,
            objective: r.objective,
            status: match r.status {
                Status::Converged => RecordStatus::Ok,
                Status::WidthCutoff | Status::IterationCap => RecordStatus::Capped,
            },
            expansion_steps: Some(r.expansion_steps),
            subdivision_steps: Some(r.subdivision_steps),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct IrlsSolver {
    pub config: IrlsConfig,
}

impl Solver for IrlsSolver {
    fn name(&self) -> &str {
        "irls"
    }

    fn solve(&self, dataset: &Dataset) -> Result<SolveOutcome> {
        let r = irls_fit(dataset, &self.config)?;
        Ok(SolveOutcome {
            line: r.line,
            objective: r.objective,
            status: match r.status {
                IrlsStatus::Converged => RecordStatus::Ok,
                IrlsStatus::NonConverged => RecordStatus::Nonconverged,
            },
            expansion_steps: None,
            subdivision_steps: None,
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleSolver;

impl Solver for OracleSolver {
    fn name(&self) -> &str {
        "oracle"
    }

    fn solve(&self, dataset: &Dataset) -> Result<SolveOutcome> {
        let r = oracle_fit(dataset)?;
        Ok(SolveOutcome {
            line: r.line,
            objective: r.objective,
            status: RecordStatus::Ok,
            expansion_steps: None,
            subdivision_steps: None,
        })
    }
}

/// Names accepted by [`solver_by_name`].
pub const SOLVER_NAMES: [&str; 3] = ["palb", "irls", "oracle"];

pub fn solver_by_name(name: &str) -> Result<Box<dyn Solver>> {
    match name {
        "palb" => Ok(Box::new(PalbSolver::default())),
        "irls" => Ok(Box::new(IrlsSolver::default())),
        "oracle" => Ok(Box::new(OracleSolver)),
        other => Err(Error::InvalidSpec(format!(
            "unknown solver `{other}` (expected one of {})",
            SOLVER_NAMES.join(", ")
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProblemKey {
    pub experiment: String,
    pub n: usize,
    pub seed: u64,
}

impl fmt::Display for ProblemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/n={}/seed={}", self.experiment, self.n, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub solver: String,
    pub experiment: String,
    pub n: usize,
    pub seed: u64,
    pub runtime_seconds: Option<f64>,
    pub objective: Option<f64>,
    pub status: RecordStatus,
    pub expansion_steps: Option<usize>,
    pub subdivision_steps: Option<usize>,
    #[serde(skip)]
    pub dataset_hash: Option<u64>,
}

impl BenchmarkRecord {
    pub fn problem(&self) -> ProblemKey {
        ProblemKey {
            experiment: self.experiment.clone(),
            n: self.n,
            seed: self.seed,
        }
    }

    fn skipped(solver: &str, key: &ProblemKey) -> Self {
        Self {
            solver: solver.to_string(),
            experiment: key.experiment.clone(),
            n: key.n,
            seed: key.seed,
            runtime_seconds: None,
            objective: None,
            status: RecordStatus::Skipped,
            expansion_steps: None,
            subdivision_steps: None,
            dataset_hash: None,
        }
    }

    fn same_result(&self, other: &Self) -> bool {
        let bits = |v: Option<f64>| v.map(f64::to_bits);
        self.solver == other.solver
            && self.problem() == other.problem()
            && self.status == other.status
            && bits(self.runtime_seconds) == bits(other.runtime_seconds)
            && bits(self.objective) == bits(other.objective)
            && self.expansion_steps == other.expansion_steps
            && self.subdivision_steps == other.subdivision_steps
    }
}

/// Where a problem's data comes from.
#[derive(Debug, Clone)]
pub enum ProblemSource {
    Synthetic(ExperimentSpec),
    Data(Dataset),
}

#[derive(Debug, Clone)]
pub struct BenchProblem {
    pub key: ProblemKey,
    pub source: ProblemSource,
}

impl BenchProblem {
    pub fn synthetic(spec: ExperimentSpec) -> Self {
        Self {
            key: ProblemKey {
                experiment: spec.family.as_str().to_string(),
                n: spec.n,
                seed: spec.seed,
            },
            source: ProblemSource::Synthetic(spec),
        }
    }

    pub fn from_data(experiment: &str, seed: u64, dataset: Dataset) -> Self {
        Self {
            key: ProblemKey {
                experiment: experiment.to_string(),
                n: dataset.len(),
                seed,
            },
            source: ProblemSource::Data(dataset),
        }
    }

    fn dataset(&self) -> Result<Dataset> {
        match &self.source {
            ProblemSource::Synthetic(spec) => generate(spec),
            ProblemSource::Data(d) => Ok(d.clone()),
        }
    }
}

/// Per-solver runtime budget: once a solver's median runtime over a
/// completed `(experiment, n)` level exceeds it, larger `n` of that
/// experiment are skipped for that solver. A budget `≤ 0` skips everything.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub seconds: f64,
}

pub fn run_grid(
    specs: &[ExperimentSpec],
    solvers: &[&dyn Solver],
    budget: Option<Budget>,
) -> Result<Vec<BenchmarkRecord>> {
    for spec in specs {
        spec.validate()?;
    }
    let problems: Vec<_> = specs.iter().copied().map(BenchProblem::synthetic).collect();
    run_problems(&problems, solvers, budget)
}

/// Runs every problem with every solver, sequentially, in level order.
///
/// Problems are grouped into `(experiment, n)` levels kept in order of
/// first appearance. Solver failures and panics become `nonconverged`
/// records.
pub fn run_problems(
    problems: &[BenchProblem],
    solvers: &[&dyn Solver],
    budget: Option<Budget>,
) -> Result<Vec<BenchmarkRecord>> {
    let mut levels: Vec<((String, usize), Vec<&BenchProblem>)> = Vec::new();
    for p in problems {
        let level = (p.key.experiment.clone(), p.key.n);
        match levels.iter_mut().find(|(l, _)| *l == level) {
            Some((_, members)) => members.push(p),
            None => levels.push((level, vec![p])),
        }
    }

    // (solver, experiment) → the n whose level exhausted the budget
    let mut exhausted: HashMap<(usize, String), usize> = HashMap::new();
    let mut records = Vec::new();
    for ((experiment, n), members) in &levels {
        let skip: Vec<bool> = (0..solvers.len())
            .map(|s| match budget {
                Some(b) if b.seconds <= 0.0 => true,
                _ => exhausted
                    .get(&(s, experiment.clone()))
                    .is_some_and(|&limit| *n > limit),
            })
            .collect();
        let mut level_times: Vec<Vec<f64>> = vec![Vec::new(); solvers.len()];
        for problem in members {
            let dataset = if skip.iter().all(|&s| s) {
                None
            } else {
                Some(problem.dataset()?)
            };
            for (s, solver) in solvers.iter().enumerate() {
                let dataset = match (&dataset, skip[s]) {
                    (Some(d), false) => d,
                    _ => {
                        records.push(BenchmarkRecord::skipped(solver.name(), &problem.key));
                        continue;
                    }
                };
                let record = run_one(*solver, &problem.key, dataset);
                if let Some(t) = record.runtime_seconds {
                    level_times[s].push(t);
                }
                records.push(record);
            }
        }
        if let Some(b) = budget {
            for (s, times) in level_times.iter_mut().enumerate() {
                if let Some(m) = median(times) {
                    if m > b.seconds {
                        exhausted.entry((s, experiment.clone())).or_insert(*n);
                    }
                }
            }
        }
    }
    Ok(records)
}

fn run_one(solver: &dyn Solver, key: &ProblemKey, dataset: &Dataset) -> BenchmarkRecord {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| solver.solve(dataset)));
    let elapsed = start.elapsed().as_secs_f64();
    let mut record = BenchmarkRecord {
        solver: solver.name().to_string(),
        experiment: key.experiment.clone(),
        n: key.n,
        seed: key.seed,
        runtime_seconds: Some(elapsed),
        objective: None,
        status: RecordStatus::Nonconverged,
        expansion_steps: None,
        subdivision_steps: None,
        dataset_hash: Some(dataset.content_hash()),
    };
    if let Ok(Ok(o)) = outcome {
        record.objective = Some(o.objective);
        record.status = o.status;
        record.expansion_steps = o.expansion_steps;
        record.subdivision_steps = o.subdivision_steps;
    }
    record
}

/// Station files that could not be turned into a problem.
pub type Rejected = Vec<(PathBuf, Error)>;

/// Station series from every `*.csv` file in `dir`, in file-name order.
///
/// The seed of each problem is the file's position in that order. Files
/// that fail to load are returned separately with their error.
pub fn isd_problems(dir: impl AsRef<Path>) -> Result<(Vec<BenchProblem>, Rejected)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")))
        .collect();
    files.sort();
    let mut problems = Vec::new();
    let mut rejected = Vec::new();
    for (i, path) in files.into_iter().enumerate() {
        match read_station_csv(&path) {
            Ok(series) => problems.push(BenchProblem::from_data("isd", i as u64, series.dataset)),
            Err(e) => rejected.push((path, e)),
        }
    }
    Ok((problems, rejected))
}

pub fn write_records(records: &[BenchmarkRecord], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record([
            "solver",
            "experiment",
            "n",
            "seed",
            "runtime_seconds",
            "objective",
            "status",
            "expansion_steps",
            "subdivision_steps",
        ])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(reader: impl Read) -> Result<Vec<BenchmarkRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for r in rdr.deserialize() {
        out.push(r?);
    }
    Ok(out)
}

pub fn read_records_file(path: impl AsRef<Path>) -> Result<Vec<BenchmarkRecord>> {
    read_records(std::fs::File::open(path)?)
}

/// Concatenates record sets, dropping exact duplicates.
///
/// Two records for the same solver and problem that disagree are an error.
pub fn merge_records(sets: impl IntoIterator<Item = Vec<BenchmarkRecord>>) -> Result<Vec<BenchmarkRecord>> {
    let mut seen: HashMap<(String, ProblemKey), usize> = HashMap::new();
    let mut out: Vec<BenchmarkRecord> = Vec::new();
    for set in sets {
        for r in set {
            let key = (r.solver.clone(), r.problem());
            match seen.get(&key) {
                Some(&i) if out[i].same_result(&r) => {}
                Some(_) => {
                    return Err(Error::ConflictingRecords {
                        solver: key.0,
                        problem: key.1.to_string(),
                    })
                }
                None => {
                    seen.insert(key, out.len());
                    out.push(r);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Time,
    Objective,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "time" => Ok(Metric::Time),
            "objective" => Ok(Metric::Objective),
            other => Err(Error::InvalidSpec(format!("unknown metric `{other}`"))),
        }
    }
}

/// Ratios `r_{p,s}` for every solver over a common problem list.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceProfile {
    pub problems: Vec<ProblemKey>,
    /// Solver name → one ratio per problem, `∞` for failures.
    pub ratios: BTreeMap<String, Vec<f64>>,
}

impl PerformanceProfile {
    pub fn solvers(&self) -> impl Iterator<Item = &str> {
        self.ratios.keys().map(String::as_str)
    }

    /// `ρ_s(τ)`, or `None` for an unknown solver.
    pub fn rho(&self, solver: &str, tau: f64) -> Option<f64> {
        let r = self.ratios.get(solver)?;
        if r.is_empty() {
            return Some(0.0);
        }
        Some(r.iter().filter(|&&v| v <= tau).count() as f64 / r.len() as f64)
    }

    /// Sorted finite ratios of all solvers, always including 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut taus: Vec<f64> = self
            .ratios
            .values()
            .flatten()
            .copied()
            .filter(|v| v.is_finite())
            .chain(std::iter::once(1.0))
            .collect();
        taus.sort_by(f64::total_cmp);
        taus.dedup();
        taus
    }

    /// `(solver, τ, ρ)` rows at every breakpoint.
    pub fn samples(&self) -> Vec<(String, f64, f64)> {
        let taus = self.breakpoints();
        let mut rows = Vec::new();
        for s in self.solvers() {
            for &tau in &taus {
                rows.push((s.to_string(), tau, self.rho(s, tau).unwrap_or(0.0)));
            }
        }
        rows
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["solver", "tau", "rho"])?;
        for (s, tau, rho) in self.samples() {
            w.write_record([s, tau.to_string(), rho.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Builds the profile over every problem mentioned in `records`.
///
/// Missing `(problem, solver)` pairs and unsolved records score `∞`. A
/// problem that no solver solved stays in `P` with every ratio `∞`.
pub fn compute_profile(records: &[BenchmarkRecord], metric: Metric) -> Result<PerformanceProfile> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let records = merge_records([records.to_vec()])?;
    let problems: Vec<ProblemKey> = records
        .iter()
        .map(BenchmarkRecord::problem)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let solvers: BTreeSet<String> = records.iter().map(|r| r.solver.clone()).collect();
    let index: HashMap<&ProblemKey, usize> = problems.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut scores: BTreeMap<String, Vec<f64>> = solvers
        .iter()
        .map(|s| (s.clone(), vec![f64::INFINITY; problems.len()]))
        .collect();
    for r in &records {
        let value = match metric {
            Metric::Time => r.runtime_seconds.map(|t| t.max(TIME_FLOOR)),
            Metric::Objective => r.objective,
        };
        if let (true, Some(v)) = (r.status.solved(), value) {
            if v.is_finite() {
                let p = index[&r.problem()];
                scores.get_mut(&r.solver).expect("solver collected above")[p] = v;
            }
        }
    }

    let mut ratios = scores.clone();
    for p in 0..problems.len() {
        let best = scores.values().map(|v| v[p]).fold(f64::INFINITY, f64::min);
        for (s, v) in &scores {
            ratios.get_mut(s).expect("same keys")[p] = ratio(v[p], best, metric);
        }
    }
    Ok(PerformanceProfile { problems, ratios })
}

fn ratio(value: f64, best: f64, metric: Metric) -> f64 {
    if !value.is_finite() {
        return f64::INFINITY;
    }
    match metric {
        Metric::Time => value / best,
        Metric::Objective => {
            if value - best <= OBJECTIVE_TIE * best.abs() {
                1.0
            } else if best == 0.0 {
                f64::INFINITY
            } else {
                value / best
            }
        }
    }
}

/// Per `(solver, experiment, n)` aggregates over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub solver: String,
    pub experiment: String,
    pub n: usize,
    pub runs: usize,
    pub solved: usize,
    /// Failures count as `∞`.
    pub median_runtime: Option<f64>,
    /// `None` when any run failed.
    pub mean_runtime: Option<f64>,
    pub median_objective: Option<f64>,
}

pub fn summarize(records: &[BenchmarkRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, String, usize), Vec<&BenchmarkRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.solver.clone(), r.experiment.clone(), r.n))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((solver, experiment, n), rs)| {
            let score = |r: &&BenchmarkRecord, v: Option<f64>| match (r.status.solved(), v) {
                (true, Some(v)) => v,
                _ => f64::INFINITY,
            };
            let mut times: Vec<f64> = rs.iter().map(|r| score(r, r.runtime_seconds)).collect();
            let mut objs: Vec<f64> = rs.iter().map(|r| score(r, r.objective)).collect();
            let solved = rs.iter().filter(|r| r.status.solved()).count();
            let mean_runtime = (solved == rs.len() && !rs.is_empty())
                .then(|| times.iter().sum::<f64>() / times.len() as f64)
                .filter(|m| m.is_finite());
            SummaryRow {
                solver,
                experiment,
                n,
                runs: rs.len(),
                solved,
                median_runtime: median(&mut times),
                mean_runtime,
                median_objective: median(&mut objs),
            }
        })
        .collect()
}

/// Upper median; `None` for an empty slice.
fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    Some(values[values.len() / 2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(solver: &str, seed: u64, t: f64, status: RecordStatus) -> BenchmarkRecord {
        BenchmarkRecord {
            solver: solver.into(),
            experiment: "linear".into(),
            n: 10,
            seed,
            runtime_seconds: Some(t),
            objective: Some(t),
            status,
            expansion_steps: None,
            subdivision_steps: None,
            dataset_hash: None,
        }
    }

    #[test]
    fn two_by_two_example() {
        let rs = [
            rec("s1", 1, 1.0, RecordStatus::Ok),
            rec("s2", 1, 2.0, RecordStatus::Ok),
            rec("s1", 2, 4.0, RecordStatus::Ok),
            rec("s2", 2, 2.0, RecordStatus::Ok),
        ];
        let p = compute_profile(&rs, Metric::Time).unwrap();
        for s in ["s1", "s2"] {
            assert_eq!(p.rho(s, 1.0), Some(0.5));
            assert_eq!(p.rho(s, 2.0), Some(1.0));
        }
        assert_eq!(p.breakpoints(), vec![1.0, 2.0]);
    }

    #[test]
    fn failures_never_count() {
        let rs = [
            rec("good", 1, 1.0, RecordStatus::Ok),
            rec("bad", 1, 0.5, RecordStatus::Nonconverged),
            rec("good", 2, 1.0, RecordStatus::Ok),
            rec("bad", 2, 0.5, RecordStatus::Skipped),
        ];
        let p = compute_profile(&rs, Metric::Time).unwrap();
        assert_eq!(p.rho("good", 1.0), Some(1.0));
        assert_eq!(p.rho("bad", 1e300), Some(0.0));
    }

    #[test]
    fn objective_ties_absorbed() {
        let mut a = rec("a", 1, 1.0, RecordStatus::Ok);
        let mut b = rec("b", 1, 1.0, RecordStatus::Ok);
        a.objective = Some(3.0);
        b.objective = Some(3.0 * (1.0 + 1e-14));
        let p = compute_profile(&[a, b], Metric::Objective).unwrap();
        assert_eq!(p.rho("a", 1.0), Some(1.0));
        assert_eq!(p.rho("b", 1.0), Some(1.0));
    }

    #[test]
    fn zero_best_objective() {
        let mut a = rec("a", 1, 1.0, RecordStatus::Ok);
        let mut b = rec("b", 1, 1.0, RecordStatus::Ok);
        a.objective = Some(0.0);
        b.objective = Some(1e-3);
        let p = compute_profile(&[a, b], Metric::Objective).unwrap();
        assert_eq!(p.ratios["a"], vec![1.0]);
        assert_eq!(p.ratios["b"], vec![f64::INFINITY]);
    }

    #[test]
    fn conflicting_duplicates() {
        let a = rec("a", 1, 1.0, RecordStatus::Ok);
        assert_eq!(merge_records([vec![a.clone()], vec![a.clone()]]).unwrap().len(), 1);
        let b = rec("a", 1, 2.0, RecordStatus::Ok);
        assert!(matches!(
            merge_records([vec![a], vec![b]]),
            Err(Error::ConflictingRecords { .. })
        ));
        assert!(matches!(compute_profile(&[], Metric::Time), Err(Error::EmptyRecords)));
    }

    #[test]
    fn records_csv_roundtrip() {
        let mut a = rec("palb", 3, 0.25, RecordStatus::Capped);
        a.expansion_steps = Some(2);
        a.subdivision_steps = Some(7);
        let b = BenchmarkRecord::skipped("irls", &a.problem());
        let mut buf = Vec::new();
        write_records(&[a.clone(), b.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "solver,experiment,n,seed,runtime_seconds,objective,status,expansion_steps,subdivision_steps\n"
        ));
        assert!(text.contains("irls,linear,10,3,,,skipped,,\n"));
        assert_eq!(read_records(buf.as_slice()).unwrap(), vec![a, b]);
    }

    #[test]
    fn summary_omits_mean_with_failures() {
        let rs = [
            rec("a", 1, 1.0, RecordStatus::Ok),
            rec("a", 2, 3.0, RecordStatus::Ok),
            rec("a", 3, 2.0, RecordStatus::Nonconverged),
        ];
        let s = summarize(&rs);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].median_runtime, Some(3.0));
        assert_eq!(s[0].mean_runtime, None);
        assert_eq!(summarize(&rs[..2])[0].mean_runtime, Some(2.0));
    }
}
