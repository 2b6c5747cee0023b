//! Acceptance suite. Run with `cargo test -p palb --test acceptance`.
//!
//! Prints one PASS/FAIL line per criterion and exits non-zero if any fail.

use std::time::Instant;

use palb::baselines::{oracle_fit, oracle_solution_slopes};
use palb::bench::{compute_profile, BenchmarkRecord, Metric, RecordStatus};
use palb::datagen::{generate, ExperimentSpec, Family};
use palb::knapsack::{solve_knapsack, solve_knapsack_min};
use palb::station::{parse_station_csv, parse_timestamp, years_since_1950};
use palb::{evaluate, fit, Dataset, Error, InitialGuess, Line, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

const FAMILIES: [Family; 3] = [Family::Linear, Family::Poly5, Family::Outliers];

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0_f64;
    let mut failures = 0;
    for i in 0..500u64 {
        let n = rng.random_range(3..=60);
        let spec = ExperimentSpec::new(FAMILIES[i as usize % 3], n, 10_000 + i);
        let d = generate(&spec).unwrap();
        let got = fit(&d, &SolverConfig::default()).unwrap().objective;
        let want = oracle_fit(&d).unwrap().objective;
        let e = if want == 0.0 { got.abs() } else { rel_err(got, want) };
        worst = worst.max(e);
        if e > 1e-9 {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{} of 500 instances within 1e-9 relative (worst {worst:.1e})", 500 - failures),
    )
}

/// `J(m)` via a full sort of the residuals.
fn sorted_j(d: &Dataset, m: f64) -> f64 {
    let mut r: Vec<f64> = d.iter().map(|p| p.y - m * p.x).collect();
    r.sort_by(f64::total_cmp);
    let med = r[r.len() / 2];
    r.iter().map(|v| (v - med).abs()).sum()
}

/// `[min, max]` of `{S + Σ_{I0} α_i x_i : Σ α_i = −B, α ∈ [−1, 1]^{|I0|}}` by
/// enumerating vertices: all but at most one `α_i` at a bound.
fn e_interval_by_vertices(d: &Dataset, m: f64, t: f64) -> Option<(f64, f64)> {
    let (mut s, mut b, mut zero) = (0.0, 0i64, vec![]);
    for p in d.iter() {
        let key = p.y - m * p.x;
        if key < t {
            s += p.x;
            b += 1;
        } else if key > t {
            s -= p.x;
            b -= 1;
        } else {
            zero.push(p.x);
        }
    }
    let k = zero.len();
    let target = -(b as f64);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for mask in 0u32..(1 << k) {
        let alpha = |i: usize| if mask & (1 << i) != 0 { 1.0 } else { -1.0 };
        let total: f64 = (0..k).map(alpha).sum();
        let base: f64 = (0..k).map(|i| alpha(i) * zero[i]).sum();
        if total == target {
            lo = lo.min(s + base);
            hi = hi.max(s + base);
        }
        #[allow(clippy::needless_range_loop)]
        for j in 0..k {
            // free coordinate j absorbs the remaining budget
            let free = target - (total - alpha(j));
            if (-1.0..=1.0).contains(&free) {
                let v = s + base - alpha(j) * zero[j] + free * zero[j];
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn subdifferential_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut fd_worst, mut lp_worst, mut lp_checked, mut at_kinks) = (0.0_f64, 0.0_f64, 0, 0);
    let mut pairs = 0;
    while pairs < 200 {
        let n = rng.random_range(2..=12);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(-5i32..=5) as f64, rng.random_range(-10i32..=10) as f64))
            .collect();
        let d = Dataset::from_pairs(&pts).unwrap();
        let mut kinks = vec![];
        let mut dyadic_kinks = vec![];
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                let dx = q.0 - p.0;
                if dx != 0.0 {
                    let k = (q.1 - p.1) / dx;
                    kinks.push(k);
                    if [1.0, 2.0, 4.0, 8.0].contains(&dx.abs()) {
                        dyadic_kinks.push(k);
                    }
                }
            }
        }
        if kinks.is_empty() {
            continue;
        }
        // every other slope sits on a kink whose keys are exact in binary
        let m = if pairs % 2 == 0 && !dyadic_kinks.is_empty() {
            at_kinks += 1;
            dyadic_kinks[rng.random_range(0..dyadic_kinks.len())]
        } else {
            rng.random_range(-12.0..12.0)
        };
        let gap = kinks
            .iter()
            .filter(|&&k| k != m)
            .map(|k| (k - m).abs())
            .fold(f64::INFINITY, f64::min);
        let h = if gap.is_finite() { 0.1 * gap } else { 0.1 };
        let j0 = sorted_j(&d, m);
        let left = (j0 - sorted_j(&d, m - h)) / h;
        let right = (sorted_j(&d, m + h) - j0) / h;
        let e = evaluate(&d, m).unwrap();
        fd_worst = fd_worst.max((e.subdiff.lo - left).abs()).max((e.subdiff.hi - right).abs());

        let mut keys: Vec<f64> = d.iter().map(|p| p.y - m * p.x).collect();
        keys.sort_by(f64::total_cmp);
        let (t_lo, t_hi) = (keys[(keys.len() - 1) / 2], keys[keys.len() / 2]);
        let zero_count = |t: f64| keys.iter().filter(|&&k| k == t).count();
        if zero_count(t_lo) <= 8 && zero_count(t_hi) <= 8 {
            let a = e_interval_by_vertices(&d, m, t_hi);
            let b = e_interval_by_vertices(&d, m, t_lo);
            match (a, b) {
                (Some(a), Some(b)) => {
                    let (lo, hi) = (a.0.min(b.0), a.1.max(b.1));
                    lp_worst = lp_worst.max((e.subdiff.lo - lo).abs()).max((e.subdiff.hi - hi).abs());
                    lp_checked += 1;
                }
                _ => lp_worst = f64::INFINITY,
            }
        }
        pairs += 1;
    }
    outcome(
        fd_worst <= 1e-9 && lp_worst <= 1e-12,
        format!(
            "200 pairs ({at_kinks} at kinks): finite differences within {fd_worst:.1e} (≤1e-9), \
             LP vertices on {lp_checked} within {lp_worst:.1e} (≤1e-12)"
        ),
    )
}

/// Largest `Σ β_i v_i` over vertices of `{β ∈ [0,1]^n : Σ β = C}`.
fn knapsack_vertices(v: &[f64], c: f64) -> f64 {
    let n = v.len();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        let ones = mask.count_ones() as f64;
        let base: f64 = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| v[i]).sum();
        if ones == c {
            best = best.max(base);
        }
        let frac = c - ones;
        if frac > 0.0 && frac < 1.0 {
            for j in (0..n).filter(|&j| mask & (1 << j) == 0) {
                best = best.max(base + frac * v[j]);
            }
        }
    }
    best
}

fn knapsack_brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=8);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let c = rng.random_range(0..=2 * n) as f64 / 2.0;
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        let max = solve_knapsack(&mut v.clone(), c).unwrap();
        let min = solve_knapsack_min(&mut v.clone(), c).unwrap();
        worst = worst
            .max((max - knapsack_vertices(&v, c)).abs())
            .max((min + knapsack_vertices(&neg, c)).abs());
    }
    outcome(worst <= 1e-12, format!("1000 instances, worst deviation {worst:.1e} (≤1e-12)"))
}

fn expansion_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mu = 0.01;
    let (mut checked, mut violations, mut max_seen) = (0, 0, 0);
    for i in 0..120u64 {
        let n = rng.random_range(5..=40);
        let d = generate(&ExperimentSpec::new(FAMILIES[i as usize % 3], n, 20_000 + i)).unwrap();
        let (lo, hi) = oracle_solution_slopes(&d, 1e-12).unwrap();
        let dist = [0.003, 0.5, 7.0, 300.0, 1e5, 3e7][i as usize % 6] * rng.random_range(1.0..2.0);
        let m0 = if i % 2 == 0 { hi + dist } else { lo - dist };
        let config = SolverConfig {
            mu,
            initial_guess: InitialGuess::Explicit(m0),
            normalize: false,
            ..SolverConfig::default()
        };
        let r = fit(&d, &config).unwrap();
        let h = m0.abs().max(1.0);
        let bound = (dist / (mu * h) + 1.0).log2().ceil() as usize;
        max_seen = max_seen.max(r.expansion_steps);
        checked += 1;
        if r.expansion_steps > bound {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{checked} displaced starts, {violations} above ⌈log2(d/(μh)+1)⌉ (most expansions seen: {max_seen})"),
    )
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn step_trend() -> Outcome {
    let mut medians = vec![];
    for exp in 3..=6u32 {
        let n = 10usize.pow(exp);
        let mut steps: Vec<f64> = (0..50)
            .map(|seed| {
                let d = generate(&ExperimentSpec::new(Family::Linear, n, seed)).unwrap();
                fit(&d, &SolverConfig::default()).unwrap().total_steps() as f64
            })
            .collect();
        let cap = palb::solver::default_iteration_cap(n) as f64;
        let over_cap = steps.iter().any(|&s| s > cap);
        medians.push((exp, median(&mut steps), over_cap));
    }
    let mut pass = true;
    for (i, &(exp, m, over_cap)) in medians.iter().enumerate() {
        pass &= !over_cap && m <= 10.0 * exp as f64 + 20.0;
        if i > 0 {
            let prev = medians[i - 1].1;
            pass &= m >= prev && m - prev <= 15.0;
        }
    }
    let shown: Vec<String> = medians.iter().map(|(e, m, _)| format!("1e{e}:{m}")).collect();
    outcome(
        pass,
        format!("median steps {} (nondecreasing, ≤15/decade, ≤10·log10N+20, never above cap)", shown.join(" ")),
    )
}

fn throughput() -> Outcome {
    let d = generate(&ExperimentSpec::new(Family::Linear, 1_000_000, 7)).unwrap();
    let mut times: Vec<f64> = (0..5)
        .map(|_| {
            let start = Instant::now();
            let r = fit(&d, &SolverConfig::default()).unwrap();
            std::hint::black_box(r);
            start.elapsed().as_secs_f64()
        })
        .collect();
    let m = median(&mut times);
    outcome(m <= 3.0, format!("N=1e6 median of 5 runs {m:.3} s (≤3 s)"))
}

fn affine_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst, mut unique, mut worst_line) = (0.0_f64, 0, 0.0_f64);
    for i in 0..100u64 {
        let n = rng.random_range(3..=60) | 1;
        let d = generate(&ExperimentSpec::new(FAMILIES[i as usize % 3], n, 30_000 + i)).unwrap();
        let (sx, sy) = (rng.random_range(0.1..10.0), rng.random_range(0.1..10.0));
        let (tx, ty) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let moved: Vec<(f64, f64)> = d.iter().map(|p| (sx * p.x + tx, sy * p.y + ty)).collect();
        let moved = Dataset::from_pairs(&moved).unwrap();
        let base = fit(&d, &SolverConfig::default()).unwrap();
        let other = fit(&moved, &SolverConfig::default()).unwrap().line;
        // back to the original frame
        let m = other.m * sx / sy;
        let back = Line::new(m, (other.t + other.m * tx - ty) / sy);
        worst = worst.max(rel_err(d.objective(back), base.objective));
        let (lo, hi) = oracle_solution_slopes(&d, 1e-12).unwrap();
        if lo == hi {
            unique += 1;
            worst_line = worst_line
                .max((back.m - base.line.m).abs() / base.line.m.abs().max(1.0))
                .max((back.t - base.line.t).abs() / base.line.t.abs().max(1.0));
        }
    }
    outcome(
        worst <= 1e-9 && worst_line <= 1e-9,
        format!(
            "100 transforms: objective within {worst:.1e} (≤1e-9); {unique} unique optima, (m, t) within {worst_line:.1e}"
        ),
    )
}

fn record(solver: &str, seed: u64, t: f64, status: RecordStatus) -> BenchmarkRecord {
    BenchmarkRecord {
        solver: solver.into(),
        experiment: "linear".into(),
        n: 10,
        seed,
        runtime_seconds: Some(t),
        objective: Some(1.0),
        status,
        expansion_steps: None,
        subdivision_steps: None,
        dataset_hash: None,
    }
}

fn profile_definition() -> Outcome {
    let rs = [
        record("s1", 1, 1.0, RecordStatus::Ok),
        record("s2", 1, 2.0, RecordStatus::Ok),
        record("s1", 2, 4.0, RecordStatus::Ok),
        record("s2", 2, 2.0, RecordStatus::Ok),
    ];
    let p = compute_profile(&rs, Metric::Time).unwrap();
    let got = [
        p.rho("s1", 1.0),
        p.rho("s1", 2.0),
        p.rho("s2", 1.0),
        p.rho("s2", 2.0),
    ];
    let exact = got == [Some(0.5), Some(1.0), Some(0.5), Some(1.0)];

    let failing = [
        record("s1", 1, 1.0, RecordStatus::Ok),
        record("s2", 1, 2.0, RecordStatus::Ok),
        record("s1", 2, 4.0, RecordStatus::Nonconverged),
        record("s2", 2, 2.0, RecordStatus::Ok),
    ];
    let q = compute_profile(&failing, Metric::Time).unwrap();
    let plateau = q.rho("s1", 1e300).unwrap();
    outcome(
        exact && plateau == 0.5,
        format!("ρ values {got:?}; failure plateau ρ_s1(∞) = {plateau}"),
    )
}

fn isd_ingestion() -> Outcome {
    let x = |s: &str| years_since_1950(parse_timestamp(s).unwrap());
    let epoch = x("1950-01-01T00:00:00Z");
    let year = x("1951-01-01T00:00:00Z");

    let rows = |nulls: usize| {
        let mut s = String::from("timestamp,temperature\n");
        for h in 0..12 {
            let v = if h < nulls { String::new() } else { format!("{}.25", h) };
            s += &format!("1950-01-01T{h:02}:00:00Z,{v}\n");
        }
        s
    };
    let kept = parse_station_csv(rows(2).as_bytes());
    let kept_ok = match &kept {
        Ok(s) => {
            s.dropped_nulls == 2
                && s.dataset.len() == 10
                && s.dataset.iter().enumerate().all(|(i, p)| {
                    let h = i + 2;
                    p.x == (h as f64 * 3600.0) / 31_557_600.0 && p.y == h as f64 + 0.25
                })
        }
        Err(_) => false,
    };
    let rejected = matches!(
        parse_station_csv(rows(3).as_bytes()),
        Err(Error::SeriesTooShort { kept: 9, dropped: 3, .. })
    );
    outcome(
        epoch == 0.0 && year == 31_536_000.0 / 31_557_600.0 && kept_ok && rejected,
        format!("epoch → {epoch}, 1951 → {year}, 2 nulls kept 10 rows: {kept_ok}, 3 nulls rejected: {rejected}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("subdifferential oracle", subdifferential_oracle),
        ("knapsack brute force", knapsack_brute_force),
        ("expansion bound", expansion_bound),
        ("step-count trend", step_trend),
        ("throughput", throughput),
        ("affine invariance", affine_invariance),
        ("performance profile", profile_definition),
        ("station ingestion", isd_ingestion),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let o = check();
        let took = start.elapsed();
        println!("{} {name}: {} [{:.1?}]", if o.pass { "PASS" } else { "FAIL" }, o.detail, took);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
