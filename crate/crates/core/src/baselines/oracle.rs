use crate::error::{Error, Result};
use crate::model::{Dataset, Line};

/// Best line through two samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub line: Line,
    pub objective: f64,
    pub optimal_pair: (usize, usize),
}

/// Exact LAD line by enumerating every pair of samples with distinct x.
///
/// Some optimal line always interpolates two samples, so the minimum over
/// pair lines is the global optimum. Cost is cubic in `N`. Ties keep the
/// first pair in lexicographic `(i, j)` order.
pub fn oracle_fit(dataset: &Dataset) -> Result<OracleResult> {
    let pts = dataset.points();
    let mut best: Option<OracleResult> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let Some(line) = Line::through(pts[i], pts[j]) else {
                continue;
            };
            let objective = dataset.objective(line);
            if best.is_none_or(|b| objective < b.objective) {
                best = Some(OracleResult {
                    line,
                    objective,
                    optimal_pair: (i, j),
                });
            }
        }
    }
    best.ok_or(Error::DegenerateAbscissae)
}

/// Smallest and largest slope among pair lines whose objective is within
/// `rel_tol` of the optimum; this is the solution set of the slope problem.
pub fn oracle_solution_slopes(dataset: &Dataset, rel_tol: f64) -> Result<(f64, f64)> {
    let best = oracle_fit(dataset)?.objective;
    let pts = dataset.points();
    let threshold = best + rel_tol * best.abs().max(f64::MIN_POSITIVE);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if let Some(line) = Line::through(pts[i], pts[j]) {
                if dataset.objective(line) <= threshold {
                    lo = lo.min(line.m);
                    hi = hi.max(line.m);
                }
            }
        }
    }
    Ok((lo, hi))
}
