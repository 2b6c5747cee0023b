use crate::error::{Error, Result};
use crate::kbn::CompensatedAccumulator;
use crate::model::{Dataset, Line};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrlsConfig {
    pub max_iterations: usize,
    /// Stop once the objective changes by less than this, relatively.
    pub tolerance: f64,
    /// Residual floor in the weights `1 / max(|r_i|, epsilon)`.
    pub epsilon: f64,
}

impl Default for IrlsConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            tolerance: 1e-10,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrlsStatus {
    Converged,
    NonConverged,
}

impl IrlsStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            IrlsStatus::Converged => "converged",
            IrlsStatus::NonConverged => "nonconverged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrlsResult {
    pub line: Line,
    pub objective: f64,
    pub iterations: usize,
    pub status: IrlsStatus,
}

/// Approximate LAD line by iteratively reweighted least squares.
///
/// Starts from the ordinary least-squares line. Not exact: the result is
/// only as good as the weight floor and stopping rule allow.
pub fn irls_fit(dataset: &Dataset, config: &IrlsConfig) -> Result<IrlsResult> {
    if dataset.len() < 2 {
        return Err(Error::Precondition("IRLS needs at least two samples".into()));
    }
    if !(config.epsilon > 0.0) || !(config.tolerance >= 0.0) {
        return Err(Error::Precondition("IRLS epsilon must be positive and tolerance non-negative".into()));
    }
    let mut weights = vec![1.0; dataset.len()];
    let mut line = weighted_least_squares(dataset, &weights);
    let mut objective = dataset.objective(line);

    for iteration in 1..=config.max_iterations {
        for (w, p) in weights.iter_mut().zip(dataset) {
            *w = 1.0 / (line.eval(p.x) - p.y).abs().max(config.epsilon);
        }
        let next = weighted_least_squares(dataset, &weights);
        let next_objective = dataset.objective(next);
        let change = (objective - next_objective).abs();
        line = next;
        let previous = std::mem::replace(&mut objective, next_objective);
        if change <= config.tolerance * previous.max(next_objective) {
            return Ok(IrlsResult {
                line,
                objective,
                iterations: iteration,
                status: IrlsStatus::Converged,
            });
        }
    }
    Ok(IrlsResult {
        line,
        objective,
        iterations: config.max_iterations,
        status: IrlsStatus::NonConverged,
    })
}

fn weighted_least_squares(dataset: &Dataset, weights: &[f64]) -> Line {
    let mut sw = CompensatedAccumulator::new();
    let mut swx = CompensatedAccumulator::new();
    let mut swy = CompensatedAccumulator::new();
    for (w, p) in weights.iter().zip(dataset) {
        sw += *w;
        swx += w * p.x;
        swy += w * p.y;
    }
    let (x_bar, y_bar) = (swx.value() / sw.value(), swy.value() / sw.value());
    let mut sxy = CompensatedAccumulator::new();
    let mut sxx = CompensatedAccumulator::new();
    for (w, p) in weights.iter().zip(dataset) {
        let dx = p.x - x_bar;
        sxy += w * dx * (p.y - y_bar);
        sxx += w * dx * dx;
    }
    let m = sxy.value() / sxx.value();
    if sxx.value() > 0.0 && m.is_finite() {
        Line::new(m, y_bar - m * x_bar)
    } else {
        Line::new(0.0, y_bar)
    }
}
