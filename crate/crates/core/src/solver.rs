//! The safeguarded piecewise affine lower-bounding iteration.
//!
//! The solver keeps a bracket `[a, b]` of slopes together with `J` and `∂J`
//! at both ends. While both subdifferentials share a sign the bracket is
//! shifted toward decreasing `J` with doubling length (expansion). Once the
//! signs oppose, the supporting lines at `a` (slope `max ∂J(a)`) and `b`
//! (slope `min ∂J(b)`) are intersected; the intersection, projected into a
//! slightly shrunken bracket, replaces the endpoint whose sign it shares
//! (subdivision). The iteration stops as soon as an evaluated slope has
//! `0 ∈ ∂J`, which for a piecewise affine convex `J` happens after finitely
//! many subdivisions.
//!
//! [`PalbIterator`] exposes every step as an [`IterationEvent`] so callers
//! can drive the solve themselves or stop early; [`fit`] simply drains it.

use crate::error::{Error, Result};
use crate::kbn::{two_product, CompensatedAccumulator, KbnSumExt};
use crate::marginal::{MarginalContext, MarginalEvaluation, Sign, SubdifferentialInterval};
use crate::model::{least_squares_slope, normalize, AffineNormalization, Dataset, Line};

/// How the starting slope is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum InitialGuess {
    /// Line through first and last point for `N <= 100`, least squares otherwise.
    #[default]
    Auto,
    /// A slope in original data coordinates.
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IterationCap {
    /// `15·⌊log10 N⌋ + 300`.
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub mu: f64,
    pub initial_guess: InitialGuess,
    pub safeguard_fraction: f64,
    pub width_cutoff: f64,
    pub iteration_cap: IterationCap,
    pub normalize: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mu: 0.01,
            initial_guess: InitialGuess::Auto,
            safeguard_fraction: 0.01,
            width_cutoff: 1e-15,
            iteration_cap: IterationCap::Auto,
            normalize: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::Precondition(format!("mu must be positive, got {}", self.mu)));
        }
        if !(0.0..0.5).contains(&self.safeguard_fraction) {
            return Err(Error::Precondition(format!(
                "safeguard fraction must lie in [0, 0.5), got {}",
                self.safeguard_fraction
            )));
        }
        if !(self.width_cutoff > 0.0) {
            return Err(Error::Precondition(format!(
                "width cutoff must be positive, got {}",
                self.width_cutoff
            )));
        }
        if let InitialGuess::Explicit(m0) = self.initial_guess {
            if !m0.is_finite() {
                return Err(Error::Precondition("initial slope must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn iteration_cap_for(&self, n: usize) -> usize {
        match self.iteration_cap {
            IterationCap::Auto => default_iteration_cap(n),
            IterationCap::Fixed(cap) => cap,
        }
    }
}

pub fn default_iteration_cap(n: usize) -> usize {
    15 * n.max(1).ilog10() as usize + 300
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// An evaluated slope has `0 ∈ ∂J`.
    Converged,
    /// Stopped on a floating-point limit: the bracket collapsed, or an
    /// endpoint's subgradients are zero up to normalization rounding.
    WidthCutoff,
    IterationCap,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::WidthCutoff => "width_cutoff",
            Status::IterationCap => "iteration_cap",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `J` and `∂J` at one end of the bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryState {
    pub m: f64,
    pub eval: MarginalEvaluation,
}

impl BoundaryState {
    fn sign(&self) -> Sign {
        self.eval.subdiff.sign()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Expansion,
    Subdivision,
    Terminated,
}

/// One observable step. Slopes are in original data coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationEvent {
    pub phase: Phase,
    pub a: f64,
    pub b: f64,
    /// Number of steps taken before this one.
    pub k: usize,
    /// The projected intersection evaluated by a subdivision step.
    pub candidate: Option<f64>,
    /// Set on the terminal event.
    pub status: Option<Status>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Solution in original coordinates.
    pub line: Line,
    /// `Σ |m·x_i + t − y_i|` on the original data.
    pub objective: f64,
    pub expansion_steps: usize,
    pub subdivision_steps: usize,
    pub status: Status,
    /// `∂J` at the returned slope, in the coordinates the solver worked in.
    pub subdiff: SubdifferentialInterval,
}

impl FitResult {
    pub fn total_steps(&self) -> usize {
        self.expansion_steps + self.subdivision_steps
    }
}

/// Starting slope for `dataset` (in the coordinates of `dataset`).
///
/// Falls back to 0 when neither heuristic yields a finite slope.
pub fn initial_guess(dataset: &Dataset) -> f64 {
    let pts = dataset.points();
    let n = pts.len();
    if n <= 100 {
        let (first, last) = (pts[0], pts[n - 1]);
        if first.x != last.x {
            let m = (last.y - first.y) / (last.x - first.x);
            if m.is_finite() {
                return m;
            }
        }
    }
    least_squares_slope(dataset).unwrap_or(0.0)
}

/// Abscissa where the supports `f_a + g_a·(ξ − a)` and `f_b + g_b·(ξ − b)`
/// meet, computed relative to the bracket midpoint.
///
/// Requires `a < b` and `g_a < 0 < g_b`; the result then lies in `(a, b)`
/// in exact arithmetic.
pub fn intersect_supports(a: f64, f_a: f64, g_a: f64, b: f64, f_b: f64, g_b: f64) -> Result<f64> {
    intersect_supports_split(a, (f_a, 0.0), g_a, b, (f_b, 0.0), g_b)
}

/// [`intersect_supports`] with function values given as `(hi, lo)` pairs.
///
/// Near the minimizer `f_b − f_a` is tiny next to `f_a` itself, so the
/// low-order parts decide where the supports cross.
fn intersect_supports_split(a: f64, f_a: (f64, f64), g_a: f64, b: f64, f_b: (f64, f64), g_b: f64) -> Result<f64> {
    if !(a < b) || !(g_a < 0.0 && 0.0 < g_b) {
        return Err(Error::Precondition(format!(
            "intersect_supports needs a < b and g_a < 0 < g_b (a={a}, b={b}, g_a={g_a}, g_b={g_b})"
        )));
    }
    let mid = 0.5 * (a + b);
    let (a_s, b_s) = (a - mid, b - mid);
    let (pa, ea) = two_product(g_a, a_s);
    let (pb, eb) = two_product(g_b, b_s);
    let mut numerator = CompensatedAccumulator::new();
    for v in [f_b.0, -f_a.0, f_b.1, -f_a.1, pa, ea, -pb, -eb] {
        numerator += v;
    }
    Ok(mid + numerator.value() / (g_a - g_b))
}

/// Pull-based solver state. Each call to `next` performs one step.
#[derive(Debug, Clone)]
pub struct PalbIterator<'a> {
    original: &'a Dataset,
    transform: AffineNormalization,
    ctx: MarginalContext,
    config: SolverConfig,
    cap: usize,
    /// `μ·h`: initial half-width and unit of the expansion schedule.
    unit: f64,
    /// Subgradients this close to 0 are rounding noise from normalization.
    flat_tol: f64,
    a: Option<BoundaryState>,
    b: Option<BoundaryState>,
    expansions: usize,
    subdivisions: usize,
    subdividing: bool,
    outcome: Option<(Line, Status, SubdifferentialInterval)>,
    emitted_terminal: bool,
}

impl<'a> PalbIterator<'a> {
    pub fn new(dataset: &'a Dataset, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let (working, transform) = if config.normalize {
            normalize(dataset)
        } else {
            (dataset.clone(), AffineNormalization::IDENTITY)
        };
        let mut ctx = MarginalContext::new(&working);
        let cap = config.iteration_cap_for(dataset.len());
        // each normalized x_i is off by at most about ε·|x_i|, and every
        // subgradient is a signed sum of them
        let flat_tol = if config.normalize {
            4.0 * f64::EPSILON * working.iter().map(|p| p.x.abs()).kbn_sum()
        } else {
            0.0
        };
        let mut unit = 0.0;
        let mut bracket = None;
        let mut outcome = None;

        if dataset.len() == 1 || dataset.has_degenerate_abscissae() {
            let t = upper_median(dataset.iter().map(|p| p.y));
            let subdiff = ctx.evaluate(0.0)?.subdiff;
            outcome = Some((Line::new(0.0, t), Status::Converged, subdiff));
        } else {
            let m0 = match config.initial_guess {
                InitialGuess::Auto => initial_guess(&working),
                InitialGuess::Explicit(m) => m * transform.sigma_x / transform.sigma_y,
            };
            unit = config.mu * m0.abs().max(1.0);
            let a = ctx.evaluate(m0 - unit)?;
            let b = ctx.evaluate(m0 + unit)?;
            bracket = Some((
                BoundaryState { m: a.m, eval: a },
                BoundaryState { m: b.m, eval: b },
            ));
        }

        Ok(Self {
            original: dataset,
            transform,
            ctx,
            config,
            cap,
            unit,
            flat_tol,
            a: bracket.map(|p| p.0),
            b: bracket.map(|p| p.1),
            expansions: 0,
            subdivisions: 0,
            subdividing: false,
            outcome,
            emitted_terminal: false,
        })
    }

    pub fn expansion_steps(&self) -> usize {
        self.expansions
    }

    pub fn subdivision_steps(&self) -> usize {
        self.subdivisions
    }

    /// Current bracket in the solver's working coordinates.
    pub fn bracket(&self) -> Option<(BoundaryState, BoundaryState)> {
        self.a.zip(self.b)
    }

    pub fn transform(&self) -> &AffineNormalization {
        &self.transform
    }

    pub fn is_finished(&self) -> bool {
        self.outcome.is_some()
    }

    /// Drains the iterator and assembles the result.
    pub fn finish(mut self) -> FitResult {
        for _ in self.by_ref() {}
        let (line, status, subdiff) = self.outcome.expect("drained iterator has an outcome");
        FitResult {
            line,
            objective: self.original.objective(line),
            expansion_steps: self.expansions,
            subdivision_steps: self.subdivisions,
            status,
            subdiff,
        }
    }

    fn to_original_slope(&self, m: f64) -> f64 {
        m * self.transform.sigma_y / self.transform.sigma_x
    }

    fn event(&self, phase: Phase, candidate: Option<f64>, status: Option<Status>) -> IterationEvent {
        let (a, b) = match (self.a, self.b) {
            (Some(a), Some(b)) => (a.m, b.m),
            _ => {
                let m = self.outcome.map(|o| o.0.m).unwrap_or(0.0);
                return IterationEvent {
                    phase,
                    a: m,
                    b: m,
                    k: self.expansions + self.subdivisions,
                    candidate: None,
                    status,
                };
            }
        };
        IterationEvent {
            phase,
            a: self.to_original_slope(a),
            b: self.to_original_slope(b),
            k: self.expansions + self.subdivisions - usize::from(phase != Phase::Terminated),
            candidate: candidate.map(|c| self.to_original_slope(c)),
            status,
        }
    }

    fn conclude(&mut self, eval: MarginalEvaluation, status: Status) {
        let working = Line::new(eval.m, eval.upper_median);
        let line = self.transform.denormalize_line(working);
        self.outcome = Some((line, status, eval.subdiff));
    }

    fn conclude_with_best(&mut self, status: Status) {
        let (a, b) = self.bracket().expect("bracket present");
        let best = if b.eval.value < a.eval.value { b } else { a };
        self.conclude(best.eval, status);
    }

    fn terminal_event(&mut self) -> IterationEvent {
        self.emitted_terminal = true;
        let status = self.outcome.map(|o| o.1);
        self.event(Phase::Terminated, None, status)
    }

    fn subdivide(&mut self, a: BoundaryState, b: BoundaryState) -> Result<IterationEvent> {
        let xi = intersect_supports_split(
            a.m,
            (a.eval.value, a.eval.value_lo),
            a.eval.subdiff.hi,
            b.m,
            (b.eval.value, b.eval.value_lo),
            b.eval.subdiff.lo,
        )?;
        let eps = self.config.safeguard_fraction * (b.m - a.m);
        let (lo, hi) = (a.m + eps, b.m - eps);
        if !(lo <= hi) {
            self.conclude_with_best(Status::WidthCutoff);
            return Ok(self.terminal_event());
        }
        let xi = if xi.is_finite() { xi.clamp(lo, hi) } else { 0.5 * (a.m + b.m) };
        if !(a.m < xi && xi < b.m) {
            // the bracket has no representable interior point left
            self.conclude_with_best(Status::WidthCutoff);
            return Ok(self.terminal_event());
        }

        let eval = self.ctx.evaluate(xi)?;
        self.subdivisions += 1;
        let state = BoundaryState { m: xi, eval };
        match eval.subdiff.sign() {
            Sign::Zero => self.conclude(eval, Status::Converged),
            Sign::Negative => self.a = Some(state),
            Sign::Positive => self.b = Some(state),
        }
        Ok(self.event(Phase::Subdivision, Some(xi), None))
    }

    fn expand(&mut self, a: BoundaryState, b: BoundaryState, direction: Sign) -> Result<IterationEvent> {
        let delta = 2f64.powi(self.expansions as i32 + 1) * self.unit;
        let target = match direction {
            Sign::Positive => b.m + delta,
            _ => a.m - delta,
        };
        if !target.is_finite() {
            self.conclude_with_best(Status::IterationCap);
            return Ok(self.terminal_event());
        }
        let eval = self.ctx.evaluate(target)?;
        self.expansions += 1;
        let state = BoundaryState { m: target, eval };
        if direction == Sign::Positive {
            self.a = Some(b);
            self.b = Some(state);
        } else {
            self.a = Some(state);
            self.b = Some(a);
        }
        Ok(self.event(Phase::Expansion, None, None))
    }

    fn step(&mut self) -> Result<Option<IterationEvent>> {
        if self.outcome.is_some() {
            return Ok((!self.emitted_terminal).then(|| self.terminal_event()));
        }
        let (a, b) = self.bracket().expect("bracket present while running");

        if a.eval.subdiff.contains_zero() {
            self.conclude(a.eval, Status::Converged);
            return Ok(Some(self.terminal_event()));
        }
        if b.eval.subdiff.contains_zero() {
            self.conclude(b.eval, Status::Converged);
            return Ok(Some(self.terminal_event()));
        }
        let flat = |e: &MarginalEvaluation| e.subdiff.lo - self.flat_tol <= 0.0 && 0.0 <= e.subdiff.hi + self.flat_tol;
        match (flat(&a.eval), flat(&b.eval)) {
            (true, true) => {
                self.conclude_with_best(Status::WidthCutoff);
                return Ok(Some(self.terminal_event()));
            }
            (true, false) | (false, true) => {
                let e = if flat(&a.eval) { a.eval } else { b.eval };
                self.conclude(e, Status::WidthCutoff);
                return Ok(Some(self.terminal_event()));
            }
            (false, false) => {}
        }
        if self.expansions + self.subdivisions >= self.cap {
            self.conclude_with_best(Status::IterationCap);
            return Ok(Some(self.terminal_event()));
        }
        if self.subdividing && (b.m - a.m).abs() < self.config.width_cutoff {
            self.conclude_with_best(Status::WidthCutoff);
            return Ok(Some(self.terminal_event()));
        }

        match (a.sign(), b.sign()) {
            (Sign::Negative, Sign::Positive) => {
                self.subdividing = true;
                self.subdivide(a, b).map(Some)
            }
            (Sign::Positive, Sign::Positive) => self.expand(a, b, Sign::Negative).map(Some),
            (Sign::Negative, Sign::Negative) => self.expand(a, b, Sign::Positive).map(Some),
            _ => {
                // ∂J(a) > 0 > ∂J(b) with a < b contradicts monotonicity;
                // only rounding in the subgradient sums can produce it
                self.conclude_with_best(Status::WidthCutoff);
                Ok(Some(self.terminal_event()))
            }
        }
    }
}

impl Iterator for PalbIterator<'_> {
    type Item = IterationEvent;

    fn next(&mut self) -> Option<IterationEvent> {
        // evaluation errors are impossible for a validated, non-empty dataset
        self.step().expect("marginal evaluation on a non-empty dataset")
    }
}

/// Fits the least-absolute-deviations line to `dataset`.
pub fn fit(dataset: &Dataset, config: &SolverConfig) -> Result<FitResult> {
    Ok(PalbIterator::new(dataset, *config)?.finish())
}

/// Fits with the default configuration.
pub fn fit_default(dataset: &Dataset) -> FitResult {
    fit(dataset, &SolverConfig::default()).expect("default configuration is valid")
}

fn upper_median(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    let k = v.len() / 2;
    *v.select_nth_unstable_by(k, f64::total_cmp).1
}
