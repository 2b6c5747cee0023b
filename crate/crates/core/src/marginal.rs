//! The marginal objective `J(m) = min_t Σ |m·x_i + t − y_i|`.
//!
//! For fixed `m` the inner minimum is attained on the median interval
//! `[t̲, t̄]` of the dual-line values `y_i − m·x_i`. The subdifferential of
//! `J` is the hull of two intervals `E_m(t̄)` and `E_m(t̲)`, each obtained
//! from a three-way partition of the dual values against the median and a
//! small knapsack over the points lying exactly on the median line.

use crate::error::{Error, Result};
use crate::kbn::{two_product, CompensatedAccumulator};
use crate::knapsack::alpha_range;
use crate::model::Dataset;
use crate::selection::{select_nth, three_way_partition, KeyedEntry};

/// Payload of the evaluation buffer: a sample and its original position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPoint {
    pub x: f64,
    pub y: f64,
    pub index: usize,
}

impl DualPoint {
    /// Value of the dual line `t_i(m) = y_i − m·x_i`.
    #[inline]
    pub fn at(&self, m: f64) -> f64 {
        self.y - m * self.x
    }
}

pub type DualEntry = KeyedEntry<DualPoint>;

/// Uniform sign of a subdifferential, or `Zero` when it contains 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubdifferentialInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SubdifferentialInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn sign(&self) -> Sign {
        if self.lo > 0.0 {
            Sign::Positive
        } else if self.hi < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// Sets `I+`, `I−`, `I0` relative to some `(m, t)`, as buffer regions.
///
/// `I+` (`m·x_i + t > y_i`) is the region of dual values below `t`, `I−`
/// the region above. `s = Σ_{I+} x_i − Σ_{I−} x_i`, `b = |I+| − |I−|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexPartition {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
    pub s: f64,
    pub b: i64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalEvaluation {
    pub m: f64,
    /// `J(m)`, evaluated at the upper median.
    pub value: f64,
    /// Low-order part: `value + value_lo` approximates `J(m)` to well
    /// beyond double precision.
    pub value_lo: f64,
    pub lower_median: f64,
    pub upper_median: f64,
    pub subdiff: SubdifferentialInterval,
    /// Original index of a sample whose dual line attains `upper_median`.
    pub median_line_index: usize,
}

/// Reusable evaluation buffer for one dataset.
///
/// Every evaluation rewrites the keys in place and permutes the buffer; no
/// other allocation happens after construction.
#[derive(Debug, Clone)]
pub struct MarginalContext {
    buffer: Vec<DualEntry>,
}

impl MarginalContext {
    pub fn new(dataset: &Dataset) -> Self {
        let buffer = dataset
            .iter()
            .enumerate()
            .map(|(index, p)| {
                KeyedEntry::new(
                    0.0,
                    DualPoint {
                        x: p.x,
                        y: p.y,
                        index,
                    },
                )
            })
            .collect();
        Self { buffer }
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    /// Writes `y_i − m·x_i` into every key.
    pub fn load_slope(&mut self, m: f64) {
        for e in &mut self.buffer {
            e.key = e.payload.at(m);
        }
    }

    pub fn buffer_mut(&mut self) -> &mut [DualEntry] {
        &mut self.buffer
    }

    pub fn evaluate(&mut self, m: f64) -> Result<MarginalEvaluation> {
        let n = self.buffer.len();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        self.load_slope(m);
        let upper_rank = n / 2;
        let lower_rank = (n - 1) / 2;

        let upper = *select_nth(&mut self.buffer, upper_rank)?;
        let t_upper = upper.key;
        let (e_upper, part) = support_interval(&mut self.buffer, t_upper)?;
        let (value, value_lo) = median_deviation(&self.buffer, &part, &upper.payload, m);

        // After the partition, the rank below the upper median is either
        // in the equal block or is the largest key of the block below it.
        let t_lower = if lower_rank == upper_rank || part.plus <= lower_rank {
            t_upper
        } else {
            self.buffer[..part.plus]
                .iter()
                .map(|e| e.key)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let subdiff = if t_lower == t_upper {
            e_upper
        } else {
            let (e_lower, _) = support_interval(&mut self.buffer, t_lower)?;
            e_upper.hull(&e_lower)
        };

        Ok(MarginalEvaluation {
            m,
            value,
            value_lo,
            lower_median: t_lower,
            upper_median: t_upper,
            subdiff,
            median_line_index: upper.payload.index,
        })
    }

    /// Upper median of the dual values at slope `m`.
    pub fn upper_median(&mut self, m: f64) -> Result<f64> {
        let n = self.buffer.len();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        self.load_slope(m);
        Ok(select_nth(&mut self.buffer, n / 2)?.key)
    }
}

/// `Σ |y_i − m·x_i − (y_p − m·x_p)|` for the median sample `p`, as a
/// `(hi, lo)` pair.
///
/// Every key is expanded exactly as `y_i − P_i − E_i` with `m·x_i = P_i + E_i`
/// and the signed terms go into one compensated sum, so the only rounding
/// is that of the accumulator. `buffer` must be partitioned against the
/// median key as `[below | equal | above]`.
fn median_deviation(buffer: &[DualEntry], part: &IndexPartition, median: &DualPoint, m: f64) -> (f64, f64) {
    let exact_key = |p: &DualPoint| {
        let (hi, lo) = two_product(m, p.x);
        [p.y, -hi, -lo]
    };
    let centre = exact_key(median);
    let mut acc = CompensatedAccumulator::new();
    let mut add_scaled = |terms: [f64; 3], sign: f64| {
        for v in terms {
            acc += sign * v;
        }
    };
    for e in &buffer[..part.plus] {
        add_scaled(exact_key(&e.payload), -1.0);
    }
    for e in &buffer[part.plus + part.zero..] {
        add_scaled(exact_key(&e.payload), 1.0);
    }
    // keys that round to the median may still differ from it slightly
    for e in &buffer[part.plus..part.plus + part.zero] {
        let key = exact_key(&e.payload);
        let mut d = CompensatedAccumulator::new();
        for (k, c) in key.iter().zip(&centre) {
            d += *k;
            d += -*c;
        }
        let sign = if d.value() < 0.0 { -1.0 } else { 1.0 };
        for (k, c) in key.iter().zip(&centre) {
            add_scaled([*k, -*c, 0.0], sign);
        }
    }
    let b = part.b as f64;
    for c in centre {
        let (hi, lo) = two_product(b, c);
        add_scaled([hi, lo, 0.0], 1.0);
    }
    acc.value_pair()
}

/// One-shot evaluation of `J(m)` and `∂J(m)`.
pub fn evaluate(dataset: &Dataset, m: f64) -> Result<MarginalEvaluation> {
    MarginalContext::new(dataset).evaluate(m)
}

/// The interval `E_m(t)` for the keys currently loaded in `buffer`.
///
/// Leaves `buffer` partitioned as `[I+ | I0 | I−]`.
pub fn support_interval(
    buffer: &mut [DualEntry],
    t: f64,
) -> Result<(SubdifferentialInterval, IndexPartition)> {
    let counts = three_way_partition(buffer, t);
    let mut s = CompensatedAccumulator::new();
    for e in &buffer[counts.below_range()] {
        s += e.payload.x;
    }
    for e in &buffer[counts.above_range()] {
        s += -e.payload.x;
    }
    let s = s.value();
    let b = counts.below as i64 - counts.above as i64;
    let (lo, hi) = alpha_range(&mut buffer[counts.equal_range()], b, |e| e.payload.x)?;
    let partition = IndexPartition {
        plus: counts.below,
        zero: counts.equal,
        minus: counts.above,
        s,
        b,
    };
    Ok((SubdifferentialInterval::new(s + lo, s + hi), partition))
}

/// `∂J(m)` as the hull of `E_m(upper)` and `E_m(lower)`.
pub fn subdifferential_at(
    buffer: &mut [DualEntry],
    upper: f64,
    lower: f64,
) -> Result<SubdifferentialInterval> {
    let (e_upper, _) = support_interval(buffer, upper)?;
    if lower == upper {
        return Ok(e_upper);
    }
    let (e_lower, _) = support_interval(buffer, lower)?;
    Ok(e_upper.hull(&e_lower))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(p: &[(f64, f64)]) -> Dataset {
        Dataset::from_pairs(p).unwrap()
    }

    #[test]
    fn perfect_fit() {
        let e = evaluate(&ds(&[(0.0, 0.0), (1.0, 1.0)]), 1.0).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!((e.lower_median, e.upper_median), (0.0, 0.0));
        assert!(e.subdiff.contains_zero());
    }

    #[test]
    fn three_points_flat_slope() {
        let e = evaluate(&ds(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]), 0.0).unwrap();
        assert_eq!((e.lower_median, e.upper_median), (0.0, 0.0));
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn collinear_kink() {
        // J(m) = 2|m|
        let d = ds(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let e = evaluate(&d, 0.0).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.subdiff, SubdifferentialInterval::new(-2.0, 2.0));
    }

    #[test]
    fn two_points_off_kink() {
        // J(m) = |1 − m|, so J'(0) = −1
        let e = evaluate(&ds(&[(0.0, 0.0), (1.0, 1.0)]), 0.0).unwrap();
        assert_eq!((e.lower_median, e.upper_median), (0.0, 1.0));
        assert_eq!(e.subdiff, SubdifferentialInterval::new(-1.0, -1.0));
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn far_slopes_have_uniform_sign() {
        let d = ds(&[(0.0, 1.0), (1.0, 3.0), (2.0, -1.0), (3.0, 2.0), (5.0, 0.5)]);
        assert_eq!(evaluate(&d, 1e3).unwrap().subdiff.sign(), Sign::Positive);
        assert_eq!(evaluate(&d, -1e3).unwrap().subdiff.sign(), Sign::Negative);
    }

    #[test]
    fn value_is_flat_across_median_interval() {
        let d = ds(&[(0.0, 0.0), (1.0, 3.0), (2.0, 1.0), (4.0, 7.0)]);
        let e = evaluate(&d, 0.5).unwrap();
        let at = |t: f64| d.iter().map(|p| (0.5 * p.x + t - p.y).abs()).sum::<f64>();
        for t in [e.lower_median, e.upper_median, 0.5 * (e.lower_median + e.upper_median)] {
            assert!((at(t) - e.value).abs() < 1e-12);
        }
    }

    #[test]
    fn context_reuse_matches_fresh_evaluation() {
        let d = ds(&[(0.0, 0.3), (1.0, 1.1), (2.0, 2.5), (3.0, 2.9), (4.0, 4.2), (5.0, 4.4)]);
        let mut ctx = MarginalContext::new(&d);
        for m in [0.1, 1.7, -2.0, 0.9] {
            assert_eq!(ctx.evaluate(m).unwrap(), evaluate(&d, m).unwrap());
        }
    }
}
