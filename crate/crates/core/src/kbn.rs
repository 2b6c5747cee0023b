//! Kahan-Babuška-Neumaier compensated summation.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

/// Running sum with a Neumaier compensation term.
///
/// Unlike plain Kahan summation this also stays exact when an addend is
/// larger in magnitude than the running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedAccumulator {
    sum: f64,
    compensation: f64,
}

impl CompensatedAccumulator {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            compensation: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// The sum as an unevaluated pair `hi + lo` with `hi = value()`.
    pub fn value_pair(&self) -> (f64, f64) {
        two_sum(self.sum, self.compensation)
    }
}

/// `(s, e)` with `s = fl(a + b)` and `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `(p, e)` with `p = fl(a·b)` and `a·b = p + e` exactly, barring
/// overflow or underflow. Dekker's splitting, so no FMA is required.
#[inline]
pub fn two_product(a: f64, b: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let split = |v: f64| {
        let c = SPLITTER * v;
        let hi = c - (c - v);
        (hi, v - hi)
    };
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl AddAssign<f64> for CompensatedAccumulator {
    #[inline]
    fn add_assign(&mut self, rhs: f64) {
        CompensatedAccumulator::add(self, rhs);
    }
}

impl Add<f64> for CompensatedAccumulator {
    type Output = Self;

    fn add(mut self, rhs: f64) -> Self {
        self += rhs;
        self
    }
}

impl Sum<f64> for CompensatedAccumulator {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedAccumulator::new();
        for v in iter {
            acc += v;
        }
        acc
    }
}

impl From<CompensatedAccumulator> for f64 {
    fn from(acc: CompensatedAccumulator) -> f64 {
        acc.value()
    }
}

/// Extension for summing an iterator of `f64` with compensation.
pub trait KbnSumExt: Iterator<Item = f64> + Sized {
    fn kbn_sum(self) -> f64 {
        self.sum::<CompensatedAccumulator>().value()
    }
}

impl<I: Iterator<Item = f64>> KbnSumExt for I {}
