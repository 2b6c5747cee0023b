//! Datasets, lines and the affine normalization used before solving.

use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kbn::{CompensatedAccumulator, KbnSumExt};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub x: f64,
    pub y: f64,
}

impl DataPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for DataPoint {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// A non-empty collection of finite samples.
///
/// No ordering or distinctness of the x-values is assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<DataPoint>,
}

impl Dataset {
    pub fn new(points: Vec<DataPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { points })
    }

    pub fn from_xy(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                x: x.len(),
                y: y.len(),
            });
        }
        Self::new(x.iter().zip(y).map(|(&x, &y)| DataPoint { x, y }).collect())
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().copied().map(DataPoint::from).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always `false`; present for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DataPoint> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<DataPoint> {
        self.points
    }

    /// True when every sample shares the same x-value.
    pub fn has_degenerate_abscissae(&self) -> bool {
        let x0 = self.points[0].x;
        self.points.iter().all(|p| p.x == x0)
    }

    /// Content hash over the exact bit patterns of all coordinates.
    pub fn content_hash(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.points.len().hash(&mut h);
        for p in &self.points {
            p.x.to_bits().hash(&mut h);
            p.y.to_bits().hash(&mut h);
        }
        h.finish()
    }

    /// LAD objective `Σ |m·x_i + t − y_i|` of `line`, compensated.
    pub fn objective(&self, line: Line) -> f64 {
        self.points
            .iter()
            .map(|p| (line.eval(p.x) - p.y).abs())
            .kbn_sum()
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a DataPoint;
    type IntoIter = std::slice::Iter<'a, DataPoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// The line `y = m·x + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub m: f64,
    pub t: f64,
}

impl Line {
    pub const fn new(m: f64, t: f64) -> Self {
        Self { m, t }
    }

    /// The line through two points with distinct x.
    pub fn through(p: DataPoint, q: DataPoint) -> Option<Self> {
        if p.x == q.x {
            return None;
        }
        let m = (q.y - p.y) / (q.x - p.x);
        Some(Self { m, t: p.y - m * p.x })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.m * x + self.t
    }
}

/// Affine map relating original coordinates to normalized ones:
/// `x = sigma_x·x' + tau_x`, `y = sigma_y·y' + tau_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineNormalization {
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub tau_x: f64,
    pub tau_y: f64,
}

impl AffineNormalization {
    pub const IDENTITY: Self = Self {
        sigma_x: 1.0,
        sigma_y: 1.0,
        tau_x: 0.0,
        tau_y: 0.0,
    };

    /// Maps a normalized point back to original coordinates.
    pub fn denormalize_point(&self, p: DataPoint) -> DataPoint {
        DataPoint {
            x: self.sigma_x * p.x + self.tau_x,
            y: self.sigma_y * p.y + self.tau_y,
        }
    }

    pub fn normalize_point(&self, p: DataPoint) -> DataPoint {
        DataPoint {
            x: (p.x - self.tau_x) / self.sigma_x,
            y: (p.y - self.tau_y) / self.sigma_y,
        }
    }

    /// Maps a line fitted in normalized coordinates back to the original ones.
    pub fn denormalize_line(&self, line: Line) -> Line {
        let m = line.m * self.sigma_y / self.sigma_x;
        let t = line.t * self.sigma_y - m * self.tau_x + self.tau_y;
        Line { m, t }
    }

    /// Inverse of [`denormalize_line`](Self::denormalize_line).
    pub fn normalize_line(&self, line: Line) -> Line {
        Line {
            m: line.m * self.sigma_x / self.sigma_y,
            t: (line.t + line.m * self.tau_x - self.tau_y) / self.sigma_y,
        }
    }
}

/// Translates the centroid to the origin and scales each axis by its
/// maximum absolute deviation, so every point lands in `[-1, 1]²`.
///
/// An axis with zero extent keeps scale 1.
pub fn normalize(dataset: &Dataset) -> (Dataset, AffineNormalization) {
    let n = dataset.len() as f64;
    let tau_x = dataset.iter().map(|p| p.x).kbn_sum() / n;
    let tau_y = dataset.iter().map(|p| p.y).kbn_sum() / n;

    let extent = |f: fn(&DataPoint) -> f64, c: f64| {
        let s = dataset
            .iter()
            .map(|p| (f(p) - c).abs())
            .fold(0.0_f64, f64::max);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    };
    let transform = AffineNormalization {
        sigma_x: extent(|p| p.x, tau_x),
        sigma_y: extent(|p| p.y, tau_y),
        tau_x,
        tau_y,
    };

    let points = dataset
        .iter()
        .map(|&p| transform.normalize_point(p))
        .collect();
    (Dataset { points }, transform)
}

/// Free-function form of [`AffineNormalization::denormalize_line`].
pub fn denormalize_line(line: Line, transform: &AffineNormalization) -> Line {
    transform.denormalize_line(line)
}

/// Compensated least-squares slope, or `None` when all x coincide.
pub fn least_squares_slope(dataset: &Dataset) -> Option<f64> {
    let mut sx = CompensatedAccumulator::new();
    let mut sy = CompensatedAccumulator::new();
    let mut sxy = CompensatedAccumulator::new();
    let mut sxx = CompensatedAccumulator::new();
    for p in dataset {
        sx += p.x;
        sy += p.y;
        sxy += p.x * p.y;
        sxx += p.x * p.x;
    }
    let n = dataset.len() as f64;
    let (sx, sy) = (sx.value(), sy.value());
    let numerator = n * sxy.value() - sx * sy;
    let denominator = n * sxx.value() - sx * sx;
    if denominator == 0.0 || dataset.has_degenerate_abscissae() {
        return None;
    }
    let slope = numerator / denominator;
    slope.is_finite().then_some(slope)
}
