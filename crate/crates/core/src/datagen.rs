//! Seeded synthetic problem generators.
//!
//! # Random stream
//!
//! Every instance draws from a ChaCha8 stream (`rand_chacha::ChaCha8Rng`)
//! keyed by `seed_from_u64(spec.seed)` (rand_core's PCG32 key expansion) with
//! the stream id set to the family number (linear 1, poly5 2, outliers 3).
//! Uniform variates come from `rand::distr::Open01`, so they lie strictly
//! inside `(0, 1)`. Draw order is fixed:
//!
//! * linear / outliers: `g(0)`, `g(1)`, then per sample `x`, then the noise
//!   variates;
//! * poly5: the six Bernstein coefficients, then per sample `x` and noise.
//!
//! Per-sample noise uses two variates `(u1, u2)`. For linear and poly5 the
//! noise is `Laplace(u1; b) + w·(2·u2 − 1)`. For outliers `u1 < 1 − p`
//! selects `Laplace(u2; b)`, otherwise `Cauchy(u2; γ)`.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DataPoint, Dataset, Line};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Linear,
    Poly5,
    Outliers,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Poly5 => "poly5",
            Family::Outliers => "outliers",
        }
    }

    fn stream(&self) -> u64 {
        match self {
            Family::Linear => 1,
            Family::Poly5 => 2,
            Family::Outliers => 3,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Family::Linear),
            "poly5" => Ok(Family::Poly5),
            "outliers" => Ok(Family::Outliers),
            other => Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub laplace_scale: f64,
    pub uniform_halfwidth: f64,
    pub cauchy_scale: f64,
    pub outlier_prob: f64,
}

impl NoiseParams {
    pub fn default_for(family: Family) -> Self {
        match family {
            Family::Linear | Family::Poly5 => Self {
                laplace_scale: 0.1,
                uniform_halfwidth: 0.05,
                cauchy_scale: 0.0,
                outlier_prob: 0.0,
            },
            Family::Outliers => Self {
                laplace_scale: 0.01,
                uniform_halfwidth: 0.0,
                cauchy_scale: 0.5,
                outlier_prob: 0.05,
            },
        }
    }

    /// All noise switched off.
    pub fn noiseless() -> Self {
        Self {
            laplace_scale: 0.0,
            uniform_halfwidth: 0.0,
            cauchy_scale: 0.0,
            outlier_prob: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub params: NoiseParams,
}

impl ExperimentSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            seed,
            params: NoiseParams::default_for(family),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        let scales = [p.laplace_scale, p.uniform_halfwidth, p.cauchy_scale];
        if scales.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidSpec("noise scales must be finite and non-negative".into()));
        }
        if !(0.0..=1.0).contains(&p.outlier_prob) {
            return Err(Error::InvalidSpec("outlier probability must lie in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.family.stream());
        rng
    }
}

/// Degree-5 polynomial in the Bernstein basis on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bernstein5 {
    pub coeffs: [f64; 6],
}

impl Bernstein5 {
    /// de Casteljau evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let mut b = self.coeffs;
        for level in (1..6).rev() {
            for i in 0..level {
                b[i] = (1.0 - x) * b[i] + x * b[i + 1];
            }
        }
        b[0]
    }
}

/// A generated dataset with its ground truth and the injected noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<G> {
    pub dataset: Dataset,
    pub truth: G,
    pub noise: Vec<f64>,
    pub outlier: Vec<bool>,
}

/// `b·sign(u − ½)·ln(1 − 2|u − ½|)`, written so that `u < ½` gives the
/// negative tail. `u` must lie in `(0, 1)`.
pub fn laplace_from_uniform(u: f64, scale: f64) -> f64 {
    let c = u - 0.5;
    -scale * c.signum() * (1.0 - 2.0 * c.abs()).ln()
}

/// `γ·tan(π(u − ½))`.
pub fn cauchy_from_uniform(u: f64, scale: f64) -> f64 {
    scale * (std::f64::consts::PI * (u - 0.5)).tan()
}

pub fn laplace_cdf(x: f64, scale: f64) -> f64 {
    if x < 0.0 {
        0.5 * (x / scale).exp()
    } else {
        1.0 - 0.5 * (-x / scale).exp()
    }
}

pub fn cauchy_cdf(x: f64, scale: f64) -> f64 {
    0.5 + (x / scale).atan() / std::f64::consts::PI
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(Open01)
}

fn mixed_noise(rng: &mut ChaCha8Rng, p: &NoiseParams) -> f64 {
    let (u1, u2) = (uniform(rng), uniform(rng));
    laplace_from_uniform(u1, p.laplace_scale) + p.uniform_halfwidth * (2.0 * u2 - 1.0)
}

fn random_line(rng: &mut ChaCha8Rng) -> Line {
    let g0 = uniform(rng);
    let g1 = uniform(rng);
    Line::new(g1 - g0, g0)
}

fn sample<G>(
    spec: &ExperimentSpec,
    rng: &mut ChaCha8Rng,
    truth: G,
    ground: impl Fn(&G, f64) -> f64,
    mut noise: impl FnMut(&mut ChaCha8Rng) -> (f64, bool),
) -> Result<Instance<G>> {
    let mut points = Vec::with_capacity(spec.n);
    let mut noises = Vec::with_capacity(spec.n);
    let mut outlier = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let x = uniform(rng);
        let (e, is_outlier) = noise(rng);
        points.push(DataPoint::new(x, ground(&truth, x) + e));
        noises.push(e);
        outlier.push(is_outlier);
    }
    Ok(Instance {
        dataset: Dataset::new(points)?,
        truth,
        noise: noises,
        outlier,
    })
}

/// Random line with `g(0), g(1) ~ U(0,1)`, `x ~ U(0,1)`, Laplace plus uniform noise.
pub fn generate_linear(spec: &ExperimentSpec) -> Result<Instance<Line>> {
    spec.validate()?;
    let mut rng = spec.rng();
    let truth = random_line(&mut rng);
    let p = spec.params;
    sample(spec, &mut rng, truth, |g, x| g.eval(x), |r| (mixed_noise(r, &p), false))
}

/// Random degree-5 Bernstein polynomial with `U(0,1)` coefficients, same noise as linear.
pub fn generate_poly5(spec: &ExperimentSpec) -> Result<Instance<Bernstein5>> {
    spec.validate()?;
    let mut rng = spec.rng();
    let mut coeffs = [0.0; 6];
    for c in &mut coeffs {
        *c = uniform(&mut rng);
    }
    generate_poly5_with(spec, Bernstein5 { coeffs }, &mut rng)
}

/// Samples a given polynomial with the noise parameters of `spec`.
pub fn generate_poly5_from(spec: &ExperimentSpec, poly: Bernstein5) -> Result<Instance<Bernstein5>> {
    spec.validate()?;
    let mut rng = spec.rng();
    generate_poly5_with(spec, poly, &mut rng)
}

fn generate_poly5_with(
    spec: &ExperimentSpec,
    poly: Bernstein5,
    rng: &mut ChaCha8Rng,
) -> Result<Instance<Bernstein5>> {
    let p = spec.params;
    sample(spec, rng, poly, |g, x| g.eval(x), |r| (mixed_noise(r, &p), false))
}

/// Random line with Laplace/Cauchy mixture noise; a fraction `p` are outliers.
pub fn generate_outliers(spec: &ExperimentSpec) -> Result<Instance<Line>> {
    spec.validate()?;
    let mut rng = spec.rng();
    let truth = random_line(&mut rng);
    let p = spec.params;
    sample(
        spec,
        &mut rng,
        truth,
        |g, x| g.eval(x),
        |r| {
            let (u1, u2) = (uniform(r), uniform(r));
            if u1 < 1.0 - p.outlier_prob {
                (laplace_from_uniform(u2, p.laplace_scale), false)
            } else {
                (cauchy_from_uniform(u2, p.cauchy_scale), true)
            }
        },
    )
}

/// Dataset for any family.
pub fn generate(spec: &ExperimentSpec) -> Result<Dataset> {
    Ok(match spec.family {
        Family::Linear => generate_linear(spec)?.dataset,
        Family::Poly5 => generate_poly5(spec)?.dataset,
        Family::Outliers => generate_outliers(spec)?.dataset,
    })
}
