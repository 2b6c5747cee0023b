//! Exact least-absolute-deviations line fitting.
//!
//! [`fit`] finds a line `y = m·x + t` minimizing `Σ |m·x_i + t − y_i|` by
//! bracketing the slope and subdividing the bracket with supporting lines
//! of the marginal objective `J(m) = min_t Σ |m·x_i + t − y_i|`. Each
//! evaluation of `J` and its subdifferential costs expected linear time.
//!
//! ```
//! use palb::{fit, Dataset, SolverConfig, Status};
//!
//! let data = Dataset::from_pairs(&[(0.0, 0.0), (1.0, 2.0), (2.0, 1.0), (3.0, 3.0), (4.0, 10.0)])?;
//! let r = fit(&data, &SolverConfig::default())?;
//! assert_eq!(r.status, Status::Converged);
//! assert!((r.objective - 8.0).abs() < 1e-9);
//! # Ok::<(), palb::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod bench;
pub mod csvio;
pub mod datagen;
mod error;
pub mod kbn;
pub mod knapsack;
pub mod marginal;
pub mod model;
pub mod selection;
pub mod solver;
pub mod station;

#[cfg(doctest)]
mod book;

pub use error::{Error, Result};
pub use marginal::{evaluate, MarginalContext, MarginalEvaluation, Sign, SubdifferentialInterval};
pub use model::{normalize, AffineNormalization, DataPoint, Dataset, Line};
pub use solver::{
    fit, fit_default, FitResult, InitialGuess, IterationCap, IterationEvent, PalbIterator, Phase,
    SolverConfig, Status,
};
