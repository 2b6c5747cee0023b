//! Reference solvers used to check and benchmark the main solver.

mod irls;
mod oracle;

pub use irls::{irls_fit, IrlsConfig, IrlsResult, IrlsStatus};
pub use oracle::{oracle_fit, oracle_solution_slopes, OracleResult};
