use thiserror::Error;

/// Errors produced by the solver toolkit.
///
/// `Config` covers invalid inputs (bad grid sizes, mismatched grids,
/// degenerate densities); `Numerical` covers runtime failures of the
/// numerical schemes themselves (loss of the M-matrix structure in the
/// implicit step). Non-convergence of the fixed-point iteration is *not*
/// an error; it is reported through `SolveReport::converged`.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
