use thiserror::Error;

use crate::planner::FeasiblePlan;

/// Errors raised by the library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition of the operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The complete elliptic integral diverges at k = 1.
    #[error("complete elliptic integral diverges at k = 1")]
    Divergence,

    /// The numerical integrator lost the Hamiltonian level.
    #[error("integration failure at t = {t}: |H - 1| = {drift:e}")]
    IntegrationFailure { t: f64, drift: f64 },

    /// A trajectory needed more segments than the guard allows.
    #[error("segment guard exceeded: more than {0} segments")]
    SegmentGuard(usize),

    /// The shooting solver met the tolerance nowhere.
    #[error("shooting did not converge (best residual {best_residual:e})")]
    NoConvergence {
        best_residual: f64,
        fallback: Option<FeasiblePlan>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
