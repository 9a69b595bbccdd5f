use thiserror::Error;

/// Errors produced by polynomial construction, norm computation and the
/// bound pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A family constructor was given the wrong number of parameters.
    #[error("family {family} takes {expected} parameter(s), got {got}")]
    Arity {
        family: &'static str,
        expected: usize,
        got: usize,
    },

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A power would exceed the configured degree cap.
    #[error("degree {degree} exceeds the powering cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    /// An intermediate coefficient left the finite floating range while
    /// raising the polynomial to the k-th power.
    #[error("coefficient overflow while accumulating power k={k}")]
    Overflow { k: u32 },

    /// A local refinement failed to reach the requested tolerance.
    /// Carries the best value seen so the caller can still inspect it.
    #[error("refinement did not converge within {iters} iterations (best value {best})")]
    NonConvergence { iters: usize, best: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
