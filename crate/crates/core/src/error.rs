use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at x = {0}")]
    PoleAtNonpositiveInteger(f64),

    #[error("argument {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    #[error("invalid hypergeometric parameters: c = {0} is zero or a negative integer")]
    InvalidHypergeomParams(f64),

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dual norm optimizer stalled: best two starts differ by {spread:e}")]
    OptimizerStall { spread: f64 },

    #[error("gradient too small (|grad| = {0:e}); the norm is not differentiable at the origin")]
    GradientTooSmall(f64),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("degenerate cone: |A| = {0:e}")]
    DegenerateCone(f64),

    #[error("evaluation at the origin, where the extremal is singular")]
    OriginSingularity,

    #[error("quadrature not converged: refinement change {change:e} exceeds 10x target {target:e}")]
    QuadratureNotConverged { change: f64, target: f64 },

    #[error("zero boundary trace: boundary integral {0:e}")]
    ZeroBoundaryTrace(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
