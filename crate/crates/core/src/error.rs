use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series has zero constant term; factor out the power of x first")]
    ZeroConstantTerm,
    #[error("every stored coefficient of the series is zero")]
    AllZeroSeries,
    #[error("series truncated at order {available}, but order {needed} is required")]
    TruncationTooShort { needed: usize, available: usize },
    #[error("dilation factor must be nonzero")]
    ZeroDilation,
    #[error("operator is not in general form (p, alpha, beta)")]
    NotGeneralForm,
    #[error("input polynomial must be monic of degree at least 1")]
    NonMonicInput,
    #[error("root finder did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence { iterations: usize, worst_residual: f64 },
    #[error("polynomial has degree zero; there are no roots to find")]
    DegreeZero,
    #[error("operator is a pure exponential c*exp(gamma*x) up to the stored truncation; zero counts never change")]
    PureExponential,
    #[error("no degree witness for m = {m} up to degree {d_cap}")]
    WitnessNotFound { m: usize, d_cap: usize },
    #[error("phi(D)^{m} x^{degree} has no nonreal zero")]
    NoNonrealZero { m: usize, degree: usize },
    #[error("persistence not reached at stage {stage} after {max_halvings} halvings of gamma")]
    GammaSearchExhausted { stage: usize, max_halvings: usize },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}
