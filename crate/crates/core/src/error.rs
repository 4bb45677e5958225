use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("probability at index {index} is {value}; must lie in [0, 1]")]
    ProbOutOfRange { index: usize, value: f64 },
    #[error("lambda must be nonnegative, got {0}")]
    NegativeLambda(f64),
    #[error("lambda must be positive, got {0}")]
    NonpositiveLambda(f64),
    #[error("{context} requires theta < 1, got theta = {theta}")]
    ThetaNotBelowOne { context: &'static str, theta: f64 },
    #[error("tail bound requires lambda >= (2 + eps) * h; got lambda = {lambda}, (2 + eps) * h = {threshold}")]
    TailBoundHypothesis { lambda: f64, threshold: f64 },
    #[error("{0} trials exceed the supported maximum of 10000")]
    TooManyTrials(usize),
    #[error("expansion order {0} exceeds the maximum of 200")]
    OrderTooLarge(usize),
    #[error("coefficient extraction is ill-conditioned (condition estimate {0:.3e} exceeds 1e12); reduce the order or lambda")]
    IllConditioned(f64),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("kl divergence undefined: q vanishes at m = {m} where p = {p:e}")]
    AbsoluteContinuity { m: usize, p: f64 },
    #[error("chi2 weight vanishes at m = {0} inside the summation support")]
    ZeroWeight(usize),
    #[error("unsupported bound {kind} for family {family}; supported kinds: {supported}")]
    UnsupportedBound {
        family: String,
        kind: String,
        supported: String,
    },
    #[error("unknown citation id {id:?}; known ids: {known}")]
    UnknownCitation { id: String, known: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
