use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no binding")]
    UnboundVariable(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("multidegree sums to {got}, expected {expected}")]
    DegreeMismatch { expected: i64, got: i64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cocycle is not equivalent to a standard bundle: {0}")]
    NotEquivalent(String),
    #[error("malformed cocycle: {0}")]
    InvalidCocycle(String),
    #[error("the zero function has no order")]
    ZeroFunction,
    #[error("polynomial does not split over the rationals: {0}")]
    NonSplitPolynomial(String),
    #[error("invalid chart index {0}")]
    InvalidChart(usize),
    #[error("metric is identically zero")]
    ZeroMetric,
    #[error("sample point hits a pole: {0}")]
    PoleAtSample(String),
    #[error("section basis is empty")]
    EmptyBasis,
    #[error("every section vanishes at {0}")]
    BasePointEvaluation(String),
    #[error("points coincide")]
    EqualPoints,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
