use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument must be nonnegative, got {0}")]
    NegativeArgument(f64),
    #[error("argument {t} lies beyond the finite domain bound {bound}")]
    OutsideDomain { t: f64, bound: f64 },
    #[error("level {y} is not attained: the function is constant beyond its last knot")]
    NonInvertibleTail { y: f64 },
    #[error("invalid piecewise-affine function: {0}")]
    InvalidPiecewise(String),
    #[error("invalid Orlicz function: {0}")]
    InvalidOrlicz(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exact mode supports n <= {limit}, got n = {n}")]
    ExactModeTooLarge { n: usize, limit: usize },
    #[error("row {row} is not nonincreasing at column {col}")]
    NotDecreasing { row: usize, col: usize },
    #[error("entry ({row}, {col}) is not a positive finite number")]
    NonPositiveEntry { row: usize, col: usize },
    #[error("row {row}: knot values are not concave at index {index}")]
    NotConcave { row: usize, index: usize },
    #[error("row {row}: prefix sums are not strictly increasing at column {col}")]
    PrefixSums { row: usize, col: usize },
    #[error("H(s) - sH'(s) = {gap} <= 0 at s = {s}: H violates the concavity hypotheses")]
    ProfileHypothesis { s: f64, gap: f64 },
    #[error("f-profile is negative ({value}) at t = {t}")]
    NegativeProfile { t: f64, value: f64 },
    #[error("function {index} is not smooth enough for the construction: {reason}")]
    NotSmooth { index: usize, reason: String },
    #[error("normalization failed for function {index}: {reason}")]
    Normalization { index: usize, reason: String },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("quadrature did not converge on [{a}, {b}]: estimate {estimate}, error {error}")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },
    #[error("zero denominator at t = {t}")]
    ZeroDenominator { t: f64 },
}
