use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: pole at s = {location}")]
    Pole {
        function: &'static str,
        location: Complex64,
    },

    #[error("{function}: s = {s} lies outside the strip 0 < Re(s) < 1")]
    OutOfStrip { function: &'static str, s: Complex64 },

    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("operation `{op}` is not admissible for {kind}")]
    Inadmissible { op: &'static str, kind: String },

    #[error("{what} did not converge (reached {reached})")]
    NonConvergence { what: &'static str, reached: f64 },

    #[error("zero scan found {found} zeros but the counting formula demands {expected}")]
    CountMismatch { expected: usize, found: usize },

    #[error("zero count at t = {t} is ambiguous: {value} is not within 0.25 of an integer")]
    AmbiguousCount { t: f64, value: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: ordinate {value} does not exceed the previous one")]
    Monotonicity { line: usize, value: f64 },

    #[error("zero table is not certified: {0}")]
    Certification(String),

    #[error("field point must be nonzero")]
    ZeroPoint,

    #[error("function is not admissible: {0}")]
    Admissibility(String),

    #[error("level mismatch: {0}")]
    Level(String),

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vanishing denominator in {0}")]
    VanishingDenominator(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
