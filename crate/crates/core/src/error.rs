use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Variants split into three rough classes:
/// input parsing (`InvalidRational`, `FloatWeight`, `MalformedTree`, `Json`,
/// `UnknownName`), domain violations (empty/negative/zero-sum inputs), and
/// capability limits (`BoundExceeded`, `LadderTooLong`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("vector must contain at least one entry")]
    EmptyVector,

    #[error("negative value {0} where a nonnegative one is required")]
    Negative(String),

    #[error("entries sum to {sum}, not 1 (tolerance {tol:e})")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("total weight must be strictly positive")]
    ZeroTotalWeight,

    #[error("argument must be strictly positive (got {0})")]
    NonPositive(String),

    #[error("expected {expected} conditional distributions, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grouping must contain at least one group")]
    EmptyGrouping,

    #[error("n must be a positive integer")]
    ZeroArgument,

    #[error("{0} exceeds the factorization bound {1}")]
    BoundExceeded(u64, u64),

    #[error("scan bound {got} is below the minimum {min}")]
    ScanTooShort { got: u64, min: u64 },

    #[error("numerator or denominator {0} is too large for potential recovery")]
    LadderTooLong(String),

    #[error("invalid rational literal `{0}` (expected `p` or `p/q` with q > 0)")]
    InvalidRational(String),

    #[error("floating-point weights are not accepted: {0}")]
    FloatWeight(String),

    #[error("malformed tree node: {0}")]
    MalformedTree(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("{0} is not a prime (additive functions are given by prime values)")]
    NotPrime(u64),

    #[error("potential must vanish at 1, got g(1) = {0:e}")]
    UnnormalizedPotential(f64),

    #[error("non-finite value produced by {0}")]
    NonFinite(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by unparseable input rather than by values
    /// outside an operation's domain. CLI front ends use this to pick
    /// exit codes.
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::InvalidRational(_)
                | Error::FloatWeight(_)
                | Error::MalformedTree(_)
                | Error::UnknownName(_)
                | Error::NotPrime(_)
                | Error::Json(_)
        )
    }
}
