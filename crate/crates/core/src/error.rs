use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Refinement hit the precision cap without separating a comparison and
    /// no exact certificate was available.
    #[error("precision exhausted at {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate simplex: edge determinant is zero")]
    DegenerateSimplex,

    #[error("pole collision: {0}")]
    PoleCollision(String),

    #[error("quadrature did not converge: {0}")]
    NotConverged(String),

    /// A denominator `m_j a_j / a_k - m_k` vanished exactly, meaning some
    /// ratio `a_j / a_k` is rational.
    #[error("zero denominator in error series at m = {m:?} (j = {j}, k = {k})")]
    DenominatorZero { m: Vec<i64>, j: usize, k: usize },

    #[error("alpha #{0} is rational")]
    RationalAlpha(usize),

    #[error("gcd({a}, {b}) != 1")]
    NotCoprime { a: i64, b: i64 },

    #[error("axes are not pairwise coprime: {0:?}")]
    NotPairwiseCoprime(Vec<u64>),

    #[error("interpolated polynomial disagrees with count at t = {t}: {expected} vs {actual}")]
    InterpolationInconsistent { t: u64, expected: String, actual: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
