use alloc::string::String;

/// Errors raised by constructors and checkers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("entry buffer of length {len} does not fit a {rows}x{cols} matrix")]
    InvalidLength { rows: usize, cols: usize, len: usize },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("numerical failure: {0}")]
    NumericalFailure(&'static str),
    #[error("dimension order violated: d = {d} exceeds d' = {dprime}")]
    DimensionOrder { d: usize, dprime: usize },
    #[error("angles are not admissible: θ2 + θ3 - 2θ1 misses 3π/2 (mod 2π) by {residual:.3e}")]
    NotAdmissible { residual: f64 },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("empty input family set")]
    EmptyInput,
    #[error("recipe {recipe} needs an unavailable construction: {missing}")]
    UnsupportedParameters { recipe: String, missing: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("matrix is not a complex Hadamard matrix")]
    NotChm,
    #[error("input verification failed for {what} (worst violation {worst:.3e})")]
    VerificationFailed { what: String, worst: f64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
