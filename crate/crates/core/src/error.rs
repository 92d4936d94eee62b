use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("value is not a square in Q(i)")]
    NotASquare,
    #[error("tuple sizes do not match: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("trace word is empty")]
    EmptyWord,
    #[error("slot index {0} out of range for n = {1}")]
    IndexOutOfRange(usize, usize),
    #[error("matrix tuple is not trace-zero")]
    NotTraceZero,
    #[error("reduced construction requires n >= 3, got {0}")]
    NTooSmall(usize),
    #[error("tuple is not upper triangular")]
    NotUpperTriangular,
    #[error("pair is not in the C / C' / C0 family")]
    NotInCFamily,
    #[error("computation requires a field extension of Q(i)")]
    FieldExtensionRequired,
    #[error("tuple is not simultaneously triangularizable")]
    NotTriangularizable,
    #[error("pair trace data is inconsistent")]
    InconsistentData,
    #[error("enumeration budget exceeded: {0} > {1}")]
    BudgetExceeded(u64, u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("tuple length {0} does not match declared n = {1}")]
    LengthMismatch(usize, usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
