use thiserror::Error;

/// Errors raised anywhere in the algebra pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operation needs a quadratic field, got degree {0}")]
    UnsupportedDegree(usize),
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("field is not Galois over Q: {0}")]
    NonGaloisField(String),

    #[error("quadratic form is degenerate")]
    DegenerateForm,
    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("diagonal entry {0} is zero")]
    ZeroDiagonalEntry(usize),
    #[error("invalid structure constants: {0}")]
    InvalidAlgebra(String),
    #[error("invariant subspace is not closed under multiplication")]
    NotClosedUnderMultiplication,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("algebra too large for exact invariant computation (dimension {0})")]
    TooLarge(usize),

    #[error("quaternion symbol slot is zero")]
    ZeroSlot,
    #[error("Hilbert symbol of zero")]
    ZeroInput,
    #[error("{0} is not a place of Q")]
    NotAPlace(String),
    #[error("ramification set has odd cardinality (internal inconsistency)")]
    OddRamification,
    #[error("scaling factor is zero")]
    ZeroScale,
    #[error("first slot of the symbol is not rational")]
    FirstSlotNotRational,
    #[error("cannot factor {0} within the trial-division bound")]
    FactorizationBoundExceeded(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parameter constraint violated: {0}")]
    ParameterConstraintViolated(String),
    #[error("corestriction routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("family classification mismatch: {0}")]
    FamilyClassificationMismatch(String),

    #[error("malformed input at `{key}`: {msg}")]
    Malformed { key: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn malformed(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Malformed {
            key: key.into(),
            msg: msg.into(),
        }
    }
}
