use thiserror::Error;

/// Errors shared across the crate.
///
/// `InternalInconsistency` is reserved for situations where two independent
/// computations of the same fact disagree; it should never occur and callers
/// treat it differently from invalid input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unimodular (det must be +1 or -1)")]
    NotUnimodular,

    #[error("operation requires a torsion-free multiparameter group")]
    TorsionPresent,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("the zero bivector has no decomposability verdict")]
    ZeroBivector,

    #[error("{0} is not C(n,2) for any n >= 3")]
    NotBinomialDimension(usize),

    #[error("scalars belong to different fields")]
    FieldMismatch,

    #[error("division by zero field element")]
    DivisionByZero,

    #[error("matrix is singular over its field")]
    SingularMatrix,

    #[error("search exceeded the node budget of {budget} partial assignments")]
    NodeBudgetExceeded { budget: u64 },

    #[error("enumeration of {size} matrices exceeds the budget of {budget}")]
    EnumerationBudgetExceeded { size: u128, budget: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    InternalInconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
