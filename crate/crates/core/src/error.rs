use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps these onto exit codes: budget and size failures are distinct
/// from malformed input, and [`Error::InvariantViolation`] always indicates a
/// bug (two independent computations disagreed).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {size} exceeds the configured maximum {limit}")]
    FieldTooLarge { size: u128, limit: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {0} does not belong to this field")]
    ContextMismatch(u32),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("the two points coincide")]
    SamePoints,
    #[error("the line is a component of the curve")]
    LineIsComponent,
    #[error("degree {0} is not supported here")]
    UnsupportedDegree(usize),
    #[error("this operation requires odd q")]
    EvenCharacteristic,
    #[error("curve #{0} carries no geometric irreducibility certificate")]
    MissingCertificate(usize),
    #[error("curves #{0} and #{1} share a component")]
    SharedComponent(usize, usize),
    #[error("vertex {0} of the covered side has no neighbour")]
    IsolatedVertex(usize),
    #[error("the candidate pool leaves line #{0} uncovered")]
    PoolInsufficient(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
