use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("degree overflow: {left} + {right} > 6")]
    DegreeOverflow { left: usize, right: usize },
    #[error("expected degree {expected}, got {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not skew-symmetric at ({row}, {col})")]
    NotSkew { row: usize, col: usize },
    #[error("subspace is not Lagrangian: {0}")]
    NotLagrangian(String),
    #[error("bad prime {prime}: {reason}")]
    BadPrime { prime: u64, reason: String },
    #[error("enumeration budget exceeded: {needed} points > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("vector {0} lies in the hyperplane V5")]
    InHyperplane(String),
    #[error("vector {0} does not lie in the hyperplane V5")]
    NotInHyperplane(String),
    #[error("inconsistent quadric data: {0}")]
    InconsistentData(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("rank-2 form found in W^perp: {0}")]
    RankTwoForm(String),
    #[error("polynomial division left a nonzero remainder with {terms} terms")]
    NonzeroRemainder { terms: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("dependent classes")]
    DependentClasses,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
