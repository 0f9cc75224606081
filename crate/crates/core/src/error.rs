use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoherenceError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoherenceError {
    #[error("matrix is not square: {rows} rows, row {bad_row} has {cols} entries")]
    NotSquare { rows: usize, bad_row: usize, cols: usize },

    #[error("matrix is empty")]
    Empty,

    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |rho_ij - conj(rho_ji)| = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("state vector has squared norm {norm_sq}, expected 1")]
    NotNormalized { norm_sq: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("wrong dimension: operation needs d = {expected}, got d = {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid index set: {0}")]
    InvalidIndices(String),

    #[error("invalid ensemble weights: {0}")]
    BadWeights(String),

    #[error("ensemble needs at least {min} members, got {found}")]
    TooFewMembers { min: usize, found: usize },

    #[error("member {index} carries weight {weight}; its complement is undefined")]
    DegenerateWeight { index: usize, weight: f64 },

    #[error("complement of member {index} is not a valid state: {source}")]
    BadDecomposition {
        index: usize,
        #[source]
        source: Box<CoherenceError>,
    },

    #[error("ensemble members are linearly dependent (Gram min eigenvalue {min_eigenvalue:e})")]
    LinearlyDependent { min_eigenvalue: f64 },

    #[error("all entries are zero")]
    AllZeros,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("row/column {index} has zero diagonal but off-diagonal modulus {modulus:e}")]
    ZeroRowViolation { index: usize, modulus: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl CoherenceError {
    /// True for errors caused by an input that violates the state axioms or an
    /// operation's preconditions, as opposed to a numerical breakdown.
    pub fn is_validation(&self) -> bool {
        !matches!(self, CoherenceError::NumericalFailure(_))
    }
}
