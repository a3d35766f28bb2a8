use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix row {row} has {len} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is empty")]
    Empty,
    #[error("entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("entry ({row}, {col}) is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}")]
    RowSumViolation { row: usize, sum: f64 },
    #[error("column {col} sums to {sum}")]
    ColumnSumViolation { col: usize, sum: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("super slack must be nonnegative and finite, got {0}")]
    InvalidSlack(f64),
    #[error("gamma must lie in (0, 1e-3], got {0}")]
    GammaOutOfRange(f64),
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("invalid size {0}")]
    InvalidSize(usize),
    #[error("epsilon must be finite and nonnegative, got {0}")]
    InvalidEpsilon(f64),
    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("tridiagonal parameters violate the constraint at index {0}")]
    AlphaConstraintViolated(usize),

    #[error("privacy budget is zero bits for a matrix of size 1")]
    DegenerateSize,
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("zero threshold must lie in (0, 1e-6], got {0}")]
    ThresholdOutOfRange(f64),
    #[error("no perfect matching after {terms} terms (residual max {residual_max})")]
    NoPerfectMatching { terms: usize, residual_max: f64 },
    #[error("operation requires a strictly bistochastic matrix (super slack {0})")]
    NotStrictlyBistochastic(f64),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix is singular")]
    SingularMatrix,
    #[error("row {row} of the transition matrix is not a probability vector (sum {sum})")]
    NotRightStochastic { row: usize, sum: f64 },

    #[error("joint domain of {size} categories exceeds the cap of {cap}")]
    JointTooLarge { size: usize, cap: usize },
    #[error("column `{0}` is not categorical")]
    NonCategoricalColumn(String),
    #[error("mode {mode} does not apply to column `{column}`")]
    ModeNotApplicable { column: String, mode: &'static str },
    #[error("invalid column: {0}")]
    InvalidColumn(String),
    #[error("{0}")]
    Columns(ColumnErrors),
    #[error("column `{name}`: {source}")]
    Column { name: String, source: Box<Error> },
}

/// An error attributed to a named column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnError {
    pub column: String,
    pub error: Error,
}

/// Every failing column of a multi-column operation.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnErrors(pub Vec<ColumnError>);

impl fmt::Display for ColumnErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "column `{}`: {}", e.column, e.error)?;
        }
        Ok(())
    }
}
