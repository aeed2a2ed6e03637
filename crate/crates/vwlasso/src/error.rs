//! Crate-wide error type.

use crate::core::FitResult;

/// Errors produced by dataset construction, solvers, GARCH fitting, and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A column's sample standard deviation is too small to standardize.
    #[error("column '{0}' is constant (zero sample standard deviation)")]
    ConstantColumn(String),

    /// Shapes of interacting objects disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Vector lengths disagree or are empty where data is required.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// The GARCH variance recursion produced a non-positive value.
    #[error("GARCH recursion produced non-positive variance at t={t}")]
    NonPositiveVariance { t: usize },

    /// Series too short for a reliable GARCH fit.
    #[error("series of length {len} is too short for GARCH fitting (minimum {min})")]
    SeriesTooShort { len: usize, min: usize },

    /// Series has (numerically) zero sample variance.
    #[error("degenerate series: sample variance is zero")]
    DegenerateSeries,

    /// A per-column GARCH failure, tagged with the column name.
    #[error("GARCH fit failed for column '{column}': {source}")]
    GarchColumn {
        column: String,
        #[source]
        source: Box<Error>,
    },

    /// A column transform cannot be applied to the given values.
    #[error("cannot apply transform to column '{column}': {reason}")]
    InvalidTransform { column: String, reason: String },

    /// Design matrix is rank deficient or too ill-conditioned to solve.
    #[error("design matrix is rank deficient or ill-conditioned: {0}")]
    RankDeficient(String),

    /// Coordinate descent hit the iteration cap; the last iterate is attached
    /// so the caller can decide whether to accept it.
    #[error("solver did not converge within the iteration limit")]
    NotConverged(Box<FitResult>),

    /// A penalty-weight vector is unusable for the requested fit.
    #[error("invalid penalty weights: {0}")]
    InvalidWeights(String),

    /// A chronological split leaves too little data on one side.
    #[error("split too small: train={train}, test={test} (need train >= {min_train}, test >= 1)")]
    SplitTooSmall {
        train: usize,
        test: usize,
        min_train: usize,
    },

    /// A named column is absent from the input file.
    #[error("missing column '{0}'")]
    MissingColumn(String),

    /// A cell could not be parsed as a finite number.
    #[error("non-numeric cell at data row {row}, column {col} ('{name}')")]
    NonNumericCell { row: usize, col: usize, name: String },

    /// Date column is not strictly increasing at the given data row.
    #[error("dates are not strictly increasing at data row {row}")]
    NonMonotonicDates { row: usize },

    /// A date cell is not a recognized quarterly period.
    #[error("unparseable date '{value}' at data row {row} (expected e.g. 1986Q1 or 1986-01-01)")]
    BadDate { row: usize, value: String },

    /// Transforms consumed every row.
    #[error("no rows remain after applying transforms")]
    EmptyAfterTransform,

    /// Underlying filesystem or CSV failure.
    #[error("I/O failure: {0}")]
    IoFailure(String),

    /// A precondition on arguments was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Accepts a non-converged iterate as the fit, keeping `converged = false` on
/// the result. Any other error passes through.
pub fn accept_last_iterate(res: Result<FitResult>) -> Result<FitResult> {
    match res {
        Err(Error::NotConverged(fit)) => Ok(*fit),
        other => other,
    }
}
