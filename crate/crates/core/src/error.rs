use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("empty table")]
    EmptyTable,
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("degenerate margin: {0}")]
    DegenerateMargin(String),
    #[error("degenerate table: at least 2 rows and 2 columns are required, got {rows}x{cols}")]
    DegenerateTable { rows: usize, cols: usize },
    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("complex coding required: classes {0:?} share a cardinality")]
    ComplexCodingRequired(Vec<String>),
    #[error("invalid phase assignment: {0}")]
    InvalidAssignment(String),
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error("nothing to correct: variable {0} has no classes of equal cardinality")]
    NothingToCorrect(usize),
    #[error("invalid variable index {0}: expected 1 or 2")]
    InvalidVariable(usize),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular system: pivot modulus {pivot:e} at column {column}")]
    SingularSystem { column: usize, pivot: f64 },
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(&'static str),
    #[error("underdetermined design: degree {degree} needs {needed} distinct regressor values, found {distinct}")]
    UnderdeterminedDesign {
        degree: usize,
        needed: usize,
        distinct: usize,
    },
}

impl Error {
    /// True for failures of the numerics (singular or degenerate systems)
    /// rather than of the input data.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateMargin(_)
                | Error::DegenerateTable { .. }
                | Error::SingularSystem { .. }
                | Error::UndefinedCorrelation(_)
                | Error::UnderdeterminedDesign { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
