use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("division by zero while evaluating `{0}`")]
    DivisionByZero(String),
    #[error("division by an expression that is identically zero: `{0}`")]
    IdenticallyZeroDivisor(String),
    #[error("missing value for parameter `{0}`")]
    MissingParameter(String),
    #[error("algebra `{name}`: exclusion `{expr}` vanishes at this binding")]
    ExclusionViolated { name: String, expr: String },
    #[error("vector is not in the span of the given subspaces")]
    NotInSpan,
    #[error("subspace and complement are not independent")]
    NotComplement,
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("cohomology representatives are dependent modulo coboundaries")]
    DependentClasses,
    #[error("representatives do not span the second cohomology (got {got}, need {need})")]
    IncompleteClasses { got: usize, need: usize },
    #[error("algebra `{0}` is not nilpotent")]
    NotNilpotent(String),
    #[error("linear map is not an automorphism")]
    NotAutomorphism,
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Shift a parse error found inside a sub-string to its position in the file.
    pub(crate) fn at_line(self, line: usize, col_offset: usize) -> Self {
        match self {
            Error::Parse { col, msg, .. } => Error::Parse {
                line,
                col: col + col_offset,
                msg,
            },
            other => other,
        }
    }
}
