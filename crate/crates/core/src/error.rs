use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bilinear form is degenerate")]
    SingularForm,

    #[error("structure is not para-Hermitian")]
    NotParaHermitian,

    #[error("unsupported dimension {0} (expected one of 4, 6, 8)")]
    UnsupportedDimension(usize),

    #[error("module {0} is not present in this table")]
    LabelAbsent(String),

    #[error("inner product restricted to module {0} is degenerate")]
    DegenerateRestriction(String),

    #[error("tensor is not symmetric in slot pair {0}")]
    SlotSymmetryViolation(&'static str),

    #[error("tensor does not satisfy theta(Jx,Jy,z,w) = -theta(x,y,z,w)")]
    JConditionViolation,

    #[error("metric is singular at the requested point")]
    SingularAtPoint,

    #[error("J field does not square to {expected} at the requested point")]
    NotAlmostStructure { expected: &'static str },

    #[error("source structure is not the standard positive definite Hermitian model")]
    NonStandardBasis,

    #[error("transferred tensor has non-zero imaginary part at index {0:?}")]
    ImaginaryResidue(Vec<usize>),

    #[error("unknown catalog label {0:?}")]
    UnknownLabel(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("tensor is not an algebraic curvature tensor")]
    NotCurvatureTensor,

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
