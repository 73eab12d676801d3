use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report. Each variant carries a stable
/// machine-readable code (see [`Error::code`]) used by the CLI and the C ABI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different ring contexts")]
    ContextMismatch,
    #[error("substitution image is not in the target context: {0}")]
    ImageContext(String),
    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid ring declaration: {0}")]
    InvalidContext(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("ideal is not zero-dimensional over the fiber variables")]
    NotZeroDimensional,
    #[error("quotient is not certified free over the base ring")]
    NotCertifiedFree,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("form violates the base/fiber block split: {0}")]
    BlockViolation(String),
    #[error("rescaling exponents must dominate the current ones")]
    NotDominating,
    #[error("denominator sequences generate different ideals")]
    NoCommonRefinement,
    #[error("cochain level {level} has no coboundary in dimension {r}")]
    LevelOverflow { level: usize, r: usize },
    #[error("wrong twist or level: {0}")]
    WrongTwist(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("terms of different form degree at {line}:{col}")]
    MixedDegree { line: usize, col: usize },
    #[error("unknown variable `{name}` at {line}:{col}")]
    UnknownVariable { name: String, line: usize, col: usize },
    #[error("usage: {0}")]
    Usage(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::ContextMismatch => "CONTEXT_MISMATCH",
            Error::ImageContext(_) => "IMAGE_CONTEXT",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::NotPrime(_) => "NOT_PRIME",
            Error::InvalidContext(_) => "INVALID_CONTEXT",
            Error::DivisionByZero => "DIVISION_BY_ZERO",
            Error::NotDivisible(_) => "NOT_DIVISIBLE",
            Error::EmptyInput(_) => "EMPTY_INPUT",
            Error::NotZeroDimensional => "NOT_ZERO_DIMENSIONAL",
            Error::NotCertifiedFree => "NOT_CERTIFIED_FREE",
            Error::DegreeMismatch(_) => "DEGREE_MISMATCH",
            Error::BlockViolation(_) => "BLOCK_VIOLATION",
            Error::NotDominating => "NOT_DOMINATING",
            Error::NoCommonRefinement => "NO_COMMON_REFINEMENT",
            Error::LevelOverflow { .. } => "LEVEL_OVERFLOW",
            Error::WrongTwist(_) => "WRONG_TWIST",
            Error::Syntax { .. } => "SYNTAX_ERROR",
            Error::MixedDegree { .. } => "MIXED_DEGREE",
            Error::UnknownVariable { .. } => "UNKNOWN_VARIABLE",
            Error::Usage(_) => "USAGE",
            Error::Internal(_) => "INTERNAL",
        }
    }

    /// Parse and usage problems are the caller's fault; everything else is a
    /// computation failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::MixedDegree { .. }
                | Error::UnknownVariable { .. }
                | Error::Usage(_)
                | Error::InvalidContext(_)
                | Error::NotPrime(_)
        )
    }
}
