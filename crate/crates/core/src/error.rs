use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular over Z2")]
    Singular,
    #[error("operands live in different universes")]
    UniverseMismatch,
    #[error("the zero vector is not a valid state")]
    ZeroState,
    #[error("value {0} is outside the allowed range")]
    OutOfRange(String),
    #[error("outcome {0} has probability zero")]
    ImpossibleOutcome(String),
    #[error("attributes are not defined on a common universe")]
    IncompatibleAttributes,
    #[error("attributes do not form a complete set")]
    NotComplete,
    #[error("density matrices have different shapes")]
    ShapeMismatch,
    #[error("the second matrix is not a measurement of the first")]
    NotAMeasurement,
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate acts on {gate} lines but {available} were given")]
    SizeMismatch { gate: usize, available: usize },
    #[error("function arity {found} is not supported here (expected {expected})")]
    WrongArity { expected: usize, found: usize },
    #[error("line {line} is out of range for a {lines}-line register")]
    LineOutOfRange { line: usize, lines: usize },
    #[error("initial state is the zero vector")]
    ZeroInitial,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Short variant name, used by the CLI when reporting domain errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DimMismatch { .. } => "DimMismatch",
            Error::NotSquare { .. } => "NotSquare",
            Error::Singular => "Singular",
            Error::UniverseMismatch => "UniverseMismatch",
            Error::ZeroState => "ZeroState",
            Error::OutOfRange(_) => "OutOfRange",
            Error::ImpossibleOutcome(_) => "ImpossibleOutcome",
            Error::IncompatibleAttributes => "IncompatibleAttributes",
            Error::NotComplete => "NotComplete",
            Error::ShapeMismatch => "ShapeMismatch",
            Error::NotAMeasurement => "NotAMeasurement",
            Error::UnknownGate(_) => "UnknownGate",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::WrongArity { .. } => "WrongArity",
            Error::LineOutOfRange { .. } => "LineOutOfRange",
            Error::ZeroInitial => "ZeroInitial",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::Invalid(_) => "Invalid",
            Error::Parse(_) => "ParseError",
        }
    }
}
