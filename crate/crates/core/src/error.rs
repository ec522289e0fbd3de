use alloc::string::String;
use core::fmt;

/// Location-annotated syntax error from one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {0}")]
    Syntax(ParseError),
    #[error("shape `{0}` is defined more than once")]
    DuplicateDefinition(String),
    #[error("shape `{0}` is not defined")]
    UndefinedShape(String),
    #[error("symbol `{symbol}` used as {first} and as {second}")]
    NamespaceClash {
        symbol: String,
        first: &'static str,
        second: &'static str,
    },
    #[error("shape atom `{0}` labels a node outside the graph")]
    LabelOutsideGraph(String),
    #[error("{0}")]
    ConstraintViolation(String),
    #[error("{mutable} mutable atoms exceed the enumeration budget of {budget}")]
    BudgetExceeded { mutable: usize, budget: usize },
    #[error("no supported model exists for any subset of the targets")]
    NoModel,
    #[error("intersection over an empty family of graphs")]
    EmptyFamily,
    #[error("query is not well-designed")]
    NotWellDesigned,
    #[error("query shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("instance too large for exhaustive checking: {0}")]
    SizeExceeded(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Syntax(e)
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
