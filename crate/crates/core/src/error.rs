use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Kinds of malformed input recognized by the text parsers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    ZeroVector,
    Duplicate,
    RankDeficient,
    WrongLength,
}

impl ParseErrorKind {
    /// Stable short code, used by the CLI.
    pub fn code(self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "E_SYNTAX",
            ParseErrorKind::ZeroVector => "E_ZERO_VECTOR",
            ParseErrorKind::Duplicate => "E_DUPLICATE",
            ParseErrorKind::RankDeficient => "E_RANK_DEFICIENT",
            ParseErrorKind::WrongLength => "E_WRONG_LENGTH",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("table length {len} is not a power of two")]
    MalformedTable { len: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("budget exceeded for {what}: needs 2^{log2_required:.1} operations, limit is 2^{log2_limit:.1}")]
    Budget {
        what: &'static str,
        log2_required: f64,
        log2_limit: f64,
    },

    #[error("strategy error: {0}")]
    Strategy(String),

    #[error("parse error ({}) at line {line}: {message}", kind.code())]
    Parse {
        line: usize,
        kind: ParseErrorKind,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            kind,
            message: message.into(),
        }
    }

    pub(crate) fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }

    pub(crate) fn parameter(message: impl Into<String>) -> Self {
        Error::Parameter(message.into())
    }
}
