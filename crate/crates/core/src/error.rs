use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision cap of {cap} p-adic digits exhausted (needed {needed})")]
    PrecisionExhausted { cap: usize, needed: usize },
    #[error("unsupported extension: the computation needs sqrt({needed}) adjoined to the working field")]
    UnsupportedExtension { needed: String },
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("type-I point where a type-II point is required: {0}")]
    TypeIPoint(String),
    #[error("wrong element class: expected {expected}, found {found}")]
    WrongClass { expected: String, found: String },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("not all elements are elliptic: {word} is {class}")]
    NotAllElliptic { word: String, class: String },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn unsupported(needed: impl std::fmt::Display) -> Self {
        Error::UnsupportedExtension { needed: needed.to_string() }
    }

    /// True for errors caused by malformed input text.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
