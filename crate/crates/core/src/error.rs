use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("symbol {symbol:?} is not in alphabet {alphabet:?}")]
    AlphabetMismatch { symbol: char, alphabet: String },

    #[error("oracle limit exceeded: {what} is {actual}, limit is {limit}")]
    OracleLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("{path}:{line}: {kind}")]
    Fasta {
        path: PathBuf,
        line: usize,
        kind: FastaErrorKind,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FastaErrorKind {
    Empty,
    SequenceBeforeHeader,
    EmptyHeader,
    BadSymbol(char),
}

impl std::fmt::Display for FastaErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FastaErrorKind::Empty => write!(f, "file contains no records"),
            FastaErrorKind::SequenceBeforeHeader => {
                write!(f, "sequence data before the first '>' header")
            }
            FastaErrorKind::EmptyHeader => write!(f, "header line has no identifier"),
            FastaErrorKind::BadSymbol(c) => write!(f, "symbol {c:?} is not in the alphabet"),
        }
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
