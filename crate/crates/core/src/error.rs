use thiserror::Error;

/// Errors raised by word construction, checks and table building.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be in 2..=255, got {0}")]
    InvalidAlphabet(usize),

    #[error("letter {letter} is outside the alphabet {{0, ..., {}}}", .k - 1)]
    LetterOutOfRange { letter: u64, k: usize },

    #[error("{0}")]
    Domain(String),

    #[error("requested {requested} letters, which exceeds the length cap of {cap} letters")]
    CapExceeded { requested: u128, cap: usize },

    #[error("integer overflow while computing {what} at index {index}")]
    Overflow { what: &'static str, index: usize },

    /// A stated identity did not hold on a concrete instance.
    #[error("falsification in {check}: {detail}")]
    Falsified {
        check: String,
        position: Option<usize>,
        detail: String,
    },

    #[error("cannot parse word: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn falsified(
        check: impl Into<String>,
        position: Option<usize>,
        detail: impl Into<String>,
    ) -> Self {
        Error::Falsified {
            check: check.into(),
            position,
            detail: detail.into(),
        }
    }

    /// True for errors caused by an identity failing, as opposed to bad input
    /// or resource limits.
    pub fn is_falsification(&self) -> bool {
        matches!(self, Error::Falsified { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
