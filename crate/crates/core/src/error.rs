use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a letter could not be applied to a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IllegalReason {
    IndexOutOfRange,
    /// `u`, `m` or `d` aimed at a repeating slot.
    RepeatingSlot,
    ModeViolation,
    /// A same-value insertion landed left of the previous one.
    RunOrder,
    /// The first letter of a vertical evolution must be an increase.
    FirstLetterFlag,
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IllegalReason::IndexOutOfRange => "slot index out of range",
            IllegalReason::RepeatingSlot => "only f may insert into a repeating slot",
            IllegalReason::ModeViolation => "letter not in the alphabet of this mode",
            IllegalReason::RunOrder => "same-value insertion left of the previous one",
            IllegalReason::FirstLetterFlag => "first letter must be an increase",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("illegal letter {letter}: {reason}")]
    IllegalLetter { letter: String, reason: IllegalReason },

    #[error("{0} slot(s) remain at the end of the word")]
    DanglingSlots(usize),

    #[error("denominator has zero constant term")]
    NotNormalizable,

    #[error("denominator constant term is not 1")]
    NotNormalized,

    #[error("class is not slot-bounded: {0}")]
    NotSlotBounded(String),

    #[error("automaton construction exceeded the cap of {0} states")]
    CapExceeded(usize),

    #[error("catalog line {line}: {message}")]
    CorruptRecord { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
