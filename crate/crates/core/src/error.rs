use thiserror::Error;

use crate::model::{EventId, ParticipantId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown event `{0}`")]
    UnknownEvent(EventId),
    #[error("unknown participant `{0}`")]
    UnknownParticipant(ParticipantId),
    #[error("event `{event}` is owned by both {first} and {second}")]
    OwnershipClash {
        event: EventId,
        first: ParticipantId,
        second: ParticipantId,
    },
    #[error("contract has {events} events, more than the limit of {cap}")]
    CapExceeded { events: usize, cap: usize },
    #[error("event `{0}` has already been performed")]
    AlreadyPerformed(EventId),
    #[error("the contract admits no agreement")]
    NoAgreement,
}

/// Error from the contract text format, with a 1-based position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared event `{0}`")]
    UndeclaredEvent(String),
    #[error("undeclared participant `{0}`")]
    UndeclaredParticipant(String),
    #[error("event `{0}` is declared more than once")]
    DuplicateEvent(String),
    #[error("event `{event}` is declared with owners {first} and {second}")]
    ConflictingOwner {
        event: String,
        first: String,
        second: String,
    },
}
