use oncredit_core::ParticipantId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BrokerError {
    #[error(transparent)]
    Contract(#[from] oncredit_core::Error),
    #[error("{count} contracts submitted, at most {cap} are searched")]
    TooManyContracts { count: usize, cap: usize },
    #[error("the composed contract admits no agreement")]
    NoAgreement,
    #[error("strategy given for unknown participant {0}")]
    UnknownParticipant(ParticipantId),
}
