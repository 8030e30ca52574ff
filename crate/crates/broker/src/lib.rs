//! In-process simulation of a contract broker.
//!
//! The broker collects contracts, looks for a subset whose composition admits
//! an agreement, and then drives a session: in every round it computes the
//! duties of each participant, notifies the culpable ones and lets them act
//! according to their [`Strategy`]. A session ends when every participant is
//! fulfilled or when a round makes no progress.

mod error;
mod session;
mod strategy;
mod subset;

pub use error::BrokerError;
pub use session::{run_session, Action, Round, SessionLog, StallReason, Verdict};
pub use strategy::{Strategy, StrategyParseError};
pub use subset::{find_agreeing_subset, DEFAULT_CONTRACT_CAP};
