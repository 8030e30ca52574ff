//! Contracts as event structures with standard and circular enablings.
//!
//! * [`model`]: contracts, states, saturated relation queries, composition.
//! * [`format`]: the line-oriented contract text format.
//! * [`configurations`]: configurations, credit reachability, the maximal
//!   configuration.
//! * [`agreement`]: agreements, duties, culpability and event classification.
//! * [`pcl`]: encoding into propositional contract logic and a proof search
//!   engine used to cross-check reachability.
//! * [`corpus`]: seeded random contracts.

pub mod agreement;
pub mod configurations;
pub mod corpus;
mod error;
pub mod format;
pub mod model;
pub mod pcl;

pub use agreement::{
    check_theorem3, duties, duty_report, find_agreement, perform, AgreementResult, Analysis,
    Classification, DutyReport,
};
pub use configurations::{
    enumerate_configurations, is_configuration, is_x_configuration, maximal_configuration,
    reachable_events, reachable_with_credit, Justification, OrderingWitness, WitnessStep,
    DEFAULT_ENUMERATION_CAP,
};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use format::{parse_contract, render};
pub use model::{
    compose, compose_all, enables, ok, validate, Clause, Contract, ContractBuilder, CreditState,
    Diagnostic, EnablingKind, EventId, GoalSet, ParticipantId, State,
};
