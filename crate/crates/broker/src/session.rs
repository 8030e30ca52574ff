use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use oncredit_core::{
    compose_all, Analysis, Classification, Contract, EventId, ParticipantId, State,
};
use serde::{Deserialize, Serialize};

use crate::error::BrokerError;
use crate::strategy::Strategy;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Action {
    pub participant: ParticipantId,
    pub event: EventId,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    /// Counted from 1.
    pub number: usize,
    pub state_before: State,
    /// Duties sent to each culpable participant.
    pub notifications: BTreeMap<ParticipantId, BTreeSet<EventId>>,
    pub actions: Vec<Action>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StallReason {
    /// A round in which nobody performed anything.
    NoProgress,
    RoundLimit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Verdict {
    AllFulfilled,
    Stalled {
        reason: StallReason,
        culpable: BTreeSet<ParticipantId>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionLog {
    pub rounds: Vec<Round>,
    pub final_state: State,
    pub verdict: Verdict,
}

impl SessionLog {
    /// Performed events in order.
    pub fn performed(&self) -> impl Iterator<Item = &EventId> {
        self.rounds
            .iter()
            .flat_map(|r| r.actions.iter().map(|a| &a.event))
    }
}

/// Composes `contracts` and runs a session on the result.
///
/// Participants without an entry in `strategies` behave honestly. In each
/// round the culpable participants act in name order against the duties they
/// were notified of; duties are recomputed only at the start of the next
/// round.
pub fn run_session(
    contracts: &[Contract],
    strategies: &BTreeMap<ParticipantId, Strategy>,
    max_rounds: usize,
) -> Result<SessionLog, BrokerError> {
    let contract = compose_all(contracts)?;
    if let Some(p) = strategies.keys().find(|p| !contract.has_participant(p)) {
        return Err(BrokerError::UnknownParticipant(p.clone()));
    }
    let analysis = Analysis::new(&contract);
    if !analysis.agreement().agreed {
        return Err(BrokerError::NoAgreement);
    }

    let mut state = State::empty();
    let mut rounds = Vec::new();
    let verdict = loop {
        let report = analysis.duty_report(&state)?;
        if report.all_fulfilled(&contract) {
            break Verdict::AllFulfilled;
        }
        let number = rounds.len() + 1;
        if number > max_rounds {
            break Verdict::Stalled {
                reason: StallReason::RoundLimit,
                culpable: report.culpable,
            };
        }
        let notifications: BTreeMap<_, _> = report
            .duties
            .into_iter()
            .filter(|(_, d)| !d.is_empty())
            .collect();
        let state_before = state.clone();
        let mut actions = Vec::new();
        for (p, duties) in &notifications {
            let strategy = strategies.get(p).copied().unwrap_or_default();
            for event in strategy.respond(number, duties) {
                let (next, classification) = analysis.perform(&state, &event)?;
                state = next;
                actions.push(Action {
                    participant: p.clone(),
                    event,
                    classification,
                });
            }
        }
        let idle = actions.is_empty();
        rounds.push(Round {
            number,
            state_before,
            notifications,
            actions,
        });
        if idle {
            break Verdict::Stalled {
                reason: StallReason::NoProgress,
                culpable: report.culpable,
            };
        }
    };
    Ok(SessionLog {
        rounds,
        final_state: state,
        verdict,
    })
}

impl fmt::Display for SessionLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rounds {
            writeln!(f, "round {} in {}", r.number, r.state_before)?;
            for (p, d) in &r.notifications {
                write!(f, "  notify {p}:")?;
                for e in d {
                    write!(f, " {e}")?;
                }
                writeln!(f)?;
            }
            for a in &r.actions {
                writeln!(
                    f,
                    "  {} performs {} ({})",
                    a.participant, a.event, a.classification
                )?;
            }
        }
        writeln!(f, "final state {}", self.final_state)?;
        match &self.verdict {
            Verdict::AllFulfilled => writeln!(f, "verdict: all fulfilled"),
            Verdict::Stalled { reason, culpable } => {
                let why = match reason {
                    StallReason::NoProgress => "no progress",
                    StallReason::RoundLimit => "round limit reached",
                };
                write!(f, "verdict: stalled ({why}), culpable:")?;
                for p in culpable {
                    write!(f, " {p}")?;
                }
                writeln!(f)
            }
        }
    }
}
