//! Agreements, duties and culpability.
//!
//! Duties are computed against the maximal configuration `M`. An event `e`
//! is a duty of `A` in state `X` when `e ∉ X`, `A` owns `e`, `e ∈ M`, and
//! either `X |- e`, or no event of `M ∖ X` is standard-enabled by `X` and
//! `M ∪ X ||- e`. Standard enablings take priority: an event is due on
//! credit only when nothing can be done the ordinary way.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::configurations::{all_states, maximal_configuration, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::model::{Contract, EnablingKind, EventId, GoalSet, ParticipantId, State};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementResult {
    pub agreed: bool,
    pub configuration: Option<State>,
    /// For each participant, the least goal set contained in the reachable
    /// events, if any.
    pub witnesses: BTreeMap<ParticipantId, Option<GoalSet>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DutyReport {
    pub state: State,
    pub duties: BTreeMap<ParticipantId, BTreeSet<EventId>>,
    pub culpable: BTreeSet<ParticipantId>,
    pub fulfilled: BTreeSet<ParticipantId>,
}

impl DutyReport {
    pub fn all_fulfilled(&self, c: &Contract) -> bool {
        self.fulfilled.len() == c.participants().len()
    }

    /// Duties of `p`; empty when it has none.
    pub fn duties_of(&self, p: &ParticipantId) -> BTreeSet<EventId> {
        self.duties.get(p).cloned().unwrap_or_default()
    }
}

/// How a performed event relates to the contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    StandardJustified,
    CircularCredit,
    Unjustified,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::StandardJustified => "standard-justified",
            Classification::CircularCredit => "circular-credit",
            Classification::Unjustified => "unjustified",
        })
    }
}

/// A contract together with its maximal configuration, so that duty and
/// classification queries do not recompute reachability.
#[derive(Clone, Debug)]
pub struct Analysis<'c> {
    contract: &'c Contract,
    maximal: State,
}

impl<'c> Analysis<'c> {
    pub fn new(contract: &'c Contract) -> Self {
        Analysis {
            contract,
            maximal: maximal_configuration(contract),
        }
    }

    pub fn contract(&self) -> &'c Contract {
        self.contract
    }

    pub fn maximal(&self) -> &State {
        &self.maximal
    }

    pub fn agreement(&self) -> AgreementResult {
        let c = self.contract;
        let witnesses: BTreeMap<_, _> = c
            .participants()
            .iter()
            .map(|p| {
                let w = c
                    .goals_of(p)
                    .find(|g| g.goal.is_subset(self.maximal.events()))
                    .cloned();
                (p.clone(), w)
            })
            .collect();
        let agreed = witnesses.values().all(Option::is_some);
        AgreementResult {
            agreed,
            configuration: agreed.then(|| self.maximal.clone()),
            witnesses,
        }
    }

    pub fn duties(&self, p: &ParticipantId, x: &State) -> Result<BTreeSet<EventId>> {
        self.contract.require_participant(p)?;
        self.contract.require_state(x)?;
        Ok(self.duties_unchecked(p, x))
    }

    fn duties_unchecked(&self, p: &ParticipantId, x: &State) -> BTreeSet<EventId> {
        let c = self.contract;
        let pending = || self.maximal.iter().filter(|e| !x.contains(e));
        let any_standard = pending().any(|e| c.enabled(EnablingKind::Standard, x, e));
        let credit_scope = self.maximal.union(x);
        pending()
            .filter(|e| c.owner(e) == Some(p))
            .filter(|e| {
                c.enabled(EnablingKind::Standard, x, e)
                    || (!any_standard && c.enabled(EnablingKind::Circular, &credit_scope, e))
            })
            .cloned()
            .collect()
    }

    pub fn duty_report(&self, x: &State) -> Result<DutyReport> {
        let c = self.contract;
        c.require_state(x)?;
        let mut duties = BTreeMap::new();
        let mut culpable = BTreeSet::new();
        let mut fulfilled = BTreeSet::new();
        for p in c.participants() {
            let d = self.duties_unchecked(p, x);
            if !d.is_empty() {
                culpable.insert(p.clone());
            }
            if c.fulfilled(p, x) {
                fulfilled.insert(p.clone());
            }
            duties.insert(p.clone(), d);
        }
        Ok(DutyReport {
            state: x.clone(),
            duties,
            culpable,
            fulfilled,
        })
    }

    pub fn perform(&self, x: &State, e: &EventId) -> Result<(State, Classification)> {
        let c = self.contract;
        c.require_event(e)?;
        c.require_state(x)?;
        if x.contains(e) {
            return Err(Error::AlreadyPerformed(e.clone()));
        }
        let after = x.with(e);
        let class = if c.enabled(EnablingKind::Standard, x, e) {
            Classification::StandardJustified
        } else if c.enabled(EnablingKind::Circular, &self.maximal.union(&after), e) {
            Classification::CircularCredit
        } else {
            Classification::Unjustified
        };
        Ok((after, class))
    }
}

/// Decides whether the contract admits an agreement. When it does, the
/// maximal configuration is one.
pub fn find_agreement(c: &Contract) -> AgreementResult {
    Analysis::new(c).agreement()
}

pub fn duties(c: &Contract, p: &ParticipantId, x: &State) -> Result<BTreeSet<EventId>> {
    Analysis::new(c).duties(p, x)
}

pub fn duty_report(c: &Contract, x: &State) -> Result<DutyReport> {
    Analysis::new(c).duty_report(x)
}

/// Performs `e` in state `x`. Unjustified events are accepted and reported as
/// such: a dishonest participant may ignore its contract.
pub fn perform(c: &Contract, x: &State, e: &EventId) -> Result<(State, Classification)> {
    Analysis::new(c).perform(x, e)
}

/// Scans every state of an agreeing contract for one where somebody is
/// unfulfilled and nobody is culpable. States are visited by size, then in
/// lexicographic order; the first such state is returned.
pub fn check_theorem3(c: &Contract) -> Result<Option<State>> {
    check_theorem3_with_cap(c, DEFAULT_ENUMERATION_CAP)
}

pub fn check_theorem3_with_cap(c: &Contract, cap: usize) -> Result<Option<State>> {
    let analysis = Analysis::new(c);
    if !analysis.agreement().agreed {
        return Err(Error::NoAgreement);
    }
    let mut states = all_states(c, cap)?;
    states.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for x in states {
        let report = analysis.duty_report(&x)?;
        if !report.all_fulfilled(c) && report.culpable.is_empty() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
