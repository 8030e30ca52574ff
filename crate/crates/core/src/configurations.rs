//! Configurations, credit-tracking reachability and the maximal configuration.
//!
//! A configuration is a set of events that can be ordered so that every event
//! is either standard-enabled by the events before it or circular-enabled by
//! the whole set. Both tests are monotone in the performed set, so once an
//! event can be appended it stays appendable; a greedy scan that appends any
//! eligible event finds an ordering whenever one exists.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Contract, CreditState, EnablingKind, EventId, State};

/// Largest event count accepted by the subset-enumerating procedures.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Why an event may occupy its position in an ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Justification {
    /// Standard-enabled by the events before it.
    StandardEnabled,
    /// Circular-enabled by the whole set.
    CircularEnabled,
    /// Taken on credit (only in X-configurations).
    Credit,
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Justification::StandardEnabled => "standard-enabled",
            Justification::CircularEnabled => "circular-enabled",
            Justification::Credit => "credit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WitnessStep {
    pub event: EventId,
    pub justification: Justification,
}

/// An ordering of a configuration together with the reason for each step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderingWitness {
    pub steps: Vec<WitnessStep>,
}

impl OrderingWitness {
    pub fn events(&self) -> impl Iterator<Item = &EventId> {
        self.steps.iter().map(|s| &s.event)
    }

    /// Re-checks every step against the contract: each event is distinct,
    /// the ordering covers exactly `set`, and every justification holds.
    pub fn validate(&self, c: &Contract, set: &State, credit: &CreditState) -> bool {
        let mut prefix = State::empty();
        for step in &self.steps {
            if prefix.contains(&step.event) || !set.contains(&step.event) {
                return false;
            }
            let justified = match step.justification {
                Justification::StandardEnabled => {
                    c.enabled(EnablingKind::Standard, &prefix, &step.event)
                }
                Justification::CircularEnabled => {
                    c.enabled(EnablingKind::Circular, set, &step.event)
                }
                Justification::Credit => credit.contains(&step.event),
            };
            if !justified {
                return false;
            }
            prefix.insert(step.event.clone());
        }
        &prefix == set
    }
}

impl fmt::Display for OrderingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}[{}]", s.event, s.justification)?;
        }
        Ok(())
    }
}

fn greedy_order(c: &Contract, set: &State, credit: &CreditState) -> Option<OrderingWitness> {
    let mut prefix = State::empty();
    let mut steps = Vec::with_capacity(set.len());
    while prefix.len() < set.len() {
        let next = set.iter().filter(|e| !prefix.contains(e)).find_map(|e| {
            let why = if c.enabled(EnablingKind::Standard, &prefix, e) {
                Justification::StandardEnabled
            } else if c.enabled(EnablingKind::Circular, set, e) {
                Justification::CircularEnabled
            } else if credit.contains(e) {
                Justification::Credit
            } else {
                return None;
            };
            Some(WitnessStep {
                event: e.clone(),
                justification: why,
            })
        })?;
        prefix.insert(next.event.clone());
        steps.push(next);
    }
    Some(OrderingWitness { steps })
}

/// Returns an ordering witnessing that `set` is a configuration, or `None`.
///
/// Events outside the contract make the set a non-configuration.
pub fn is_configuration(c: &Contract, set: &State) -> Option<OrderingWitness> {
    is_x_configuration(c, &State::empty(), set)
}

/// Like [`is_configuration`], but events of `credit` need no justification.
/// Requires `credit ⊆ set`.
pub fn is_x_configuration(
    c: &Contract,
    credit: &CreditState,
    set: &State,
) -> Option<OrderingWitness> {
    if !credit.is_subset(set) || set.iter().any(|e| !c.has_event(e)) {
        return None;
    }
    greedy_order(c, set, credit)
}

/// Every subset of the events, in increasing binary-counter order over the
/// sorted event list.
pub(crate) fn all_states(c: &Contract, cap: usize) -> Result<Vec<State>> {
    let events: Vec<&EventId> = c.events().collect();
    if events.len() > cap {
        return Err(Error::CapExceeded {
            events: events.len(),
            cap,
        });
    }
    Ok((0u64..1 << events.len())
        .map(|mask| {
            events
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| (*e).clone())
                .collect()
        })
        .collect())
}

/// All configurations, found by testing every subset of the events.
pub fn enumerate_configurations(c: &Contract, cap: usize) -> Result<BTreeSet<State>> {
    Ok(all_states(c, cap)?
        .into_iter()
        .filter(|s| is_configuration(c, s).is_some())
        .collect())
}

/// Memoised evaluation of the credit-reachability sets `R(X)`: the least
/// sets closed under
///
/// * `D |- e` and `D ⊆ R(X)` gives `e`,
/// * `D ||- e` and `D ⊆ R(X ∪ {e})` gives `e`,
/// * `e ∈ X` gives `e`.
///
/// The second rule only recurses on strictly larger credit sets, so the
/// recursion is bounded by the number of events.
#[derive(Debug)]
pub struct CreditReachability<'c> {
    contract: &'c Contract,
    memo: HashMap<State, State>,
}

impl<'c> CreditReachability<'c> {
    pub fn new(contract: &'c Contract) -> Self {
        CreditReachability {
            contract,
            memo: HashMap::new(),
        }
    }

    pub fn reach(&mut self, credit: &CreditState) -> State {
        if let Some(r) = self.memo.get(credit) {
            return r.clone();
        }
        let c = self.contract;
        let mut reached = credit.clone();

        // Circular rule: its side condition depends only on R(X ∪ {e}).
        let circular_targets: BTreeSet<&EventId> = c
            .clauses
            .iter()
            .filter(|cl| cl.kind == EnablingKind::Circular && !credit.contains(&cl.target))
            .map(|cl| &cl.target)
            .collect();
        for e in circular_targets {
            let extended = self.reach(&credit.with(e));
            if c.enabled(EnablingKind::Circular, &extended, e) {
                reached.insert(e.clone());
            }
        }

        // Standard rule, closed by a worklist until nothing changes.
        loop {
            let fresh: Vec<EventId> = c
                .clauses
                .iter()
                .filter(|cl| {
                    cl.kind == EnablingKind::Standard
                        && !reached.contains(&cl.target)
                        && cl.premises.is_subset(reached.events())
                })
                .map(|cl| cl.target.clone())
                .collect();
            if fresh.is_empty() {
                break;
            }
            for e in fresh {
                reached.insert(e);
            }
        }

        self.memo.insert(credit.clone(), reached.clone());
        reached
    }
}

/// `R(X)`: the events reachable when the events of `credit` are granted
/// without justification.
pub fn reachable_with_credit(c: &Contract, credit: &CreditState) -> Result<State> {
    c.require_state(credit)?;
    Ok(CreditReachability::new(c).reach(credit))
}

/// Events that belong to some configuration.
pub fn reachable_events(c: &Contract) -> State {
    CreditReachability::new(c).reach(&State::empty())
}

/// The largest configuration: the set of all reachable events.
pub fn maximal_configuration(c: &Contract) -> State {
    reachable_events(c)
}
