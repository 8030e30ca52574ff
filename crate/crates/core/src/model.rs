//! Contracts: events, participants, ownership, goals and the two enabling
//! relations.
//!
//! Enabling and fulfillment relations are upward closed under supersets of
//! their left component. They are stored here as their minimal generators and
//! every membership query is answered with a subset test, so the closure is
//! never built.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Returns true when `s` is a nonempty run of ASCII letters, digits or `_`.
pub fn is_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Self {
                $name(name.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(&self.0, f)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

name_type!(
    /// Name of an event. Compared by exact token.
    EventId
);
name_type!(
    /// Name of a participant.
    ParticipantId
);

/// Which of the two enabling relations a clause belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnablingKind {
    /// `D |- e`: `e` may happen once every event of `D` has happened.
    Standard,
    /// `D ||- e`: `e` may happen on credit, against the promise that `D`
    /// happens eventually.
    Circular,
}

impl EnablingKind {
    pub fn arrow(self) -> &'static str {
        match self {
            EnablingKind::Standard => "|-",
            EnablingKind::Circular => "||-",
        }
    }
}

/// A set of performed events.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(BTreeSet<EventId>);

/// The set of events taken on credit when reasoning about X-configurations.
pub type CreditState = State;

impl State {
    pub fn empty() -> Self {
        State(BTreeSet::new())
    }

    pub fn events(&self) -> &BTreeSet<EventId> {
        &self.0
    }

    pub fn into_events(self) -> BTreeSet<EventId> {
        self.0
    }

    pub fn contains(&self, e: &EventId) -> bool {
        self.0.contains(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EventId> {
        self.0.iter()
    }

    pub fn insert(&mut self, e: EventId) -> bool {
        self.0.insert(e)
    }

    pub fn is_subset(&self, other: &State) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &State) -> State {
        State(self.0.union(&other.0).cloned().collect())
    }

    pub fn with(&self, e: &EventId) -> State {
        let mut s = self.clone();
        s.0.insert(e.clone());
        s
    }
}

impl FromIterator<EventId> for State {
    fn from_iter<I: IntoIterator<Item = EventId>>(iter: I) -> Self {
        State(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a str> for State {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        State(iter.into_iter().map(EventId::from).collect())
    }
}

impl From<BTreeSet<EventId>> for State {
    fn from(s: BTreeSet<EventId>) -> Self {
        State(s)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One minimal enabling. Field order fixes the canonical ordering used when
/// rendering: by target, standard before circular, then premises.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Clause {
    pub target: EventId,
    pub kind: EnablingKind,
    pub premises: BTreeSet<EventId>,
}

impl Clause {
    pub fn new<'a>(
        kind: EnablingKind,
        premises: impl IntoIterator<Item = &'a str>,
        target: &str,
    ) -> Self {
        Clause {
            target: target.into(),
            kind,
            premises: premises.into_iter().map(EventId::from).collect(),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_event_list(f, &self.premises)?;
        write!(f, " {} {}", self.kind.arrow(), self.target)
    }
}

/// One minimal goal of a participant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GoalSet {
    pub participant: ParticipantId,
    pub goal: BTreeSet<EventId>,
}

pub(crate) fn write_event_list(f: &mut impl fmt::Write, events: &BTreeSet<EventId>) -> fmt::Result {
    if events.is_empty() {
        return f.write_str("-");
    }
    for (i, e) in events.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

/// A contract: events owned by participants, enabling clauses and goals.
///
/// Constructed through [`ContractBuilder`], the text parser or [`compose`];
/// all of them check that ownership is total and that clauses and goals only
/// mention declared events.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contract {
    pub(crate) participants: BTreeSet<ParticipantId>,
    pub(crate) owner: BTreeMap<EventId, ParticipantId>,
    pub(crate) clauses: BTreeSet<Clause>,
    pub(crate) goals: BTreeSet<GoalSet>,
}

impl Contract {
    pub fn builder() -> ContractBuilder {
        ContractBuilder::default()
    }

    pub fn events(&self) -> impl ExactSizeIterator<Item = &EventId> + Clone {
        self.owner.keys()
    }

    pub fn event_count(&self) -> usize {
        self.owner.len()
    }

    pub fn has_event(&self, e: &EventId) -> bool {
        self.owner.contains_key(e)
    }

    pub fn all_events(&self) -> State {
        self.owner.keys().cloned().collect()
    }

    pub fn participants(&self) -> &BTreeSet<ParticipantId> {
        &self.participants
    }

    pub fn has_participant(&self, p: &ParticipantId) -> bool {
        self.participants.contains(p)
    }

    pub fn owner(&self, e: &EventId) -> Option<&ParticipantId> {
        self.owner.get(e)
    }

    pub fn ownership(&self) -> &BTreeMap<EventId, ParticipantId> {
        &self.owner
    }

    pub fn clauses(&self) -> &BTreeSet<Clause> {
        &self.clauses
    }

    pub fn goals(&self) -> &BTreeSet<GoalSet> {
        &self.goals
    }

    /// Goal sets of `p`, in canonical order.
    pub fn goals_of<'a>(&'a self, p: &'a ParticipantId) -> impl Iterator<Item = &'a GoalSet> + 'a {
        self.goals.iter().filter(move |g| &g.participant == p)
    }

    pub(crate) fn require_event(&self, e: &EventId) -> Result<()> {
        if self.has_event(e) {
            Ok(())
        } else {
            Err(Error::UnknownEvent(e.clone()))
        }
    }

    pub(crate) fn require_state(&self, s: &State) -> Result<()> {
        s.iter().try_for_each(|e| self.require_event(e))
    }

    pub(crate) fn require_participant(&self, p: &ParticipantId) -> Result<()> {
        if self.has_participant(p) {
            Ok(())
        } else {
            Err(Error::UnknownParticipant(p.clone()))
        }
    }

    /// Unchecked variant of [`enables`] for callers that already validated
    /// their inputs.
    pub(crate) fn enabled(&self, kind: EnablingKind, performed: &State, e: &EventId) -> bool {
        self.clauses.iter().any(|cl| {
            cl.kind == kind && &cl.target == e && cl.premises.is_subset(performed.events())
        })
    }

    pub(crate) fn fulfilled(&self, p: &ParticipantId, performed: &State) -> bool {
        self.goals_of(p)
            .any(|g| g.goal.is_subset(performed.events()))
    }
}

/// Incremental construction of a [`Contract`].
#[derive(Clone, Debug, Default)]
pub struct ContractBuilder {
    participants: Vec<ParticipantId>,
    events: Vec<(EventId, ParticipantId)>,
    clauses: Vec<Clause>,
    goals: Vec<GoalSet>,
}

impl ContractBuilder {
    pub fn participant(mut self, p: &str) -> Self {
        self.participants.push(p.into());
        self
    }

    pub fn event(mut self, e: &str, owner: &str) -> Self {
        self.events.push((e.into(), owner.into()));
        self
    }

    pub fn enable<'a>(mut self, premises: impl IntoIterator<Item = &'a str>, target: &str) -> Self {
        self.clauses
            .push(Clause::new(EnablingKind::Standard, premises, target));
        self
    }

    pub fn circular<'a>(
        mut self,
        premises: impl IntoIterator<Item = &'a str>,
        target: &str,
    ) -> Self {
        self.clauses
            .push(Clause::new(EnablingKind::Circular, premises, target));
        self
    }

    pub fn clause(mut self, clause: Clause) -> Self {
        self.clauses.push(clause);
        self
    }

    pub fn goal<'a>(mut self, p: &str, goal: impl IntoIterator<Item = &'a str>) -> Self {
        self.goals.push(GoalSet {
            participant: p.into(),
            goal: goal.into_iter().map(EventId::from).collect(),
        });
        self
    }

    pub fn build(self) -> Result<Contract> {
        let participants: BTreeSet<ParticipantId> = self.participants.into_iter().collect();
        let mut owner: BTreeMap<EventId, ParticipantId> = BTreeMap::new();
        for (e, p) in self.events {
            if !participants.contains(&p) {
                return Err(Error::UnknownParticipant(p));
            }
            if let Some(prev) = owner.get(&e) {
                if prev != &p {
                    return Err(Error::OwnershipClash {
                        event: e,
                        first: prev.clone(),
                        second: p,
                    });
                }
            }
            owner.insert(e, p);
        }
        for cl in &self.clauses {
            for e in cl.premises.iter().chain(std::iter::once(&cl.target)) {
                if !owner.contains_key(e) {
                    return Err(Error::UnknownEvent(e.clone()));
                }
            }
        }
        for g in &self.goals {
            if !participants.contains(&g.participant) {
                return Err(Error::UnknownParticipant(g.participant.clone()));
            }
            if let Some(e) = g.goal.iter().find(|e| !owner.contains_key(*e)) {
                return Err(Error::UnknownEvent(e.clone()));
            }
        }
        Ok(Contract {
            participants,
            owner,
            clauses: self.clauses.into_iter().collect(),
            goals: self.goals.into_iter().collect(),
        })
    }
}

/// Membership in the saturated enabling relation of the given kind: some
/// clause for `e` has all its premises in `performed`.
pub fn enables(c: &Contract, kind: EnablingKind, performed: &State, e: &EventId) -> Result<bool> {
    c.require_event(e)?;
    c.require_state(performed)?;
    Ok(c.enabled(kind, performed, e))
}

/// Membership in the saturated fulfillment relation.
pub fn ok(c: &Contract, p: &ParticipantId, performed: &State) -> Result<bool> {
    c.require_participant(p)?;
    Ok(c.fulfilled(p, performed))
}

/// Component-wise union of two contracts. Fails when the same event is owned
/// by different participants.
pub fn compose(c1: &Contract, c2: &Contract) -> Result<Contract> {
    let mut out = c1.clone();
    for (e, p) in &c2.owner {
        match out.owner.get(e) {
            Some(prev) if prev != p => {
                return Err(Error::OwnershipClash {
                    event: e.clone(),
                    first: prev.clone(),
                    second: p.clone(),
                })
            }
            _ => {
                out.owner.insert(e.clone(), p.clone());
            }
        }
    }
    out.participants.extend(c2.participants.iter().cloned());
    out.clauses.extend(c2.clauses.iter().cloned());
    out.goals.extend(c2.goals.iter().cloned());
    Ok(out)
}

/// Composes a sequence of contracts left to right. The empty sequence yields
/// the empty contract.
pub fn compose_all<'a>(contracts: impl IntoIterator<Item = &'a Contract>) -> Result<Contract> {
    contracts
        .into_iter()
        .try_fold(Contract::default(), |acc, c| compose(&acc, c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Diagnostic {
    /// The participant has no goal set, so it can never be fulfilled.
    NeverFulfilled { participant: ParticipantId },
    /// A standard clause whose target is among its own premises never fires.
    SelfEnabling { clause: Clause },
    /// `clause` is implied by `by`, which has the same kind and target and
    /// fewer premises.
    Subsumed { clause: Clause, by: Clause },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NeverFulfilled { participant } => write!(
                f,
                "warning: participant {participant} has no goal and is never fulfilled"
            ),
            Diagnostic::SelfEnabling { clause } => write!(
                f,
                "warning: clause `{clause}` requires its own target and can never fire"
            ),
            Diagnostic::Subsumed { clause, by } => {
                write!(f, "warning: clause `{clause}` is subsumed by `{by}`")
            }
        }
    }
}

/// Warnings about a contract. Never fails; an empty list means nothing
/// suspicious was found.
pub fn validate(c: &Contract) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for p in &c.participants {
        if c.goals_of(p).next().is_none() {
            out.push(Diagnostic::NeverFulfilled {
                participant: p.clone(),
            });
        }
    }
    for cl in &c.clauses {
        if cl.kind == EnablingKind::Standard && cl.premises.contains(&cl.target) {
            out.push(Diagnostic::SelfEnabling { clause: cl.clone() });
        }
        let by = c.clauses.iter().find(|other| {
            other.kind == cl.kind
                && other.target == cl.target
                && other.premises.len() < cl.premises.len()
                && other.premises.is_subset(&cl.premises)
        });
        if let Some(by) = by {
            out.push(Diagnostic::Subsumed {
                clause: cl.clone(),
                by: by.clone(),
            });
        }
    }
    out
}
