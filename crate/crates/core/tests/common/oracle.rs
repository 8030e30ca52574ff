//! Brute-force reference implementations and fixtures. Nothing here calls
//! the library's decision procedures; enabling and fulfillment are read
//! straight off the clause and goal lists.

#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use oncredit_core::corpus::{corpus, CorpusParams};
use oncredit_core::{Contract, ContractBuilder, EnablingKind, EventId, ParticipantId, State};

pub fn st(events: &[&str]) -> State {
    events.iter().copied().collect()
}

pub fn clause_enables(
    c: &Contract,
    kind: EnablingKind,
    from: &BTreeSet<EventId>,
    e: &EventId,
) -> bool {
    c.clauses()
        .iter()
        .any(|cl| cl.kind == kind && &cl.target == e && cl.premises.is_subset(from))
}

pub fn goal_met(c: &Contract, p: &ParticipantId, x: &BTreeSet<EventId>) -> bool {
    c.goals()
        .iter()
        .any(|g| &g.participant == p && g.goal.is_subset(x))
}

/// Tries every ordering of `set`.
pub fn ordering_exists(c: &Contract, set: &State) -> bool {
    let whole = set.events();
    let n = whole.len();
    whole.iter().permutations(n).any(|order| {
        let mut prefix = BTreeSet::new();
        order.into_iter().all(|e| {
            let ok = clause_enables(c, EnablingKind::Standard, &prefix, e)
                || clause_enables(c, EnablingKind::Circular, whole, e);
            prefix.insert(e.clone());
            ok
        })
    })
}

pub fn subsets(c: &Contract) -> Vec<State> {
    let events: Vec<EventId> = c.events().cloned().collect();
    (0u32..1 << events.len())
        .map(|mask| {
            events
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

pub fn brute_configurations(c: &Contract) -> Vec<State> {
    subsets(c)
        .into_iter()
        .filter(|s| ordering_exists(c, s))
        .collect()
}

pub fn brute_reachable(c: &Contract) -> State {
    brute_configurations(c)
        .iter()
        .flat_map(|s| s.iter().cloned())
        .collect()
}

/// Ordering search where events of `credit` need no justification.
pub fn x_ordering_exists(c: &Contract, credit: &State, set: &State) -> bool {
    let whole = set.events();
    let n = whole.len();
    whole.iter().permutations(n).any(|order| {
        let mut prefix = BTreeSet::new();
        order.into_iter().all(|e| {
            let ok = credit.contains(e)
                || clause_enables(c, EnablingKind::Standard, &prefix, e)
                || clause_enables(c, EnablingKind::Circular, whole, e);
            prefix.insert(e.clone());
            ok
        })
    })
}

/// Union of all X-configurations containing the credit set.
pub fn brute_reachable_with_credit(c: &Contract, credit: &State) -> State {
    subsets(c)
        .into_iter()
        .filter(|s| credit.is_subset(s) && x_ordering_exists(c, credit, s))
        .flat_map(|s| s.into_events())
        .collect()
}

pub fn brute_agreement(c: &Contract) -> bool {
    brute_configurations(c).iter().any(|conf| {
        c.participants()
            .iter()
            .all(|p| goal_met(c, p, conf.events()))
    })
}

/// Duties with the existential over every configuration.
pub fn existential_duties(
    c: &Contract,
    confs: &[State],
    p: &ParticipantId,
    x: &State,
) -> BTreeSet<EventId> {
    let x_set = x.events();
    c.events()
        .filter(|e| !x.contains(e) && c.owner(e) == Some(p))
        .filter(|e| {
            confs.iter().any(|conf| {
                if !conf.contains(e) {
                    return false;
                }
                if clause_enables(c, EnablingKind::Standard, x_set, e) {
                    return true;
                }
                let blocked = conf
                    .iter()
                    .filter(|e2| !x.contains(e2))
                    .any(|e2| clause_enables(c, EnablingKind::Standard, x_set, e2));
                let scope: BTreeSet<EventId> = conf.events().union(x_set).cloned().collect();
                !blocked && clause_enables(c, EnablingKind::Circular, &scope, e)
            })
        })
        .cloned()
        .collect()
}

pub fn toys() -> Contract {
    ContractBuilder::default()
        .participant("A")
        .participant("B")
        .participant("C")
        .event("a", "A")
        .event("b", "B")
        .event("c", "C")
        .enable(["b"], "a")
        .enable(["c"], "b")
        .circular(["a", "b"], "c")
        .goal("A", ["b"])
        .goal("B", ["c"])
        .goal("C", ["a", "b"])
        .build()
        .unwrap()
}

pub fn toys_standard_variant() -> Contract {
    ContractBuilder::default()
        .participant("A")
        .participant("B")
        .participant("C")
        .event("a", "A")
        .event("b", "B")
        .event("c", "C")
        .enable(["b"], "a")
        .enable(["c"], "b")
        .enable(["a", "b"], "c")
        .goal("A", ["b"])
        .goal("B", ["c"])
        .goal("C", ["a", "b"])
        .build()
        .unwrap()
}

pub fn handshake() -> Contract {
    ContractBuilder::default()
        .participant("A")
        .participant("B")
        .event("a", "A")
        .event("b", "B")
        .circular(["b"], "a")
        .circular(["a"], "b")
        .goal("A", ["b"])
        .goal("B", ["a"])
        .build()
        .unwrap()
}

pub fn a0_a3() -> Contract {
    ContractBuilder::default()
        .participant("A0")
        .participant("A1")
        .participant("A2")
        .participant("A3")
        .event("a0", "A0")
        .event("a1", "A1")
        .event("a2", "A2")
        .event("a3", "A3")
        .circular(["a0", "a1"], "a2")
        .circular(["a0", "a2"], "a1")
        .enable(["a1", "a2"], "a3")
        .enable([], "a0")
        .goal("A0", [])
        .goal("A1", [])
        .goal("A2", [])
        .goal("A3", [])
        .build()
        .unwrap()
}

/// Seeded corpus used by the cross-checks: small enough for factorial and
/// exponential oracles.
pub fn small_corpus(seed: u64, count: usize) -> Vec<Contract> {
    corpus(seed, count, &CorpusParams::default())
}
