//! Seeded generation of small random contracts for property checks and
//! cross-validation runs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Clause, Contract, EnablingKind, EventId, GoalSet, ParticipantId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusParams {
    pub max_events: usize,
    pub max_participants: usize,
    pub max_clauses: usize,
    pub max_premises: usize,
    pub max_goal_size: usize,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            max_events: 5,
            max_participants: 4,
            max_clauses: 6,
            max_premises: 2,
            max_goal_size: 2,
        }
    }
}

fn pick_events(
    rng: &mut impl Rng,
    events: &[EventId],
    max: usize,
) -> std::collections::BTreeSet<EventId> {
    let n = rng.gen_range(0..=max.min(events.len()));
    events.choose_multiple(rng, n).cloned().collect()
}

/// One random contract. Events are `e0, e1, ...`, participants `P0, P1, ...`.
/// Every participant gets one or two goal sets, except that roughly one in
/// twenty participants gets none.
pub fn random_contract(rng: &mut impl Rng, params: &CorpusParams) -> Contract {
    let n_events = rng.gen_range(1..=params.max_events.max(1));
    let n_participants = rng.gen_range(1..=params.max_participants.clamp(1, n_events));
    let events: Vec<EventId> = (0..n_events)
        .map(|i| EventId::new(format!("e{i}")))
        .collect();
    let participants: Vec<ParticipantId> = (0..n_participants)
        .map(|i| ParticipantId::new(format!("P{i}")))
        .collect();

    let mut c = Contract {
        participants: participants.iter().cloned().collect(),
        ..Contract::default()
    };
    for (i, e) in events.iter().enumerate() {
        // The first events cover every participant once.
        let owner = if i < n_participants {
            participants[i].clone()
        } else {
            participants.choose(rng).expect("nonempty").clone()
        };
        c.owner.insert(e.clone(), owner);
    }
    for _ in 0..rng.gen_range(0..=params.max_clauses) {
        let kind = if rng.gen_bool(0.5) {
            EnablingKind::Standard
        } else {
            EnablingKind::Circular
        };
        c.clauses.insert(Clause {
            target: events.choose(rng).expect("nonempty").clone(),
            kind,
            premises: pick_events(rng, &events, params.max_premises),
        });
    }
    for p in &participants {
        if rng.gen_ratio(1, 20) {
            continue;
        }
        for _ in 0..rng.gen_range(1..=2) {
            c.goals.insert(GoalSet {
                participant: p.clone(),
                goal: pick_events(rng, &events, params.max_goal_size),
            });
        }
    }
    c
}

/// `count` contracts drawn from a generator seeded with `seed`.
pub fn corpus(seed: u64, count: usize, params: &CorpusParams) -> Vec<Contract> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_contract(&mut rng, params))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_contract, render};

    #[test]
    fn corpus_is_deterministic_and_within_bounds() {
        let params = CorpusParams::default();
        let a = corpus(7, 50, &params);
        assert_eq!(a, corpus(7, 50, &params));
        for c in &a {
            assert!(c.event_count() <= 5);
            assert!(c.clauses().len() <= 6);
            assert!(c.clauses().iter().all(|cl| cl.premises.len() <= 2));
            assert_eq!(&parse_contract(&render(c)).unwrap(), c);
        }
    }
}
