//! Shared helpers for the property suites.

#![allow(dead_code)]

pub mod oracle;

#[allow(unused_imports)]
pub use oracle::*;

use oncredit_core::{Contract, ContractBuilder, State};
use proptest::prelude::*;

/// Event index, circular flag, premise bitmask.
type RawClause = (usize, bool, u8);

/// Contracts over `e0..e{n-1}` and `P0..P{k-1}` with shrinkable structure.
pub fn arb_contract(max_events: usize) -> impl Strategy<Value = Contract> {
    (1..=max_events, 1..=4usize)
        .prop_flat_map(|(n, k)| {
            let k = k.min(n);
            (
                Just(n),
                Just(k),
                proptest::collection::vec(0..k, n),
                proptest::collection::vec((0..n, any::<bool>(), any::<u8>()), 0..=6),
                proptest::collection::vec((0..k, any::<u8>()), 0..=6),
            )
        })
        .prop_map(|(n, k, owners, clauses, goals)| build_raw(n, k, &owners, &clauses, &goals))
}

fn mask_events(n: usize, mask: u8, limit: usize) -> Vec<String> {
    (0..n)
        .filter(|i| mask & (1 << i) != 0)
        .take(limit)
        .map(|i| format!("e{i}"))
        .collect()
}

fn build_raw(
    n: usize,
    k: usize,
    owners: &[usize],
    clauses: &[RawClause],
    goals: &[(usize, u8)],
) -> Contract {
    let mut b = ContractBuilder::default();
    for p in 0..k {
        b = b.participant(&format!("P{p}"));
    }
    for (i, o) in owners.iter().enumerate() {
        b = b.event(&format!("e{i}"), &format!("P{o}"));
    }
    for &(target, circular, mask) in clauses {
        let premises = mask_events(n, mask, 2);
        let refs = premises.iter().map(String::as_str);
        let t = format!("e{target}");
        b = if circular {
            b.circular(refs, &t)
        } else {
            b.enable(refs, &t)
        };
    }
    for &(p, mask) in goals {
        let goal = mask_events(n, mask, 2);
        b = b.goal(&format!("P{p}"), goal.iter().map(String::as_str));
    }
    b.build().expect("generated contracts are well formed")
}

/// Contract together with one of its states.
pub fn arb_contract_and_state(max_events: usize) -> impl Strategy<Value = (Contract, State)> {
    arb_contract(max_events).prop_flat_map(|c| {
        let n = c.event_count();
        (Just(c), 0u32..1 << n).prop_map(|(c, mask)| {
            let x = c
                .events()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| e.clone())
                .collect();
            (c, x)
        })
    })
}

/// Two contracts drawing events from a shared pool whose owners are fixed by
/// index, so composition is always defined.
pub fn arb_compatible_contracts(count: usize) -> impl Strategy<Value = Vec<Contract>> {
    let one = (
        any::<u8>(),
        proptest::collection::vec((0..6usize, any::<bool>(), any::<u8>()), 0..=4),
        proptest::collection::vec((0..3usize, any::<u8>()), 0..=3),
    )
        .prop_map(|(event_mask, clauses, goals)| {
            let used: Vec<usize> = (0..6).filter(|i| event_mask & (1 << i) != 0).collect();
            let mut b = ContractBuilder::default();
            for p in 0..3 {
                b = b.participant(&format!("P{p}"));
            }
            if used.is_empty() {
                return b.build().unwrap();
            }
            for i in &used {
                b = b.event(&format!("e{i}"), &format!("P{}", i % 3));
            }
            let pick = |mask: u8| -> Vec<String> {
                used.iter()
                    .filter(|i| mask & (1 << **i) != 0)
                    .take(2)
                    .map(|i| format!("e{i}"))
                    .collect()
            };
            for (t, circular, mask) in clauses {
                let target = format!("e{}", used[t % used.len()]);
                let premises = pick(mask);
                let refs = premises.iter().map(String::as_str);
                b = if circular {
                    b.circular(refs, &target)
                } else {
                    b.enable(refs, &target)
                };
            }
            for (p, mask) in goals {
                let goal = pick(mask);
                b = b.goal(&format!("P{p}"), goal.iter().map(String::as_str));
            }
            b.build().unwrap()
        });
    proptest::collection::vec(one, count)
}
