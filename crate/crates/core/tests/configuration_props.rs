mod common;

use common::*;
use oncredit_core::{
    enumerate_configurations, is_configuration, is_x_configuration, maximal_configuration,
    reachable_events, reachable_with_credit, State, DEFAULT_ENUMERATION_CAP,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn greedy_matches_factorial_search((c, x) in arb_contract_and_state(6)) {
        let greedy = is_configuration(&c, &x);
        prop_assert_eq!(greedy.is_some(), ordering_exists(&c, &x));
        if let Some(w) = greedy {
            prop_assert!(w.validate(&c, &x, &State::empty()));
        }
    }

    #[test]
    fn x_configuration_matches_factorial_search((c, x) in arb_contract_and_state(5), credit_mask in any::<u8>()) {
        let credit: State = x
            .iter()
            .enumerate()
            .filter(|(i, _)| credit_mask & (1 << i) != 0)
            .map(|(_, e)| e.clone())
            .collect();
        let w = is_x_configuration(&c, &credit, &x);
        prop_assert_eq!(w.is_some(), x_ordering_exists(&c, &credit, &x));
        if let Some(w) = w {
            prop_assert!(w.validate(&c, &x, &credit));
        }
    }

    #[test]
    fn empty_credit_is_plain_configuration((c, x) in arb_contract_and_state(6)) {
        prop_assert_eq!(
            is_x_configuration(&c, &State::empty(), &x).is_some(),
            is_configuration(&c, &x).is_some()
        );
    }

    #[test]
    fn union_of_configurations_is_configuration((c, _) in arb_contract_and_state(6)) {
        let confs: Vec<State> = enumerate_configurations(&c, DEFAULT_ENUMERATION_CAP).unwrap().into_iter().collect();
        for a in &confs {
            for b in &confs {
                prop_assert!(is_configuration(&c, &a.union(b)).is_some());
            }
        }
    }

    #[test]
    fn reachable_is_union_of_configurations((c, _) in arb_contract_and_state(6)) {
        let confs = enumerate_configurations(&c, DEFAULT_ENUMERATION_CAP).unwrap();
        let union: State = confs.iter().flat_map(|s| s.iter().cloned()).collect();
        prop_assert_eq!(&reachable_events(&c), &union);
        prop_assert_eq!(&union, &brute_reachable(&c));
        let brute: std::collections::BTreeSet<State> = brute_configurations(&c).into_iter().collect();
        prop_assert_eq!(confs, brute);
    }

    #[test]
    fn maximal_configuration_covers_reachable_subsets((c, x) in arb_contract_and_state(6)) {
        let m = maximal_configuration(&c);
        prop_assert!(is_configuration(&c, &m).is_some());
        let reach = reachable_events(&c);
        let sub: State = x.iter().filter(|e| reach.contains(e)).cloned().collect();
        prop_assert!(sub.is_subset(&m));
    }

    #[test]
    fn credit_reachability_matches_oracle((c, x) in arb_contract_and_state(5)) {
        prop_assert_eq!(reachable_with_credit(&c, &x).unwrap(), brute_reachable_with_credit(&c, &x));
    }

    #[test]
    fn credit_reachability_is_monotone((c, x) in arb_contract_and_state(6), extra in any::<u8>()) {
        let y: State = x
            .iter()
            .cloned()
            .chain(c.events().enumerate().filter(|(i, _)| extra & (1 << i) != 0).map(|(_, e)| e.clone()))
            .collect();
        let rx = reachable_with_credit(&c, &x).unwrap();
        let ry = reachable_with_credit(&c, &y).unwrap();
        prop_assert!(x.is_subset(&rx));
        prop_assert!(rx.is_subset(&ry));
    }
}

#[test]
fn fixtures() {
    let toys = toys();
    let expected: std::collections::BTreeSet<State> =
        [st(&[]), st(&["a", "b", "c"])].into_iter().collect();
    assert_eq!(enumerate_configurations(&toys, 20).unwrap(), expected);

    let hs = handshake();
    let expected: std::collections::BTreeSet<State> =
        [st(&[]), st(&["a", "b"])].into_iter().collect();
    assert_eq!(enumerate_configurations(&hs, 20).unwrap(), expected);
    assert!(is_configuration(&hs, &st(&["a"])).is_none());
    assert!(is_configuration(&hs, &st(&["b"])).is_none());

    let v = toys_standard_variant();
    assert!(is_configuration(&v, &st(&["a", "b", "c"])).is_none());
    assert!(reachable_events(&v).is_empty());

    assert_eq!(
        maximal_configuration(&a0_a3()),
        st(&["a0", "a1", "a2", "a3"])
    );
}

#[test]
fn corpus_oracles() {
    for c in small_corpus(11, 300) {
        let brute = brute_configurations(&c);
        let confs = enumerate_configurations(&c, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(confs.len(), brute.len());
        assert_eq!(reachable_events(&c), brute_reachable(&c));
    }
}
