use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use oncredit_core::EventId;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How a participant reacts to the duties it is notified of.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Performs every notified duty.
    #[default]
    Honest,
    /// Performs only the least notified duty each round.
    LazyHonest,
    /// Honest during the first `k` rounds, idle afterwards.
    DishonestAfter(usize),
}

impl Strategy {
    /// Events performed in round `round` (counted from 1) given the notified
    /// duties, in the order they are performed.
    pub fn respond(&self, round: usize, duties: &BTreeSet<EventId>) -> Vec<EventId> {
        match *self {
            Strategy::Honest => duties.iter().cloned().collect(),
            Strategy::LazyHonest => duties.iter().take(1).cloned().collect(),
            Strategy::DishonestAfter(k) if round <= k => duties.iter().cloned().collect(),
            Strategy::DishonestAfter(_) => Vec::new(),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Honest => f.write_str("honest"),
            Strategy::LazyHonest => f.write_str("lazy"),
            Strategy::DishonestAfter(k) => write!(f, "dishonest-after:{k}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown strategy `{0}` (expected honest, lazy or dishonest-after:K)")]
pub struct StrategyParseError(String);

impl FromStr for Strategy {
    type Err = StrategyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "honest" => return Ok(Strategy::Honest),
            "lazy" | "lazy-honest" => return Ok(Strategy::LazyHonest),
            _ => {}
        }
        s.strip_prefix("dishonest-after:")
            .and_then(|k| k.parse().ok())
            .map(Strategy::DishonestAfter)
            .ok_or_else(|| StrategyParseError(s.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn duties(es: &[&str]) -> BTreeSet<EventId> {
        es.iter().map(|e| EventId::from(*e)).collect()
    }

    #[test]
    fn responses() {
        let d = duties(&["y", "x"]);
        assert_eq!(
            Strategy::Honest.respond(5, &d),
            vec!["x".into(), "y".into()]
        );
        assert_eq!(
            Strategy::LazyHonest.respond(1, &d),
            vec![EventId::from("x")]
        );
        assert_eq!(Strategy::DishonestAfter(2).respond(2, &d).len(), 2);
        assert!(Strategy::DishonestAfter(2).respond(3, &d).is_empty());
        assert!(Strategy::DishonestAfter(0).respond(1, &d).is_empty());
    }

    #[test]
    fn parsing() {
        for s in ["honest", "lazy", "dishonest-after:0", "dishonest-after:12"] {
            assert_eq!(s.parse::<Strategy>().unwrap().to_string(), s);
        }
        assert_eq!("lazy-honest".parse(), Ok(Strategy::LazyHonest));
        assert!("dishonest-after:".parse::<Strategy>().is_err());
        assert!("dishonest-after:-1".parse::<Strategy>().is_err());
        assert!("nice".parse::<Strategy>().is_err());
    }
}
