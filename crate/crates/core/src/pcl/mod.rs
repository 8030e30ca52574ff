//! Propositional contract logic: the contract encoding and a sequent prover.
//!
//! A clause `{d1,...,dn} ∘ a` is encoded as
//! `π(a) says ((π(d1) says d1 /\ ... /\ π(dn) says dn) op a)` where `op` is
//! `->` for standard and `-->>` for circular enablings. An event `e` is
//! reachable exactly when `π(e) says e` follows from the encoding, which
//! [`provable_atom`] decides by proof search and [`semantic_provable`]
//! decides through credit reachability.

mod formula;
mod proof;
mod prover;

pub use formula::{parse_formula, Formula, FormulaParseError};
pub use proof::{FormulaNode, FormulaRef, Proof, ProofCheckError, ProofStep, Rule};
pub use prover::{prove, ProofResult, ProofStatus, DEFAULT_BUDGET};

use crate::configurations::reachable_with_credit;
use crate::error::Result;
use crate::model::{Clause, Contract, EnablingKind, EventId, State};

fn says_event(c: &Contract, e: &EventId) -> Formula {
    let owner = c.owner(e).expect("clause events are declared");
    Formula::says(owner, Formula::Atom(e.clone()))
}

fn sorted_conj(mut operands: Vec<Formula>) -> Formula {
    operands.sort();
    Formula::conj_all(operands)
}

/// Encoding of one clause.
pub fn encode_clause(c: &Contract, clause: &Clause) -> Formula {
    let premises = sorted_conj(clause.premises.iter().map(|d| says_event(c, d)).collect());
    let target = Formula::Atom(clause.target.clone());
    let body = match clause.kind {
        EnablingKind::Standard => Formula::implies(premises, target),
        EnablingKind::Circular => Formula::cimplies(premises, target),
    };
    let owner = c.owner(&clause.target).expect("clause events are declared");
    Formula::says(owner, body)
}

/// Conjunction of the clause encodings, right-associated over sorted
/// operands; `T` for a contract without clauses.
pub fn encode(c: &Contract) -> Formula {
    sorted_conj(c.clauses().iter().map(|cl| encode_clause(c, cl)).collect())
}

/// `π(e) says e` for each event of `hypotheses`, as proof context.
pub fn hypotheses(c: &Contract, hypotheses: &State) -> Result<Vec<Formula>> {
    c.require_state(hypotheses)?;
    Ok(hypotheses.iter().map(|d| says_event(c, d)).collect())
}

/// Proof search for `[c] ⊢ π(e) says e`.
pub fn provable_atom(c: &Contract, e: &EventId, budget: usize) -> Result<ProofResult> {
    provable_with_hypotheses(c, &State::empty(), e, budget)
}

/// Proof search for `[c], {π(d) says d | d ∈ hyps} ⊢ π(e) says e`.
pub fn provable_with_hypotheses(
    c: &Contract,
    hyps: &State,
    e: &EventId,
    budget: usize,
) -> Result<ProofResult> {
    c.require_event(e)?;
    let mut context = hypotheses(c, hyps)?;
    context.push(encode(c));
    Ok(prove(&context, &says_event(c, e), budget))
}

/// Decides provability on the encoded fragment through credit reachability:
/// true iff `goal ⊆ R(hypotheses)`.
pub fn semantic_provable(c: &Contract, hypotheses: &State, goal: &State) -> Result<bool> {
    c.require_state(goal)?;
    Ok(goal.is_subset(&reachable_with_credit(c, hypotheses)?))
}
