//! Proof trees produced by the prover, and a node-by-node checker.
//!
//! Formulas are stored once in a table; sequents refer to them by index.
//! Steps are listed so that every premise precedes the step that uses it,
//! which lets one subproof be shared by several steps.

use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::formula::Formula;
use crate::model::{EventId, ParticipantId};

pub type FormulaRef = u32;

/// One formula constructor whose children are table indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormulaNode {
    Atom(EventId),
    Truth,
    Conj(FormulaRef, FormulaRef),
    Impl(FormulaRef, FormulaRef),
    CImpl(FormulaRef, FormulaRef),
    Says(ParticipantId, FormulaRef),
}

/// Sequent rules of the calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `Γ, φ ⊢ φ`
    Id,
    /// `Γ ⊢ T`
    TruthR,
    AndR,
    AndL,
    ImplR,
    ImplL,
    /// `Γ ⊢ q` gives `Γ ⊢ p -->> q`.
    CImplR,
    /// `Γ, p-->>q, a ⊢ p` and `Γ, p-->>q, q ⊢ b` give `Γ, p-->>q ⊢ a -->> b`.
    CImplCImpl,
    /// `Γ, p-->>q, r ⊢ p` and `Γ, p-->>q, q ⊢ r` give `Γ, p-->>q ⊢ r`.
    CImplL,
    /// `Γ ⊢ φ` gives `Γ ⊢ A says φ`.
    SaysR,
    /// `Γ, A says φ, φ ⊢ A says ψ` gives `Γ, A says φ ⊢ A says ψ`.
    SaysL,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Id => "id",
            Rule::TruthR => "true-R",
            Rule::AndR => "and-R",
            Rule::AndL => "and-L",
            Rule::ImplR => "impl-R",
            Rule::ImplL => "impl-L",
            Rule::CImplR => "cimpl-R",
            Rule::CImplCImpl => "cimpl-cimpl",
            Rule::CImplL => "cimpl-L",
            Rule::SaysR => "says-R",
            Rule::SaysL => "says-L",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub rule: Rule,
    /// Sorted, duplicate-free.
    pub context: Vec<FormulaRef>,
    pub goal: FormulaRef,
    pub principal: Option<FormulaRef>,
    /// Indices of earlier steps.
    pub premises: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub formulas: Vec<FormulaNode>,
    pub steps: Vec<ProofStep>,
    pub root: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofCheckError {
    #[error("formula table entry {0} is malformed")]
    BadFormula(usize),
    #[error("formula table entry {0} duplicates an earlier entry")]
    DuplicateFormula(usize),
    #[error("step {0} refers to a missing formula or premise")]
    Dangling(usize),
    #[error("step {step} is not a valid application of {rule}")]
    BadStep { step: usize, rule: Rule },
    #[error("root index is out of range")]
    BadRoot,
}

impl Proof {
    pub fn root_step(&self) -> &ProofStep {
        &self.steps[self.root]
    }

    /// Rebuilds the formula at table index `r`.
    pub fn formula(&self, r: FormulaRef) -> Formula {
        match &self.formulas[r as usize] {
            FormulaNode::Atom(e) => Formula::Atom(e.clone()),
            FormulaNode::Truth => Formula::Truth,
            FormulaNode::Conj(a, b) => Formula::conj(self.formula(*a), self.formula(*b)),
            FormulaNode::Impl(a, b) => Formula::implies(self.formula(*a), self.formula(*b)),
            FormulaNode::CImpl(a, b) => Formula::cimplies(self.formula(*a), self.formula(*b)),
            FormulaNode::Says(p, a) => Formula::says(p, self.formula(*a)),
        }
    }

    /// Number of steps reachable from the root.
    pub fn size(&self) -> usize {
        let mut seen = HashSet::new();
        let mut stack = vec![self.root];
        while let Some(i) = stack.pop() {
            if seen.insert(i) {
                stack.extend(self.steps[i].premises.iter().copied());
            }
        }
        seen.len()
    }

    /// Validates the formula table and every step against its rule.
    pub fn check(&self) -> Result<(), ProofCheckError> {
        let mut seen = HashSet::new();
        for (i, node) in self.formulas.iter().enumerate() {
            let below = |r: &FormulaRef| (*r as usize) < i;
            let well_formed = match node {
                FormulaNode::Atom(_) | FormulaNode::Truth => true,
                FormulaNode::Conj(a, b) | FormulaNode::Impl(a, b) | FormulaNode::CImpl(a, b) => {
                    below(a) && below(b)
                }
                FormulaNode::Says(_, a) => below(a),
            };
            if !well_formed {
                return Err(ProofCheckError::BadFormula(i));
            }
            if !seen.insert(node) {
                return Err(ProofCheckError::DuplicateFormula(i));
            }
        }
        if self.root >= self.steps.len() {
            return Err(ProofCheckError::BadRoot);
        }
        for i in 0..self.steps.len() {
            self.check_step(i)?;
        }
        Ok(())
    }

    fn check_step(&self, i: usize) -> Result<(), ProofCheckError> {
        let step = &self.steps[i];
        let n = self.formulas.len() as FormulaRef;
        let refs_ok = step.goal < n
            && step.principal.is_none_or(|p| p < n)
            && step.context.iter().all(|r| *r < n)
            && step.context.windows(2).all(|w| w[0] < w[1])
            && step.premises.iter().all(|p| *p < i);
        if !refs_ok {
            return Err(ProofCheckError::Dangling(i));
        }
        let ctx: BTreeSet<FormulaRef> = step.context.iter().copied().collect();
        let node = |r: FormulaRef| &self.formulas[r as usize];
        let prem = |k: usize| -> Option<(BTreeSet<FormulaRef>, FormulaRef)> {
            let s = &self.steps[*step.premises.get(k)?];
            Some((s.context.iter().copied().collect(), s.goal))
        };
        let extended = |extra: &[FormulaRef]| -> BTreeSet<FormulaRef> {
            let mut c = ctx.clone();
            c.extend(extra.iter().copied());
            c
        };
        let principal_in_ctx = step.principal.filter(|p| ctx.contains(p));
        let arity = step.premises.len();

        let valid = match step.rule {
            Rule::Id => arity == 0 && ctx.contains(&step.goal),
            Rule::TruthR => arity == 0 && *node(step.goal) == FormulaNode::Truth,
            Rule::AndR => match node(step.goal) {
                FormulaNode::Conj(a, b) => {
                    arity == 2
                        && prem(0) == Some((ctx.clone(), *a))
                        && prem(1) == Some((ctx.clone(), *b))
                }
                _ => false,
            },
            Rule::ImplR => match node(step.goal) {
                FormulaNode::Impl(a, b) => arity == 1 && prem(0) == Some((extended(&[*a]), *b)),
                _ => false,
            },
            Rule::CImplR => match node(step.goal) {
                FormulaNode::CImpl(_, q) => arity == 1 && prem(0) == Some((ctx.clone(), *q)),
                _ => false,
            },
            Rule::SaysR => match node(step.goal) {
                FormulaNode::Says(_, body) => arity == 1 && prem(0) == Some((ctx.clone(), *body)),
                _ => false,
            },
            Rule::AndL => match principal_in_ctx.map(node) {
                Some(FormulaNode::Conj(a, b)) => {
                    arity == 1 && prem(0) == Some((extended(&[*a, *b]), step.goal))
                }
                _ => false,
            },
            Rule::ImplL => match principal_in_ctx.map(node) {
                Some(FormulaNode::Impl(p, q)) => {
                    arity == 2
                        && prem(0) == Some((ctx.clone(), *p))
                        && prem(1) == Some((extended(&[*q]), step.goal))
                }
                _ => false,
            },
            Rule::CImplL => match principal_in_ctx.map(node) {
                Some(FormulaNode::CImpl(p, q)) => {
                    arity == 2
                        && prem(0) == Some((extended(&[step.goal]), *p))
                        && prem(1) == Some((extended(&[*q]), step.goal))
                }
                _ => false,
            },
            Rule::CImplCImpl => match (principal_in_ctx.map(node), node(step.goal)) {
                (Some(FormulaNode::CImpl(p, q)), FormulaNode::CImpl(a, b)) => {
                    arity == 2
                        && prem(0) == Some((extended(&[*a]), *p))
                        && prem(1) == Some((extended(&[*q]), *b))
                }
                _ => false,
            },
            Rule::SaysL => match (principal_in_ctx.map(node), node(step.goal)) {
                (Some(FormulaNode::Says(owner, body)), FormulaNode::Says(goal_owner, _)) => {
                    owner == goal_owner
                        && arity == 1
                        && prem(0) == Some((extended(&[*body]), step.goal))
                }
                _ => false,
            },
        };
        if valid {
            Ok(())
        } else {
            Err(ProofCheckError::BadStep {
                step: i,
                rule: step.rule,
            })
        }
    }

    /// Human-readable listing: one line per step reachable from the root,
    /// premises first.
    pub fn render(&self) -> String {
        let mut order = Vec::new();
        let mut seen = HashSet::new();
        self.post_order(self.root, &mut seen, &mut order);
        let number: std::collections::HashMap<usize, usize> =
            order.iter().enumerate().map(|(k, i)| (*i, k + 1)).collect();
        let mut out = String::new();
        for i in order {
            let s = &self.steps[i];
            write!(out, "#{} {}", number[&i], s.rule).unwrap();
            if let Some(p) = s.principal {
                write!(out, " on {}", self.formula(p)).unwrap();
            }
            write!(out, "  |-  {}", self.formula(s.goal)).unwrap();
            if !s.premises.is_empty() {
                let ps: Vec<String> = s
                    .premises
                    .iter()
                    .map(|p| format!("#{}", number[p]))
                    .collect();
                write!(out, "  from {}", ps.join(", ")).unwrap();
            }
            out.push('\n');
        }
        out
    }

    fn post_order(&self, i: usize, seen: &mut HashSet<usize>, out: &mut Vec<usize>) {
        if !seen.insert(i) {
            return;
        }
        for p in &self.steps[i].premises {
            self.post_order(*p, seen, out);
        }
        out.push(i);
    }
}
