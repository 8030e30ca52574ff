//! Goal-directed backward proof search.
//!
//! Contexts are sets that only grow along a branch, and every formula that
//! appears in a premise is a subformula of the root sequent, so the space of
//! sequents is finite. A branch that revisits one of its own ancestors is
//! closed as failed. Invertible rules (`and-L`, `says-L` under a matching
//! goal, `and-R`, `impl-R`) are applied eagerly; the remaining rules are tried
//! in turn over the principal formulas of the context.
//!
//! Failures are cached only when they do not depend on the ancestors above
//! the failing node; proved sequents are always cached.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::formula::Formula;
use super::proof::{FormulaNode, FormulaRef, Proof, ProofStep, Rule};

/// Visited-sequent budget used when none is given.
pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofStatus {
    Proved,
    RefutedBySaturation,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofResult {
    pub status: ProofStatus,
    pub proof: Option<Proof>,
    /// Number of sequents expanded by the search.
    pub visited: usize,
    pub diagnostic: Option<String>,
}

impl ProofResult {
    pub fn is_proved(&self) -> bool {
        self.status == ProofStatus::Proved
    }
}

#[derive(Default)]
struct Table {
    nodes: Vec<FormulaNode>,
    index: HashMap<FormulaNode, FormulaRef>,
}

impl Table {
    fn intern(&mut self, f: &Formula) -> FormulaRef {
        let node = match f {
            Formula::Atom(e) => FormulaNode::Atom(e.clone()),
            Formula::Truth => FormulaNode::Truth,
            Formula::Conj(a, b) => FormulaNode::Conj(self.intern(a), self.intern(b)),
            Formula::Impl(a, b) => FormulaNode::Impl(self.intern(a), self.intern(b)),
            Formula::CImpl(a, b) => FormulaNode::CImpl(self.intern(a), self.intern(b)),
            Formula::Says(p, a) => FormulaNode::Says(p.clone(), self.intern(a)),
        };
        if let Some(r) = self.index.get(&node) {
            return *r;
        }
        let r = self.nodes.len() as FormulaRef;
        self.nodes.push(node.clone());
        self.index.insert(node, r);
        r
    }
}

/// A set of formula references as a fixed-width bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Ctx(Box<[u64]>);

impl Ctx {
    fn new(width: usize) -> Self {
        Ctx(vec![0; width.div_ceil(64)].into_boxed_slice())
    }

    fn contains(&self, r: FormulaRef) -> bool {
        let r = r as usize;
        self.0[r / 64] & (1 << (r % 64)) != 0
    }

    fn insert(&mut self, r: FormulaRef) {
        let r = r as usize;
        self.0[r / 64] |= 1 << (r % 64);
    }

    fn with(&self, extra: &[FormulaRef]) -> Ctx {
        let mut c = self.clone();
        for r in extra {
            c.insert(*r);
        }
        c
    }

    fn iter(&self) -> impl Iterator<Item = FormulaRef> + '_ {
        self.0.iter().enumerate().flat_map(|(w, bits)| {
            (0..64)
                .filter(move |b| bits & (1u64 << b) != 0)
                .map(move |b| (w * 64 + b) as FormulaRef)
        })
    }
}

type Key = (Ctx, FormulaRef);

/// A rule instance: rule, principal formula, premises.
type Alternative = (Rule, Option<FormulaRef>, Vec<(Ctx, FormulaRef)>);

enum Outcome {
    Proved(usize),
    /// Shallowest ancestor depth whose loop check contributed to the
    /// failure; `usize::MAX` when the failure is history-independent.
    Failed(usize),
}

struct Exhausted;

struct Search {
    table: Table,
    budget: usize,
    visited: usize,
    steps: Vec<(Rule, Key, Option<FormulaRef>, Vec<usize>)>,
    proved: HashMap<Key, usize>,
    refuted: HashSet<Key>,
    history: HashMap<Key, usize>,
}

impl Search {
    fn node(&self, r: FormulaRef) -> &FormulaNode {
        &self.table.nodes[r as usize]
    }

    fn step(
        &mut self,
        rule: Rule,
        key: &Key,
        principal: Option<FormulaRef>,
        premises: Vec<usize>,
    ) -> usize {
        self.steps.push((rule, key.clone(), principal, premises));
        self.steps.len() - 1
    }

    fn prove(&mut self, ctx: Ctx, goal: FormulaRef, depth: usize) -> Result<Outcome, Exhausted> {
        let key = (ctx, goal);
        if let Some(&s) = self.proved.get(&key) {
            return Ok(Outcome::Proved(s));
        }
        if self.refuted.contains(&key) {
            return Ok(Outcome::Failed(usize::MAX));
        }
        if let Some(&d) = self.history.get(&key) {
            return Ok(Outcome::Failed(d));
        }
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Exhausted);
        }
        self.history.insert(key.clone(), depth);
        let result = self.expand(&key, depth);
        self.history.remove(&key);
        let outcome = result?;
        match outcome {
            Outcome::Proved(s) => {
                self.proved.insert(key, s);
                Ok(Outcome::Proved(s))
            }
            Outcome::Failed(d) if d >= depth => {
                self.refuted.insert(key);
                Ok(Outcome::Failed(usize::MAX))
            }
            failed => Ok(failed),
        }
    }

    /// Proves every premise in order; `Err(depth)` carries the failure.
    fn all(
        &mut self,
        premises: Vec<(Ctx, FormulaRef)>,
        depth: usize,
    ) -> Result<Result<Vec<usize>, usize>, Exhausted> {
        let mut out = Vec::with_capacity(premises.len());
        for (ctx, goal) in premises {
            match self.prove(ctx, goal, depth + 1)? {
                Outcome::Proved(s) => out.push(s),
                Outcome::Failed(d) => return Ok(Err(d)),
            }
        }
        Ok(Ok(out))
    }

    fn expand(&mut self, key: &Key, depth: usize) -> Result<Outcome, Exhausted> {
        let (ctx, goal) = (&key.0, key.1);
        let goal_node = self.node(goal).clone();

        if goal_node == FormulaNode::Truth {
            return Ok(Outcome::Proved(self.step(Rule::TruthR, key, None, vec![])));
        }
        if ctx.contains(goal) {
            return Ok(Outcome::Proved(self.step(Rule::Id, key, None, vec![])));
        }

        // Invertible rules: a single premise, and the node fails with it.
        let mut invertible: Option<Alternative> = None;
        for r in ctx.iter() {
            match self.node(r) {
                FormulaNode::Conj(a, b) if !ctx.contains(*a) || !ctx.contains(*b) => {
                    invertible = Some((Rule::AndL, Some(r), vec![(ctx.with(&[*a, *b]), goal)]));
                    break;
                }
                FormulaNode::Says(owner, body) if !ctx.contains(*body) => {
                    if matches!(&goal_node, FormulaNode::Says(goal_owner, _) if goal_owner == owner)
                    {
                        invertible = Some((Rule::SaysL, Some(r), vec![(ctx.with(&[*body]), goal)]));
                        break;
                    }
                }
                _ => {}
            }
        }
        if invertible.is_none() {
            invertible = match goal_node {
                FormulaNode::Conj(a, b) => {
                    Some((Rule::AndR, None, vec![(ctx.clone(), a), (ctx.clone(), b)]))
                }
                FormulaNode::Impl(a, b) => Some((Rule::ImplR, None, vec![(ctx.with(&[a]), b)])),
                _ => None,
            };
        }
        if let Some((rule, principal, premises)) = invertible {
            return Ok(match self.all(premises, depth)? {
                Ok(ps) => Outcome::Proved(self.step(rule, key, principal, ps)),
                Err(d) => Outcome::Failed(d),
            });
        }

        // Non-invertible alternatives.
        let mut options: Vec<Alternative> = Vec::new();
        match goal_node {
            FormulaNode::Says(_, body) => {
                options.push((Rule::SaysR, None, vec![(ctx.clone(), body)]))
            }
            FormulaNode::CImpl(_, q) => options.push((Rule::CImplR, None, vec![(ctx.clone(), q)])),
            _ => {}
        }
        for r in ctx.iter() {
            match *self.node(r) {
                FormulaNode::Impl(p, q) if !ctx.contains(q) => {
                    options.push((
                        Rule::ImplL,
                        Some(r),
                        vec![(ctx.clone(), p), (ctx.with(&[q]), goal)],
                    ));
                }
                FormulaNode::CImpl(p, q) => {
                    if let FormulaNode::CImpl(a, b) = goal_node {
                        options.push((
                            Rule::CImplCImpl,
                            Some(r),
                            vec![(ctx.with(&[a]), p), (ctx.with(&[q]), b)],
                        ));
                    }
                    if !ctx.contains(q) {
                        options.push((
                            Rule::CImplL,
                            Some(r),
                            vec![(ctx.with(&[goal]), p), (ctx.with(&[q]), goal)],
                        ));
                    }
                }
                _ => {}
            }
        }

        let mut loop_depth = usize::MAX;
        for (rule, principal, premises) in options {
            match self.all(premises, depth)? {
                Ok(ps) => return Ok(Outcome::Proved(self.step(rule, key, principal, ps))),
                Err(d) => loop_depth = loop_depth.min(d),
            }
        }
        Ok(Outcome::Failed(loop_depth))
    }

    /// Copies the steps reachable from `root` into a standalone proof, premises
    /// before conclusions.
    fn extract(&self, root: usize) -> Proof {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut steps = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((i, expanded)) = stack.pop() {
            if index.contains_key(&i) {
                continue;
            }
            let premises = &self.steps[i].3;
            if !expanded {
                stack.push((i, true));
                stack.extend(premises.iter().rev().map(|p| (*p, false)));
                continue;
            }
            let (rule, (ctx, goal), principal, premises) = &self.steps[i];
            steps.push(ProofStep {
                rule: *rule,
                context: ctx.iter().collect(),
                goal: *goal,
                principal: *principal,
                premises: premises.iter().map(|p| index[p]).collect(),
            });
            index.insert(i, steps.len() - 1);
        }
        Proof {
            formulas: self.table.nodes.clone(),
            root: index[&root],
            steps,
        }
    }
}

/// Searches for a proof of `context ⊢ goal`, expanding at most `budget`
/// sequents.
pub fn prove<'a>(
    context: impl IntoIterator<Item = &'a Formula>,
    goal: &Formula,
    budget: usize,
) -> ProofResult {
    let mut table = Table::default();
    let refs: Vec<FormulaRef> = context.into_iter().map(|f| table.intern(f)).collect();
    let goal = table.intern(goal);
    let mut ctx = Ctx::new(table.nodes.len());
    for r in refs {
        ctx.insert(r);
    }
    let mut search = Search {
        table,
        budget,
        visited: 0,
        steps: Vec::new(),
        proved: HashMap::new(),
        refuted: HashSet::new(),
        history: HashMap::new(),
    };
    match search.prove(ctx, goal, 0) {
        Ok(Outcome::Proved(root)) => ProofResult {
            status: ProofStatus::Proved,
            proof: Some(search.extract(root)),
            visited: search.visited,
            diagnostic: None,
        },
        Ok(Outcome::Failed(_)) => ProofResult {
            status: ProofStatus::RefutedBySaturation,
            proof: None,
            visited: search.visited,
            diagnostic: None,
        },
        Err(Exhausted) => ProofResult {
            status: ProofStatus::BudgetExhausted,
            proof: None,
            visited: search.visited.min(budget),
            diagnostic: Some(format!(
                "search stopped after {budget} sequents; the sequent may need reasoning outside the supported fragment"
            )),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcl::formula::parse_formula;

    fn run(ctx: &[&str], goal: &str) -> ProofResult {
        let ctx: Vec<Formula> = ctx.iter().map(|s| parse_formula(s).unwrap()).collect();
        let r = prove(&ctx, &parse_formula(goal).unwrap(), DEFAULT_BUDGET);
        if let Some(p) = &r.proof {
            p.check().unwrap();
        }
        r
    }

    #[test]
    fn circular_pair_proves_both() {
        let r = run(&["(a -->> b) /\\ (b -->> a)"], "a /\\ b");
        assert_eq!(r.status, ProofStatus::Proved);
        let r = run(&["a -->> b", "b -->> a"], "a /\\ b");
        assert_eq!(r.status, ProofStatus::Proved);
    }

    #[test]
    fn axioms() {
        assert!(run(&[], "T -->> T").is_proved());
        assert!(run(&[], "(a -->> a) -> a").is_proved());
        assert!(run(&[], "a -> A says a").is_proved());
        assert!(run(&[], "(A says A says a) -> A says a").is_proved());
        assert!(run(&[], "(a -> b) -> (A says a) -> (A says b)").is_proved());
        assert!(run(&[], "(c -> a) -> (a -->> b) -> (b -> d) -> (c -->> d)").is_proved());
    }

    #[test]
    fn standard_circularity_is_refuted() {
        let r = run(&["b -> a", "a -> b"], "a");
        assert_eq!(r.status, ProofStatus::RefutedBySaturation);
    }

    #[test]
    fn nothing_from_nothing() {
        assert_eq!(run(&[], "a").status, ProofStatus::RefutedBySaturation);
        assert_eq!(
            run(&["A says a"], "a").status,
            ProofStatus::RefutedBySaturation
        );
        assert_eq!(
            run(&["A says a"], "B says a").status,
            ProofStatus::RefutedBySaturation
        );
        assert_eq!(
            run(&["a -->> b"], "b").status,
            ProofStatus::RefutedBySaturation
        );
    }

    #[test]
    fn budget_is_reported() {
        let ctx = [
            parse_formula("b -> a").unwrap(),
            parse_formula("a -> b").unwrap(),
        ];
        let r = prove(&ctx, &Formula::atom("a"), 1);
        assert_eq!(r.status, ProofStatus::BudgetExhausted);
        assert!(r.diagnostic.is_some());
    }

    #[test]
    fn tampered_proof_is_rejected() {
        let r = run(&["a -->> b", "b -->> a"], "a /\\ b");
        let mut proof = r.proof.unwrap();
        let id = proof.steps.iter().position(|s| s.rule == Rule::Id).unwrap();
        proof.steps[id].context.clear();
        assert!(proof.check().is_err());
    }
}
