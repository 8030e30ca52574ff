use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{EventId, ParticipantId};

/// Propositional contract logic formulas.
///
/// `CImpl` is contractual implication: `p -->> q` yields `q` when `p` can be
/// established while `q` itself is assumed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom(EventId),
    Truth,
    Conj(Box<Formula>, Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    CImpl(Box<Formula>, Box<Formula>),
    Says(ParticipantId, Box<Formula>),
}

impl Formula {
    pub fn atom(e: &str) -> Self {
        Formula::Atom(e.into())
    }

    pub fn conj(a: Formula, b: Formula) -> Self {
        Formula::Conj(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn cimplies(a: Formula, b: Formula) -> Self {
        Formula::CImpl(Box::new(a), Box::new(b))
    }

    pub fn says(p: &ParticipantId, f: Formula) -> Self {
        Formula::Says(p.clone(), Box::new(f))
    }

    /// Right-associated conjunction; `Truth` for no operands.
    pub fn conj_all(operands: impl IntoIterator<Item = Formula>) -> Self {
        let mut ops: Vec<Formula> = operands.into_iter().collect();
        let Some(mut acc) = ops.pop() else {
            return Formula::Truth;
        };
        while let Some(f) = ops.pop() {
            acc = Formula::conj(f, acc);
        }
        acc
    }

    fn is_says_atom(&self) -> bool {
        matches!(self, Formula::Says(_, inner) if matches!(**inner, Formula::Atom(_)))
    }

    fn is_premise_conj(&self) -> bool {
        match self {
            Formula::Truth => true,
            Formula::Conj(a, b) => a.is_premise_conj() && b.is_premise_conj(),
            f => f.is_says_atom(),
        }
    }

    fn is_fragment_item(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Truth => true,
            Formula::Says(_, inner) => match &**inner {
                Formula::Atom(_) => true,
                Formula::Impl(p, a) | Formula::CImpl(p, a) => {
                    p.is_premise_conj() && matches!(**a, Formula::Atom(_))
                }
                _ => false,
            },
            _ => false,
        }
    }

    /// Membership in the fragment targeted by the contract encoding:
    /// conjunctions of atoms, says-atoms and clauses
    /// `P says ((Q1 says d1 /\ ... ) op a)` with `op` a standard or
    /// contractual implication.
    pub fn is_one_n_pcl(&self) -> bool {
        match self {
            Formula::Conj(a, b) => a.is_one_n_pcl() && b.is_one_n_pcl(),
            f => f.is_fragment_item(),
        }
    }

    fn is_simple(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Truth)
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, bare: bool) -> fmt::Result {
        if bare || self.is_simple() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

/// Linear syntax: atoms as tokens, `T`, `/\`, `->`, `-->>`, `P says X`.
/// Operands of binary connectives are parenthesised unless atomic or a
/// right-nested chain of the same connective.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let binary =
            |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula, same: bool| {
                a.fmt_operand(f, false)?;
                write!(f, " {op} ")?;
                b.fmt_operand(f, same)
            };
        match self {
            Formula::Atom(e) => write!(f, "{e}"),
            Formula::Truth => f.write_str("T"),
            Formula::Conj(a, b) => binary(f, a, "/\\", b, matches!(**b, Formula::Conj(..))),
            Formula::Impl(a, b) => binary(f, a, "->", b, matches!(**b, Formula::Impl(..))),
            Formula::CImpl(a, b) => binary(f, a, "-->>", b, matches!(**b, Formula::CImpl(..))),
            Formula::Says(p, body) => {
                write!(f, "{p} says ")?;
                body.fmt_operand(f, false)
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("formula syntax error at column {column}: {message}")]
pub struct FormulaParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Truth,
    Says,
    LParen,
    RParen,
    And,
    Impl,
    CImpl,
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, FormulaParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    let starts = |i: usize, s: &str| {
        s.chars()
            .enumerate()
            .all(|(k, c)| chars.get(i + k) == Some(&c))
    };
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = if c.is_ascii_alphanumeric() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match word.as_str() {
                "T" => Tok::Truth,
                "says" => Tok::Says,
                _ => Tok::Ident(word),
            };
            (tok, j - i)
        } else if starts(i, "-->>") {
            (Tok::CImpl, 4)
        } else if starts(i, "->") {
            (Tok::Impl, 2)
        } else if starts(i, "/\\") {
            (Tok::And, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '∧' => (Tok::And, 1),
                '→' => (Tok::Impl, 1),
                '↠' => (Tok::CImpl, 1),
                '⊤' => (Tok::Truth, 1),
                _ => {
                    return Err(FormulaParseError {
                        column: col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.at).map(|(_, c)| *c).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormulaParseError> {
        Err(FormulaParseError {
            column: self.col(),
            message: message.into(),
        })
    }

    fn implication(&mut self) -> Result<Formula, FormulaParseError> {
        let lhs = self.conjunction()?;
        match self.peek() {
            Some(Tok::Impl) => {
                self.at += 1;
                Ok(Formula::implies(lhs, self.implication()?))
            }
            Some(Tok::CImpl) => {
                self.at += 1;
                Ok(Formula::cimplies(lhs, self.implication()?))
            }
            _ => Ok(lhs),
        }
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaParseError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Tok::And) {
            self.at += 1;
            return Ok(Formula::conj(lhs, self.conjunction()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaParseError> {
        match self.toks.get(self.at).cloned() {
            Some((Tok::Truth, _)) => {
                self.at += 1;
                Ok(Formula::Truth)
            }
            Some((Tok::Ident(name), _)) => {
                self.at += 1;
                if self.peek() == Some(&Tok::Says) {
                    self.at += 1;
                    let body = self.unary()?;
                    Ok(Formula::Says(ParticipantId::new(name), Box::new(body)))
                } else {
                    Ok(Formula::Atom(EventId::new(name)))
                }
            }
            Some((Tok::LParen, _)) => {
                self.at += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(_) => self.err("expected an atom, `T`, `P says ...` or `(`"),
            None => self.err("unexpected end of formula"),
        }
    }
}

/// Parses the linear formula syntax. `->` and `-->>` associate to the right
/// and bind looser than `/\`; `says` binds tightest.
pub fn parse_formula(input: &str) -> Result<Formula, FormulaParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: input.chars().count() + 1,
    };
    let f = p.implication()?;
    if p.at < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}
