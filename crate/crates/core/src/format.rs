//! Line-oriented text format for contracts.
//!
//! ```text
//! participant <P>
//! event <e> @ <P>
//! enable <e1>,<e2>,... |- <e>     # standard enabling, "-" for no premises
//! enable <e1>,<e2>,... ||- <e>    # circular enabling
//! ok <P> : <e1>,<e2>,...          # one minimal goal set, "-" for the empty set
//! ```
//!
//! `#` starts a comment. Declarations may appear in any order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{ParseError, ParseErrorKind};
use crate::model::{
    write_event_list, Clause, Contract, EnablingKind, EventId, GoalSet, ParticipantId,
};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Comma,
    Dash,
    At,
    Colon,
    Turnstile,
    Circular,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Comma => "`,`".into(),
            Tok::Dash => "`-`".into(),
            Tok::At => "`@`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Circular => "`||-`".into(),
        }
    }
}

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn err(self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind,
        }
    }

    fn syntax(self, msg: impl Into<String>) -> ParseError {
        self.err(ParseErrorKind::Syntax(msg.into()))
    }
}

fn lex(line_no: usize, line: &str) -> Result<Vec<(Tok<'_>, Pos)>, ParseError> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    let col = |byte: usize| line[..byte].chars().count() + 1;
    while let Some(&(i, ch)) = chars.peek() {
        let pos = Pos {
            line: line_no,
            column: col(i),
        };
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        end = j + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(&line[i..end]), pos));
            }
            ',' | '-' | '@' | ':' => {
                chars.next();
                let tok = match ch {
                    ',' => Tok::Comma,
                    '-' => Tok::Dash,
                    '@' => Tok::At,
                    _ => Tok::Colon,
                };
                out.push((tok, pos));
            }
            '|' => {
                let rest = &line[i..];
                if rest.starts_with("||-") {
                    out.push((Tok::Circular, pos));
                    chars.nth(2);
                } else if rest.starts_with("|-") {
                    out.push((Tok::Turnstile, pos));
                    chars.nth(1);
                } else {
                    return Err(pos.syntax("expected `|-` or `||-`"));
                }
            }
            other => return Err(pos.syntax(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: Vec<(Tok<'a>, Pos)>,
    at: usize,
    eol: Pos,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<(Tok<'a>, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn ident(&mut self, what: &str) -> Result<(&'a str, Pos), ParseError> {
        match self.next() {
            Some((Tok::Ident(s), p)) => Ok((s, p)),
            Some((t, p)) => Err(p.syntax(format!("expected {what}, found {}", t.describe()))),
            None => Err(self
                .eol
                .syntax(format!("expected {what}, found end of line"))),
        }
    }

    fn expect(&mut self, want: Tok<'static>) -> Result<(), ParseError> {
        match self.next() {
            Some((t, _)) if t == want => Ok(()),
            Some((t, p)) => Err(p.syntax(format!(
                "expected {}, found {}",
                want.describe(),
                t.describe()
            ))),
            None => Err(self
                .eol
                .syntax(format!("expected {}, found end of line", want.describe()))),
        }
    }

    /// `-` or a comma-separated list of identifiers.
    fn event_list(&mut self) -> Result<Vec<(&'a str, Pos)>, ParseError> {
        if self.peek() == Some(&Tok::Dash) {
            self.next();
            return Ok(Vec::new());
        }
        let mut out = vec![self.ident("an event name or `-`")?];
        while self.peek() == Some(&Tok::Comma) {
            self.next();
            out.push(self.ident("an event name")?);
        }
        Ok(out)
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.next() {
            None => Ok(()),
            Some((t, p)) => {
                Err(p.syntax(format!("unexpected {} at end of declaration", t.describe())))
            }
        }
    }
}

/// A name with the position it was written at.
type Spanned<'a> = (&'a str, Pos);

struct RawClause<'a> {
    premises: Vec<(&'a str, Pos)>,
    target: (&'a str, Pos),
    kind: EnablingKind,
}

struct RawGoal<'a> {
    participant: (&'a str, Pos),
    goal: Vec<(&'a str, Pos)>,
}

/// Parses the contract text format. Clauses and goals are kept as written;
/// duplicates collapse.
pub fn parse_contract(text: &str) -> Result<Contract, ParseError> {
    let mut participants: BTreeSet<&str> = BTreeSet::new();
    let mut events: Vec<(Spanned, Spanned)> = Vec::new();
    let mut clauses = Vec::new();
    let mut goals = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex(line_no, line)?;
        let eol = Pos {
            line: line_no,
            column: line.chars().count() + 1,
        };
        let mut cur = Cursor { toks, at: 0, eol };
        let Some((head, head_pos)) = cur.next() else {
            continue;
        };
        match head {
            Tok::Ident("participant") => {
                let (p, _) = cur.ident("a participant name")?;
                participants.insert(p);
            }
            Tok::Ident("event") => {
                let e = cur.ident("an event name")?;
                cur.expect(Tok::At)?;
                let p = cur.ident("a participant name")?;
                events.push((e, p));
            }
            Tok::Ident("enable") => {
                let premises = cur.event_list()?;
                let kind = match cur.next() {
                    Some((Tok::Turnstile, _)) => EnablingKind::Standard,
                    Some((Tok::Circular, _)) => EnablingKind::Circular,
                    Some((t, p)) => {
                        return Err(
                            p.syntax(format!("expected `|-` or `||-`, found {}", t.describe()))
                        )
                    }
                    None => return Err(eol.syntax("expected `|-` or `||-`, found end of line")),
                };
                let target = cur.ident("the enabled event")?;
                clauses.push(RawClause {
                    premises,
                    target,
                    kind,
                });
            }
            Tok::Ident("ok") => {
                let participant = cur.ident("a participant name")?;
                cur.expect(Tok::Colon)?;
                let goal = cur.event_list()?;
                goals.push(RawGoal { participant, goal });
            }
            other => {
                return Err(head_pos.syntax(format!(
                    "expected `participant`, `event`, `enable` or `ok`, found {}",
                    other.describe()
                )))
            }
        }
        cur.finish()?;
    }

    let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
    for ((e, e_pos), (p, p_pos)) in events {
        if !participants.contains(p) {
            return Err(p_pos.err(ParseErrorKind::UndeclaredParticipant(p.into())));
        }
        if let Some(prev) = owner.get(e) {
            let kind = if *prev == p {
                ParseErrorKind::DuplicateEvent(e.into())
            } else {
                ParseErrorKind::ConflictingOwner {
                    event: e.into(),
                    first: (*prev).into(),
                    second: p.into(),
                }
            };
            return Err(e_pos.err(kind));
        }
        owner.insert(e, p);
    }

    let resolve = |list: &[(&str, Pos)]| -> Result<BTreeSet<EventId>, ParseError> {
        list.iter()
            .map(|(e, pos)| {
                if owner.contains_key(e) {
                    Ok(EventId::from(*e))
                } else {
                    Err(pos.err(ParseErrorKind::UndeclaredEvent((*e).into())))
                }
            })
            .collect()
    };

    let mut contract = Contract {
        participants: participants
            .iter()
            .map(|p| ParticipantId::from(*p))
            .collect(),
        owner: owner
            .iter()
            .map(|(e, p)| (EventId::from(*e), ParticipantId::from(*p)))
            .collect(),
        ..Contract::default()
    };
    for raw in clauses {
        let premises = resolve(&raw.premises)?;
        let target = resolve(std::slice::from_ref(&raw.target))?
            .into_iter()
            .next()
            .expect("one target");
        contract.clauses.insert(Clause {
            target,
            kind: raw.kind,
            premises,
        });
    }
    for raw in goals {
        let (p, pos) = raw.participant;
        if !participants.contains(p) {
            return Err(pos.err(ParseErrorKind::UndeclaredParticipant(p.into())));
        }
        contract.goals.insert(GoalSet {
            participant: p.into(),
            goal: resolve(&raw.goal)?,
        });
    }
    Ok(contract)
}

/// Canonical text of a contract: participants, events, clauses, goals, each
/// group sorted, one declaration per line.
pub fn render(c: &Contract) -> String {
    let mut out = String::new();
    for p in &c.participants {
        writeln!(out, "participant {p}").unwrap();
    }
    for (e, p) in &c.owner {
        writeln!(out, "event {e} @ {p}").unwrap();
    }
    for cl in &c.clauses {
        writeln!(out, "enable {cl}").unwrap();
    }
    for g in &c.goals {
        write!(out, "ok {} : ", g.participant).unwrap();
        write_event_list(&mut out, &g.goal).unwrap();
        out.push('\n');
    }
    out
}
