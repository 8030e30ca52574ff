use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oncredit_broker::{find_agreeing_subset, run_session, Strategy, Verdict, DEFAULT_CONTRACT_CAP};
use oncredit_core::pcl::{
    self, parse_formula, prove, Formula, ProofResult, ProofStatus, DEFAULT_BUDGET,
};
use oncredit_core::{
    check_theorem3, compose_all, is_x_configuration, parse_contract, reachable_with_credit,
    validate, Analysis, Contract, EventId, ParticipantId, State,
};
use serde_json::json;

/// Contracts with circular obligations: configurations, agreements, duties,
/// logic encoding and broker sessions.
#[derive(Parser)]
#[command(name = "oncredit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Files {
    /// Contract files; several files are composed.
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a state is a configuration and print a witness ordering.
    Check {
        #[command(flatten)]
        input: Files,
        /// Comma-separated events; `-` or empty for the empty state.
        #[arg(long, default_value = "")]
        state: String,
        /// Events taken on credit.
        #[arg(long, default_value = "")]
        credit: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the reachable events, one per line.
    Reach {
        #[command(flatten)]
        input: Files,
        /// Events assumed on credit.
        #[arg(long, default_value = "")]
        credit: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the contract admits an agreement.
    Agree {
        #[command(flatten)]
        input: Files,
        #[arg(long)]
        json: bool,
    },
    /// Search the submitted contracts for the largest agreeing subset.
    Broker {
        #[command(flatten)]
        input: Files,
        #[arg(long, default_value_t = DEFAULT_CONTRACT_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Duties and culpability in a state.
    Duties {
        #[command(flatten)]
        input: Files,
        #[arg(long, default_value = "")]
        state: String,
        #[arg(long)]
        participant: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Look for a state where somebody is unfulfilled and nobody is culpable.
    Theorem3 {
        #[command(flatten)]
        input: Files,
    },
    /// Print the logic encoding of the contract.
    Encode {
        #[command(flatten)]
        input: Files,
    },
    /// Prove `owner(e) says e` from a contract, or an arbitrary sequent.
    Prove {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "formula", requires = "file")]
        goal: Option<String>,
        /// Events assumed as `owner(d) says d`.
        #[arg(long, default_value = "", requires = "goal")]
        hyp: String,
        /// Goal formula in linear syntax.
        #[arg(long, conflicts_with = "file")]
        formula: Option<String>,
        /// Context formula; may be repeated.
        #[arg(long, requires = "formula")]
        context: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        print_proof: bool,
    },
    /// Simulate a broker session.
    Session {
        #[command(flatten)]
        input: Files,
        /// `P=honest`, `P=lazy` or `P=dishonest-after:K`; may be repeated.
        #[arg(long = "strategy")]
        strategies: Vec<String>,
        #[arg(long, default_value_t = 100)]
        max_rounds: usize,
        #[arg(long)]
        json: bool,
    },
    /// Report suspicious clauses and goals.
    Validate {
        #[command(flatten)]
        input: Files,
    },
}

/// Input or usage problem; reported with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read_contract(path: &Path) -> Result<Contract, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_contract(&text).map_err(|e| Failure(format!("{}:{e}", path.display())))
}

fn load(input: &Files) -> Result<Contract, Failure> {
    let contracts = read_all(input)?;
    Ok(compose_all(&contracts)?)
}

fn read_all(input: &Files) -> Result<Vec<Contract>, Failure> {
    input.files.iter().map(|p| read_contract(p)).collect()
}

fn parse_events(c: &Contract, list: &str) -> Result<State, Failure> {
    let list = list.trim();
    if list.is_empty() || list == "-" {
        return Ok(State::empty());
    }
    list.split(',')
        .map(|e| {
            let e = EventId::from(e.trim());
            if c.has_event(&e) {
                Ok(e)
            } else {
                Err(Failure(format!("unknown event `{e}`")))
            }
        })
        .collect()
}

fn print_json(value: &impl serde::Serialize) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn list(events: impl IntoIterator<Item = impl std::fmt::Display>) -> String {
    let items: Vec<String> = events.into_iter().map(|e| e.to_string()).collect();
    if items.is_empty() {
        "-".to_owned()
    } else {
        items.join(",")
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check {
            input,
            state,
            credit,
            json,
        } => {
            let c = load(&input)?;
            let set = parse_events(&c, &state)?;
            let credit = parse_events(&c, &credit)?;
            if !credit.is_subset(&set) {
                return Err(Failure("credit events must belong to the state".into()));
            }
            let witness = is_x_configuration(&c, &credit, &set);
            if json {
                print_json(&json!({
                    "configuration": witness.is_some(),
                    "witness": witness.as_ref().map(|w| w.steps.clone()).unwrap_or_default(),
                }))?;
            } else if let Some(w) = &witness {
                println!("{set} is a configuration");
                println!("witness: {w}");
            } else {
                println!("{set} is not a configuration");
            }
            Ok(witness.is_some())
        }
        Command::Reach {
            input,
            credit,
            json,
        } => {
            let c = load(&input)?;
            let credit = parse_events(&c, &credit)?;
            let reach = reachable_with_credit(&c, &credit)?;
            if json {
                print_json(&json!({ "reachable": reach }))?;
            } else {
                for e in reach.iter() {
                    println!("{e}");
                }
            }
            Ok(true)
        }
        Command::Agree { input, json } => {
            let c = load(&input)?;
            let r = Analysis::new(&c).agreement();
            if json {
                print_json(&r)?;
            } else {
                match &r.configuration {
                    Some(conf) => println!("agreement on {conf}"),
                    None => println!("no agreement"),
                }
                for (p, w) in &r.witnesses {
                    match w {
                        Some(g) => println!("  {p}: goal {}", list(&g.goal)),
                        None => println!("  {p}: no reachable goal"),
                    }
                }
            }
            Ok(r.agreed)
        }
        Command::Broker { input, cap, json } => {
            let contracts = read_all(&input)?;
            let found = find_agreeing_subset(&contracts, cap)?;
            if json {
                let value = found.as_ref().map(|(idx, r)| {
                    json!({
                        "files": idx.iter().map(|&i| input.files[i].display().to_string()).collect::<Vec<_>>(),
                        "indices": idx,
                        "agreement": r,
                    })
                });
                print_json(&value)?;
            } else {
                match &found {
                    Some((idx, r)) => {
                        println!("agreeing subset:");
                        for &i in idx {
                            println!("  {}", input.files[i].display());
                        }
                        if let Some(conf) = &r.configuration {
                            println!("configuration {conf}");
                        }
                    }
                    None => println!("no subset admits an agreement"),
                }
            }
            Ok(found.is_some())
        }
        Command::Duties {
            input,
            state,
            participant,
            json,
        } => {
            let c = load(&input)?;
            let x = parse_events(&c, &state)?;
            let mut report = Analysis::new(&c).duty_report(&x)?;
            if let Some(p) = participant {
                let p = ParticipantId::from(p.as_str());
                if !c.has_participant(&p) {
                    return Err(Failure(format!("unknown participant {p}")));
                }
                report.duties.retain(|q, _| q == &p);
                report.culpable.retain(|q| q == &p);
                report.fulfilled.retain(|q| q == &p);
            }
            if json {
                print_json(&report)?;
            } else {
                println!("state {}", report.state);
                for (p, d) in &report.duties {
                    let mut flags = Vec::new();
                    if report.culpable.contains(p) {
                        flags.push("culpable");
                    }
                    if report.fulfilled.contains(p) {
                        flags.push("fulfilled");
                    }
                    let flags = if flags.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", flags.join(", "))
                    };
                    println!("  {p}: {}{flags}", list(d));
                }
            }
            Ok(true)
        }
        Command::Theorem3 { input } => {
            let c = load(&input)?;
            if !Analysis::new(&c).agreement().agreed {
                println!("no agreement: nothing to check");
                return Ok(false);
            }
            match check_theorem3(&c)? {
                None => {
                    println!("ok");
                    Ok(true)
                }
                Some(x) => {
                    println!("counterexample: {x}");
                    Ok(false)
                }
            }
        }
        Command::Encode { input } => {
            let c = load(&input)?;
            println!("{}", pcl::encode(&c));
            Ok(true)
        }
        Command::Prove {
            file,
            goal,
            hyp,
            formula,
            context,
            budget,
            print_proof,
        } => {
            if budget == 0 {
                return Err(Failure("budget must be positive".into()));
            }
            let result = match (file, goal, formula) {
                (Some(path), Some(goal), None) => {
                    let c = read_contract(&path)?;
                    let hyps = parse_events(&c, &hyp)?;
                    let goal = EventId::from(goal.as_str());
                    pcl::provable_with_hypotheses(&c, &hyps, &goal, budget)?
                }
                (None, None, Some(goal)) => {
                    let goal = parse_formula(&goal)?;
                    let ctx = context
                        .iter()
                        .map(|f| parse_formula(f))
                        .collect::<Result<Vec<Formula>, _>>()?;
                    prove(&ctx, &goal, budget)
                }
                _ => {
                    return Err(Failure(
                        "give either a contract file with --goal, or --formula".into(),
                    ))
                }
            };
            report_proof(&result, print_proof);
            Ok(result.is_proved())
        }
        Command::Session {
            input,
            strategies,
            max_rounds,
            json,
        } => {
            let contracts = read_all(&input)?;
            let mut map = BTreeMap::new();
            for s in &strategies {
                let (p, how) = s
                    .split_once('=')
                    .ok_or_else(|| Failure(format!("expected P=STRATEGY, got `{s}`")))?;
                map.insert(
                    ParticipantId::from(p.trim()),
                    how.trim().parse::<Strategy>()?,
                );
            }
            let log = run_session(&contracts, &map, max_rounds)?;
            if json {
                print_json(&log)?;
            } else {
                print!("{log}");
            }
            Ok(log.verdict == Verdict::AllFulfilled)
        }
        Command::Validate { input } => {
            let c = load(&input)?;
            let diagnostics = validate(&c);
            if diagnostics.is_empty() {
                println!("no warnings");
            }
            for d in diagnostics {
                println!("{d}");
            }
            Ok(true)
        }
    }
}

fn report_proof(r: &ProofResult, print_proof: bool) {
    match r.status {
        ProofStatus::Proved => println!("proved ({} sequents visited)", r.visited),
        ProofStatus::RefutedBySaturation => {
            println!("not provable ({} sequents visited)", r.visited)
        }
        ProofStatus::BudgetExhausted => println!("budget exhausted after {} sequents", r.visited),
    }
    if let Some(d) = &r.diagnostic {
        println!("{d}");
    }
    if print_proof {
        if let Some(p) = &r.proof {
            print!("{}", p.render());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
