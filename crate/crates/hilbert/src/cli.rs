//! Batch command-line front end over the deduction script format.
//!
//! Exit codes: 0 for success / true / no counterexample; 1 for false /
//! counterexample / nothing found within bounds; 2 for usage or input
//! errors. Diagnostics go to stderr, machine output (numbers, scripts,
//! models) to stdout.

use crate::dedthm;
use crate::godel::{self, GodelNumber, SymbolCode};
use crate::kernel::script::{parse_script, render_deduction, Script};
use crate::kernel::{verify_deduction, Deduction, Justification, Verdict};
use crate::models::{self, EntailmentVerdict};
use crate::syntax::parse_formula;
use clap::{Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "hilbert",
    about = "Hilbert-style proof kernel, deduction-theorem transforms, Gödel coding, and finite models",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a deduction script
    Check { file: PathBuf },
    /// Discharge a hypothesis, yielding a proof of hyp -> conclusion
    Discharge {
        file: PathBuf,
        /// 1-based hypothesis index to discharge (default: the last one)
        #[arg(long)]
        hyp: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Append an antecedent as a hypothesis and conclude by modus ponens
    Undischarge {
        file: PathBuf,
        /// Antecedent formula of the conclusion
        #[arg(long)]
        ante: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Join a proof of A from T with a proof of B from T plus A
    Concat {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Add a closed hypothesis without touching the steps
    Weaken {
        file: PathBuf,
        /// Hypothesis to append (must be closed)
        #[arg(long)]
        add: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Gödel-encode a deduction script (or a formula with --formula)
    Encode {
        file: PathBuf,
        /// Encode this formula over the file's signature instead
        #[arg(long)]
        formula: Option<String>,
    },
    /// Decode a formula code
    Decode {
        #[arg(long)]
        number: String,
        /// Any script file; only its signature is used
        #[arg(long)]
        sig: PathBuf,
    },
    /// Decide the proof relation: does x code a deduction of y from the theory?
    Proofcheck {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        theory: PathBuf,
    },
    /// Bounded proof search; prints the witness script and its Gödel number
    Search {
        #[arg(long)]
        goal: String,
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        pool_depth: usize,
    },
    /// Transport a witness of (T, hyp) |- B to a witness of T |- hyp -> B
    TransportDischarge {
        #[arg(long)]
        x: String,
        /// The discharged hypothesis (closed)
        #[arg(long)]
        hyp: String,
        #[arg(long)]
        theory: PathBuf,
    },
    /// Transport a witness of T |- B to a witness of T |- add -> B
    TransportWeaken {
        #[arg(long)]
        u: String,
        /// Antecedent to introduce (closed)
        #[arg(long)]
        add: String,
        #[arg(long)]
        theory: PathBuf,
    },
    /// Scan all models up to a size bound for a counterexample to T |= goal
    Entail {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Emit the five-step proof of formula -> formula
    Selfimp {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Dump the symbol code table for a signature
    Codes {
        #[arg(long)]
        sig: PathBuf,
        /// How many canonical variables to list
        #[arg(long, default_value_t = 4)]
        vars: u64,
    },
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<i32, String> {
    match command {
        Command::Check { file } => {
            let d = load_deduction(&file)?;
            match verify_deduction(&d) {
                Verdict::Ok => {
                    let n = d.steps.len();
                    let noun = if n == 1 { "step" } else { "steps" };
                    println!("ok ({n} {noun})");
                    Ok(0)
                }
                Verdict::Failure(failure) => {
                    println!("failed at {failure}");
                    Ok(1)
                }
            }
        }
        Command::Discharge { file, hyp, out } => {
            let d = load_deduction(&file)?;
            if d.hypotheses.is_empty() {
                return Err("deduction has no hypotheses to discharge".into());
            }
            let index = hyp.unwrap_or(d.hypotheses.len());
            if index == 0 || index > d.hypotheses.len() {
                return Err(format!("hypothesis index {index} out of range"));
            }
            let reordered = move_hypothesis_last(&d, index);
            let a = reordered.hypotheses.last().unwrap().clone();
            let result = dedthm::discharge(&reordered, &a).map_err(|e| e.to_string())?;
            emit_script(&result, out.as_deref())
        }
        Command::Undischarge { file, ante, out } => {
            let d = load_deduction(&file)?;
            let a = parse_formula(&ante, &d.sig).map_err(|e| e.to_string())?;
            let result = dedthm::undischarge(&d, &a).map_err(|e| e.to_string())?;
            emit_script(&result, out.as_deref())
        }
        Command::Concat { first, second, out } => {
            let d_a = load_deduction(&first)?;
            let d_b = load_deduction(&second)?;
            let result = dedthm::concat(&d_a, &d_b).map_err(|e| e.to_string())?;
            emit_script(&result, out.as_deref())
        }
        Command::Weaken { file, add, out } => {
            let d = load_deduction(&file)?;
            let a = parse_formula(&add, &d.sig).map_err(|e| e.to_string())?;
            let result = dedthm::weaken(&d, &a).map_err(|e| e.to_string())?;
            emit_script(&result, out.as_deref())
        }
        Command::Encode { file, formula } => {
            let script = load_script(&file)?;
            let codes = SymbolCode::new(&script.sig);
            let number = match formula {
                Some(text) => {
                    let f = parse_formula(&text, &script.sig).map_err(|e| e.to_string())?;
                    godel::encode_formula(&f, &codes).map_err(|e| e.to_string())?
                }
                None => {
                    let d = script.into_deduction().map_err(|e| e.to_string())?;
                    verify_deduction(&d)
                        .into_result()
                        .map_err(|e| e.to_string())?;
                    godel::encode_deduction(&d, &codes).map_err(|e| e.to_string())?
                }
            };
            println!("{number}");
            Ok(0)
        }
        Command::Decode { number, sig } => {
            let script = load_script(&sig)?;
            let n: GodelNumber = number
                .parse()
                .map_err(|e: godel::NumberError| e.to_string())?;
            let f = godel::decode_formula(&n, &script.sig).map_err(|e| e.to_string())?;
            println!("{f}");
            Ok(0)
        }
        Command::Proofcheck { x, y, theory } => {
            let script = load_script(&theory)?;
            let x: GodelNumber = x.parse().map_err(|e: godel::NumberError| e.to_string())?;
            let y: GodelNumber = y.parse().map_err(|e: godel::NumberError| e.to_string())?;
            if godel::proof_check(&x, &y, &script.hypotheses, &script.sig) {
                println!("true");
                Ok(0)
            } else {
                println!("false");
                Ok(1)
            }
        }
        Command::Search {
            goal,
            theory,
            max_len,
            pool_depth,
        } => {
            let script = load_script(&theory)?;
            let goal = parse_formula(&goal, &script.sig).map_err(|e| e.to_string())?;
            let found = godel::search_deduction(
                &goal,
                &script.hypotheses,
                &script.sig,
                max_len,
                pool_depth,
            )
            .map_err(|e| e.to_string())?;
            match found {
                Some((d, number)) => {
                    print!("{}", render_deduction(&d));
                    println!("# godel: {number}");
                    Ok(0)
                }
                None => {
                    eprintln!("no deduction found within bounds");
                    Ok(1)
                }
            }
        }
        Command::TransportDischarge { x, hyp, theory } => {
            let script = load_script(&theory)?;
            let x: GodelNumber = x.parse().map_err(|e: godel::NumberError| e.to_string())?;
            let a = parse_formula(&hyp, &script.sig).map_err(|e| e.to_string())?;
            let z = godel::transport_discharge(&x, &a, &script.hypotheses, &script.sig)
                .map_err(|e| e.to_string())?;
            println!("{z}");
            Ok(0)
        }
        Command::TransportWeaken { u, add, theory } => {
            let script = load_script(&theory)?;
            let u: GodelNumber = u.parse().map_err(|e: godel::NumberError| e.to_string())?;
            let a = parse_formula(&add, &script.sig).map_err(|e| e.to_string())?;
            let z = godel::transport_weaken(&u, &a, &script.hypotheses, &script.sig)
                .map_err(|e| e.to_string())?;
            println!("{z}");
            Ok(0)
        }
        Command::Entail {
            theory,
            goal,
            max_size,
        } => {
            let script = load_script(&theory)?;
            let goal = parse_formula(&goal, &script.sig).map_err(|e| e.to_string())?;
            let verdict =
                models::check_entailment(&script.hypotheses, &goal, &script.sig, max_size)
                    .map_err(|e| e.to_string())?;
            match verdict {
                EntailmentVerdict::NoCounterexample => {
                    println!("no counterexample up to size {max_size}");
                    Ok(0)
                }
                EntailmentVerdict::Counterexample(m) => {
                    print!("{m}");
                    Ok(1)
                }
            }
        }
        Command::Selfimp { formula, sig } => {
            let script = load_script(&sig)?;
            let f = parse_formula(&formula, &script.sig).map_err(|e| e.to_string())?;
            let d = dedthm::prove_self_implication(&f, &script.sig);
            print!("{}", render_deduction(&d));
            Ok(0)
        }
        Command::Codes { sig, vars } => {
            let script = load_script(&sig)?;
            print!("{}", SymbolCode::new(&script.sig).dump(vars));
            Ok(0)
        }
    }
}

fn load_script(path: &Path) -> Result<Script, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_script(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_deduction(path: &Path) -> Result<Deduction, String> {
    load_script(path)?
        .into_deduction()
        .map_err(|e| format!("{}: {e}", path.display()))
}

/// Moves the hypothesis at 1-based `index` to the end of the list and
/// renumbers `hyp` justifications accordingly. Hypothesis order is metadata;
/// the steps themselves are untouched.
fn move_hypothesis_last(d: &Deduction, index: usize) -> Deduction {
    let last = d.hypotheses.len();
    if index == last {
        return d.clone();
    }
    let mut hypotheses = d.hypotheses.clone();
    let moved = hypotheses.remove(index - 1);
    hypotheses.push(moved);
    let steps = d
        .steps
        .iter()
        .map(|s| {
            let justification = match &s.justification {
                Justification::Hyp(k) if *k == index => Justification::Hyp(last),
                Justification::Hyp(k) if *k > index => Justification::Hyp(k - 1),
                other => other.clone(),
            };
            crate::kernel::Step::new(s.formula.clone(), justification)
        })
        .collect();
    Deduction::new(d.sig.clone(), hypotheses, steps)
}

fn emit_script(d: &Deduction, out: Option<&Path>) -> Result<i32, String> {
    let text = render_deduction(d);
    match out {
        Some(path) if path.as_os_str() != "-" => {
            fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
        _ => print!("{text}"),
    }
    Ok(0)
}
