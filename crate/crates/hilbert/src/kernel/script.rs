//! Line-oriented deduction script format.
//!
//! ```text
//! # comments run to end of line
//! sig P/0 R/1 f/1 c/0
//! hyp (A x) R(x)
//! step (A x) R(x) ; hyp 1
//! step ((A x) R(x) -> R(c)) ; axiom
//! step R(c) ; mp 1 2
//! step (A y) R(c) ; gen 3 y
//! ```
//!
//! The same format serves as a theory file (hyp lines only) and as a full
//! deduction. `sig` lines must precede the first `hyp` or `step` line.

use super::{Deduction, Justification, Step};
use crate::syntax::{parse_formula, parse_signature_decls, Formula, ParseError, Signature};
use thiserror::Error;

/// A parsed script: a signature, hypotheses, and possibly steps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub sig: Signature,
    pub hypotheses: Vec<Formula>,
    pub steps: Vec<Step>,
}

impl Script {
    /// Requires at least one step.
    pub fn into_deduction(self) -> Result<Deduction, ScriptError> {
        if self.steps.is_empty() {
            return Err(ScriptError {
                line: 0,
                kind: ScriptErrorKind::NoSteps,
            });
        }
        Ok(Deduction::new(self.sig, self.hypotheses, self.steps))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ScriptError {
    pub line: usize,
    pub kind: ScriptErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScriptErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`sig` must precede hyp/step lines")]
    LateSignature,
    #[error("{0}")]
    Formula(ParseError),
    #[error("step is missing `; <justification>`")]
    MissingJustification,
    #[error("malformed justification `{0}`")]
    BadJustification(String),
    #[error("script has no steps")]
    NoSteps,
}

pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let mut script = Script::default();
    let mut body_started = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (directive, rest) = match line.split_once(char::is_whitespace) {
            Some((d, r)) => (d, r.trim()),
            None => (line, ""),
        };
        let fail = |kind| ScriptError {
            line: line_no,
            kind,
        };
        match directive {
            "sig" => {
                if body_started {
                    return Err(fail(ScriptErrorKind::LateSignature));
                }
                parse_signature_decls(rest, &mut script.sig)
                    .map_err(|e| fail(ScriptErrorKind::Formula(e)))?;
            }
            "hyp" => {
                body_started = true;
                let f = parse_formula(rest, &script.sig)
                    .map_err(|e| fail(ScriptErrorKind::Formula(e)))?;
                script.hypotheses.push(f);
            }
            "step" => {
                body_started = true;
                let (formula_text, just_text) = rest
                    .split_once(';')
                    .ok_or_else(|| fail(ScriptErrorKind::MissingJustification))?;
                let f = parse_formula(formula_text, &script.sig)
                    .map_err(|e| fail(ScriptErrorKind::Formula(e)))?;
                let j = parse_justification(just_text.trim()).ok_or_else(|| {
                    fail(ScriptErrorKind::BadJustification(just_text.trim().into()))
                })?;
                script.steps.push(Step::new(f, j));
            }
            other => return Err(fail(ScriptErrorKind::UnknownDirective(other.to_string()))),
        }
    }
    Ok(script)
}

fn parse_justification(text: &str) -> Option<Justification> {
    let mut words = text.split_whitespace();
    let j = match words.next()? {
        "axiom" => Justification::Axiom,
        "hyp" => Justification::Hyp(words.next()?.parse().ok()?),
        "mp" => {
            let i = words.next()?.parse().ok()?;
            let j = words.next()?.parse().ok()?;
            Justification::Mp(i, j)
        }
        "gen" => {
            let i = words.next()?.parse().ok()?;
            let v = words.next()?.to_string();
            Justification::Gen(i, v)
        }
        _ => return None,
    };
    if words.next().is_some() {
        return None;
    }
    Some(j)
}

fn render_signature(sig: &Signature) -> String {
    let decls: Vec<String> = sig
        .predicates()
        .iter()
        .chain(sig.functions())
        .map(|(name, arity)| format!("{name}/{arity}"))
        .collect();
    format!("sig {}", decls.join(" "))
}

fn render_justification(j: &Justification) -> String {
    match j {
        Justification::Axiom => "axiom".to_string(),
        Justification::Hyp(i) => format!("hyp {i}"),
        Justification::Mp(i, j) => format!("mp {i} {j}"),
        Justification::Gen(i, v) => format!("gen {i} {v}"),
    }
}

/// Renders a theory file: signature plus hypotheses, no steps.
pub fn render_theory(sig: &Signature, hypotheses: &[Formula]) -> String {
    let mut out = String::new();
    out.push_str(&render_signature(sig));
    out.push('\n');
    for h in hypotheses {
        out.push_str(&format!("hyp {h}\n"));
    }
    out
}

/// Renders a full deduction script; `parse_script` on the result reproduces
/// the deduction exactly.
pub fn render_deduction(d: &Deduction) -> String {
    let mut out = render_theory(&d.sig, &d.hypotheses);
    for step in &d.steps {
        out.push_str(&format!(
            "step {} ; {}\n",
            step.formula,
            render_justification(&step.justification)
        ));
    }
    out
}
