//! The trusted core: axiom-schema recognizers, the two inference rules, and
//! the deduction verifier. Everything else in this crate produces deductions
//! that are re-checked here.
//!
//! The calculus is the usual five-schema Hilbert system:
//!
//! - A1: `B -> (C -> B)`
//! - A2: `(B -> (C -> D)) -> ((B -> C) -> (B -> D))`
//! - A3: `(~C -> ~B) -> ((~C -> B) -> C)`
//! - A4: `(A x) B -> B[x:=t]`, `t` free for `x` in `B`
//! - A5: `(A x)(B -> C) -> (B -> (A x) C)`, `x` not free in `B`
//!
//! with modus ponens and generalization. Generalization is forbidden on
//! variables free in any hypothesis, so that verified deductions stay sound
//! and dischargeable even with open hypotheses.

pub mod script;

use crate::syntax::{Formula, Signature, Term};
use std::fmt;
use thiserror::Error;

/// Why a step is claimed to hold. Step and hypothesis indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Instance of one of the five schemas; which one is inferred at check time.
    Axiom,
    /// Copy of the i-th hypothesis.
    Hyp(usize),
    /// Modus ponens: `i` names the antecedent step, `j` the implication step.
    Mp(usize, usize),
    /// Generalization of step `i` over the named variable.
    Gen(usize, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

impl Step {
    pub fn new(formula: Formula, justification: Justification) -> Self {
        Step {
            formula,
            justification,
        }
    }
}

/// A hypothesis list plus a sequence of justified steps; the unit of
/// verification. The conclusion is the formula of the last step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deduction {
    pub sig: Signature,
    pub hypotheses: Vec<Formula>,
    pub steps: Vec<Step>,
}

impl Deduction {
    pub fn new(sig: Signature, hypotheses: Vec<Formula>, steps: Vec<Step>) -> Self {
        Deduction {
            sig,
            hypotheses,
            steps,
        }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn step_formulas(&self) -> Vec<Formula> {
        self.steps.iter().map(|s| s.formula.clone()).collect()
    }
}

/// Schema tags in the fixed recognition order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaTag {
    A1,
    A2,
    A3,
    A4,
    A5,
}

impl fmt::Display for SchemaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaTag::A1 => write!(f, "A1"),
            SchemaTag::A2 => write!(f, "A2"),
            SchemaTag::A3 => write!(f, "A3"),
            SchemaTag::A4 => write!(f, "A4"),
            SchemaTag::A5 => write!(f, "A5"),
        }
    }
}

/// Returns the first schema `f` instantiates, in the order A1..A5, or `None`.
pub fn match_axiom(f: &Formula) -> Option<SchemaTag> {
    if match_a1(f) {
        Some(SchemaTag::A1)
    } else if match_a2(f) {
        Some(SchemaTag::A2)
    } else if match_a3(f) {
        Some(SchemaTag::A3)
    } else if match_a4(f) {
        Some(SchemaTag::A4)
    } else if match_a5(f) {
        Some(SchemaTag::A5)
    } else {
        None
    }
}

fn match_a1(f: &Formula) -> bool {
    // B -> (C -> B)
    if let Formula::Implies(b, rhs) = f {
        if let Formula::Implies(_, b2) = rhs.as_ref() {
            return b2 == b;
        }
    }
    false
}

fn match_a2(f: &Formula) -> bool {
    // (B -> (C -> D)) -> ((B -> C) -> (B -> D))
    let Formula::Implies(lhs, rhs) = f else {
        return false;
    };
    let Formula::Implies(b, cd) = lhs.as_ref() else {
        return false;
    };
    let Formula::Implies(c, d) = cd.as_ref() else {
        return false;
    };
    let Formula::Implies(bc, bd) = rhs.as_ref() else {
        return false;
    };
    let Formula::Implies(b2, c2) = bc.as_ref() else {
        return false;
    };
    let Formula::Implies(b3, d2) = bd.as_ref() else {
        return false;
    };
    b2 == b && b3 == b && c2 == c && d2 == d
}

fn match_a3(f: &Formula) -> bool {
    // (~C -> ~B) -> ((~C -> B) -> C)
    let Formula::Implies(lhs, rhs) = f else {
        return false;
    };
    let Formula::Implies(nc, nb) = lhs.as_ref() else {
        return false;
    };
    let Formula::Not(c) = nc.as_ref() else {
        return false;
    };
    let Formula::Not(b) = nb.as_ref() else {
        return false;
    };
    let Formula::Implies(ncb, c2) = rhs.as_ref() else {
        return false;
    };
    let Formula::Implies(nc2, b2) = ncb.as_ref() else {
        return false;
    };
    nc2 == nc && b2 == b && c2.as_ref() == c.as_ref()
}

fn match_a4(f: &Formula) -> bool {
    // (A x) B -> B[x:=t] for some t free for x in B. The walk proposes t;
    // substitute is the authority on what the instance must look like.
    let Formula::Implies(lhs, rhs) = f else {
        return false;
    };
    let Formula::ForAll(x, body) = lhs.as_ref() else {
        return false;
    };
    let Some(t) = infer_instantiation(body, rhs, x) else {
        return false;
    };
    match body.substitute(x, &t) {
        Ok(instance) => instance == *rhs.as_ref(),
        Err(_) => false,
    }
}

fn match_a5(f: &Formula) -> bool {
    // (A x)(B -> C) -> (B -> (A x) C), x not free in B
    let Formula::Implies(lhs, rhs) = f else {
        return false;
    };
    let Formula::ForAll(x, bc) = lhs.as_ref() else {
        return false;
    };
    let Formula::Implies(b, c) = bc.as_ref() else {
        return false;
    };
    let Formula::Implies(b2, all_c) = rhs.as_ref() else {
        return false;
    };
    let Formula::ForAll(x2, c2) = all_c.as_ref() else {
        return false;
    };
    x2 == x && b2 == b && c2 == c && !b.free_vars().contains(x)
}

/// Reads the substituted term off the first free occurrence of `x`, checking
/// that all positions agree. Returns `Var(x)` when `x` has no free
/// occurrence (then `body` must equal `rhs`, which the caller verifies via
/// `substitute`).
fn infer_instantiation(body: &Formula, rhs: &Formula, x: &str) -> Option<Term> {
    let mut slot: Option<Term> = None;
    if walk_formula(body, rhs, x, &mut slot) {
        Some(slot.unwrap_or_else(|| Term::var(x)))
    } else {
        None
    }
}

fn walk_formula(body: &Formula, rhs: &Formula, x: &str, slot: &mut Option<Term>) -> bool {
    match (body, rhs) {
        (Formula::Atom(p, args), Formula::Atom(p2, args2)) => {
            p == p2
                && args.len() == args2.len()
                && args
                    .iter()
                    .zip(args2)
                    .all(|(a, b)| walk_term(a, b, x, slot))
        }
        (Formula::Not(a), Formula::Not(b)) => walk_formula(a, b, x, slot),
        (Formula::Implies(a, b), Formula::Implies(a2, b2)) => {
            walk_formula(a, a2, x, slot) && walk_formula(b, b2, x, slot)
        }
        (Formula::ForAll(v, a), Formula::ForAll(v2, b)) => {
            if v != v2 {
                return false;
            }
            if v == x {
                // x is rebound here; the subtree must be untouched
                a == b
            } else {
                walk_formula(a, b, x, slot)
            }
        }
        _ => false,
    }
}

fn walk_term(body: &Term, rhs: &Term, x: &str, slot: &mut Option<Term>) -> bool {
    match body {
        Term::Var(v) if v == x => match slot {
            Some(t) => t == rhs,
            None => {
                *slot = Some(rhs.clone());
                true
            }
        },
        Term::Var(_) => body == rhs,
        Term::App(f, args) => match rhs {
            Term::App(f2, args2) => {
                f == f2
                    && args.len() == args2.len()
                    && args
                        .iter()
                        .zip(args2)
                        .all(|(a, b)| walk_term(a, b, x, slot))
            }
            _ => false,
        },
    }
}

/// Outcome of checking a single deduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Failure(Failure),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }

    pub fn into_result(self) -> Result<(), Failure> {
        match self {
            Verdict::Ok => Ok(()),
            Verdict::Failure(f) => Err(f),
        }
    }
}

/// First failing step (1-based; 0 marks preamble problems such as an empty
/// step list or an ill-formed hypothesis).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct Failure {
    pub step: usize,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    EmptyDeduction,
    IllFormed(String),
    NotAnAxiom,
    HypIndexOutOfRange(usize),
    HypMismatch(usize),
    StepIndexOutOfRange(usize),
    MpMismatch {
        antecedent: usize,
        implication: usize,
    },
    GenMismatch {
        source: usize,
        var: String,
    },
    GenOnHypVariable {
        var: String,
        hyp: usize,
    },
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::EmptyDeduction => write!(f, "deduction has no steps"),
            FailureReason::IllFormed(detail) => write!(f, "ill-formed formula: {detail}"),
            FailureReason::NotAnAxiom => write!(f, "not an instance of any axiom schema"),
            FailureReason::HypIndexOutOfRange(i) => write!(f, "hypothesis index {i} out of range"),
            FailureReason::HypMismatch(i) => {
                write!(f, "formula differs from hypothesis {i}")
            }
            FailureReason::StepIndexOutOfRange(i) => {
                write!(f, "step reference {i} is not an earlier step")
            }
            FailureReason::MpMismatch {
                antecedent,
                implication,
            } => write!(
                f,
                "step {implication} is not (step {antecedent} -> this formula)"
            ),
            FailureReason::GenMismatch { source, var } => {
                write!(f, "formula is not (A {var}) applied to step {source}")
            }
            FailureReason::GenOnHypVariable { var, hyp } => write!(
                f,
                "generalization on `{var}`, which is free in hypothesis {hyp}"
            ),
        }
    }
}

/// Checks every step of `d` against its justification; reports the first
/// failure. Pure and total: bad input yields a failure verdict, not a panic.
pub fn verify_deduction(d: &Deduction) -> Verdict {
    if d.steps.is_empty() {
        return Verdict::Failure(Failure {
            step: 0,
            reason: FailureReason::EmptyDeduction,
        });
    }
    for h in &d.hypotheses {
        if let Err(e) = d.sig.validate_formula(h) {
            return Verdict::Failure(Failure {
                step: 0,
                reason: FailureReason::IllFormed(e.to_string()),
            });
        }
    }
    for (idx, step) in d.steps.iter().enumerate() {
        let k = idx + 1;
        if let Err(e) = d.sig.validate_formula(&step.formula) {
            return Verdict::Failure(Failure {
                step: k,
                reason: FailureReason::IllFormed(e.to_string()),
            });
        }
        if let Err(reason) = check_step(d, idx) {
            return Verdict::Failure(Failure { step: k, reason });
        }
    }
    Verdict::Ok
}

fn check_step(d: &Deduction, idx: usize) -> Result<(), FailureReason> {
    let step = &d.steps[idx];
    match &step.justification {
        Justification::Axiom => {
            if match_axiom(&step.formula).is_none() {
                return Err(FailureReason::NotAnAxiom);
            }
        }
        Justification::Hyp(i) => {
            if *i == 0 || *i > d.hypotheses.len() {
                return Err(FailureReason::HypIndexOutOfRange(*i));
            }
            if d.hypotheses[*i - 1] != step.formula {
                return Err(FailureReason::HypMismatch(*i));
            }
        }
        Justification::Mp(i, j) => {
            let ant = earlier(d, idx, *i)?;
            let imp = earlier(d, idx, *j)?;
            let expected = Formula::implies(ant.clone(), step.formula.clone());
            if imp != &expected {
                return Err(FailureReason::MpMismatch {
                    antecedent: *i,
                    implication: *j,
                });
            }
        }
        Justification::Gen(i, var) => {
            let src = earlier(d, idx, *i)?;
            let expected = Formula::forall(var, src.clone());
            if step.formula != expected {
                return Err(FailureReason::GenMismatch {
                    source: *i,
                    var: var.clone(),
                });
            }
            for (hi, h) in d.hypotheses.iter().enumerate() {
                if h.free_vars().contains(var) {
                    return Err(FailureReason::GenOnHypVariable {
                        var: var.clone(),
                        hyp: hi + 1,
                    });
                }
            }
        }
    }
    Ok(())
}

fn earlier(d: &Deduction, idx: usize, reference: usize) -> Result<&Formula, FailureReason> {
    if reference == 0 || reference > idx {
        return Err(FailureReason::StepIndexOutOfRange(reference));
    }
    Ok(&d.steps[reference - 1].formula)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no justification found for line {line}: `{formula}`")]
pub struct InferError {
    pub line: usize,
    pub formula: String,
}

/// Elaborates a bare formula sequence into a checkable deduction. For each
/// line the search order is fixed: axiom schema, hypothesis (lowest index),
/// modus ponens over earlier lines by increasing (implication, antecedent)
/// index, then generalization sources by increasing index.
pub fn infer_justifications(
    formulas: &[Formula],
    hypotheses: &[Formula],
    sig: &Signature,
) -> Result<Deduction, InferError> {
    let mut steps: Vec<Step> = Vec::with_capacity(formulas.len());
    for (idx, f) in formulas.iter().enumerate() {
        let fail = || InferError {
            line: idx + 1,
            formula: f.to_string(),
        };
        if sig.validate_formula(f).is_err() {
            return Err(fail());
        }
        let j = infer_line(f, &steps, hypotheses).ok_or_else(fail)?;
        steps.push(Step::new(f.clone(), j));
    }
    Ok(Deduction::new(sig.clone(), hypotheses.to_vec(), steps))
}

fn infer_line(f: &Formula, earlier: &[Step], hypotheses: &[Formula]) -> Option<Justification> {
    if match_axiom(f).is_some() {
        return Some(Justification::Axiom);
    }
    if let Some(i) = hypotheses.iter().position(|h| h == f) {
        return Some(Justification::Hyp(i + 1));
    }
    for (j, step) in earlier.iter().enumerate() {
        if let Formula::Implies(ant, cons) = &step.formula {
            if cons.as_ref() == f {
                if let Some(i) = earlier.iter().position(|s| s.formula == *ant.as_ref()) {
                    return Some(Justification::Mp(i + 1, j + 1));
                }
            }
        }
    }
    if let Formula::ForAll(v, body) = f {
        let gen_legal = hypotheses.iter().all(|h| !h.free_vars().contains(v));
        if gen_legal {
            for (i, s) in earlier.iter().enumerate() {
                if &s.formula == body.as_ref() {
                    return Some(Justification::Gen(i + 1, v.clone()));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_signature_decls};

    fn sig(decls: &str) -> Signature {
        let mut s = Signature::new();
        parse_signature_decls(decls, &mut s).unwrap();
        s
    }

    fn f(text: &str, s: &Signature) -> Formula {
        parse_formula(text, s).unwrap()
    }

    #[test]
    fn schema_recognition() {
        let s = sig("P/0 Q/0 R/1 c/0");
        assert_eq!(match_axiom(&f("(P -> (Q -> P))", &s)), Some(SchemaTag::A1));
        assert_eq!(
            match_axiom(&f("((P -> (Q -> R(c))) -> ((P -> Q) -> (P -> R(c))))", &s)),
            Some(SchemaTag::A2)
        );
        assert_eq!(
            match_axiom(&f("((~P -> ~Q) -> ((~P -> Q) -> P))", &s)),
            Some(SchemaTag::A3)
        );
        assert_eq!(
            match_axiom(&f("((A x) R(x) -> R(c))", &s)),
            Some(SchemaTag::A4)
        );
        assert_eq!(
            match_axiom(&f("((A x) (P -> R(x)) -> (P -> (A x) R(x)))", &s)),
            Some(SchemaTag::A5)
        );
        assert_eq!(match_axiom(&f("(P -> Q)", &s)), None);
    }

    #[test]
    fn a4_instances() {
        let s = sig("R/1 Q/2 c/0 g/1");
        // t = x itself
        assert_eq!(
            match_axiom(&f("((A x) R(x) -> R(x))", &s)),
            Some(SchemaTag::A4)
        );
        // t = g(c)
        assert_eq!(
            match_axiom(&f("((A x) R(x) -> R(g(c)))", &s)),
            Some(SchemaTag::A4)
        );
        // no free x: rhs must equal the body verbatim
        assert_eq!(
            match_axiom(&f("((A x) (A x) R(x) -> (A x) R(x))", &s)),
            Some(SchemaTag::A4)
        );
        // inconsistent instantiation across two occurrences
        assert_eq!(match_axiom(&f("((A x) Q(x,x) -> Q(c,g(c)))", &s)), None);
    }

    #[test]
    fn a4_rejects_capture() {
        let s = sig("Q/2");
        let capture = f("((A x) (A y) Q(x,y) -> (A y) Q(y,y))", &s);
        assert_eq!(match_axiom(&capture), None);
    }

    #[test]
    fn a5_requires_x_not_free_in_antecedent() {
        let s = sig("R/1 S/1");
        let bad = f("((A x) (R(x) -> S(x)) -> (R(x) -> (A x) S(x)))", &s);
        assert_eq!(match_axiom(&bad), None);
    }

    #[test]
    fn verify_one_line_hypothesis() {
        let s = sig("P/0");
        let p = f("P", &s);
        let d = Deduction::new(
            s,
            vec![p.clone()],
            vec![Step::new(p, Justification::Hyp(1))],
        );
        assert!(verify_deduction(&d).is_ok());
    }

    #[test]
    fn verify_axiom_step() {
        let s = sig("P/0 Q/0");
        let d = Deduction::new(
            s.clone(),
            vec![],
            vec![Step::new(f("(P -> (Q -> P))", &s), Justification::Axiom)],
        );
        assert!(verify_deduction(&d).is_ok());
    }

    #[test]
    fn gen_on_free_hypothesis_variable_is_rejected() {
        let s = sig("R/1");
        let rx = f("R(x)", &s);
        let d = Deduction::new(
            s.clone(),
            vec![rx.clone()],
            vec![
                Step::new(rx.clone(), Justification::Hyp(1)),
                Step::new(f("(A x) R(x)", &s), Justification::Gen(1, "x".into())),
            ],
        );
        match verify_deduction(&d) {
            Verdict::Failure(failure) => {
                assert_eq!(failure.step, 2);
                assert_eq!(
                    failure.reason,
                    FailureReason::GenOnHypVariable {
                        var: "x".into(),
                        hyp: 1
                    }
                );
            }
            Verdict::Ok => panic!("unsound generalization accepted"),
        }
    }

    #[test]
    fn gen_on_bound_hypothesis_variable_is_fine() {
        let s = sig("R/1 P/0");
        let all = f("(A x) R(x)", &s);
        let d = Deduction::new(
            s.clone(),
            vec![all.clone(), f("P", &s)],
            vec![
                Step::new(all.clone(), Justification::Hyp(1)),
                Step::new(f("((A x) R(x) -> R(x))", &s), Justification::Axiom),
                Step::new(f("R(x)", &s), Justification::Mp(1, 2)),
                Step::new(all, Justification::Gen(3, "x".into())),
            ],
        );
        assert!(verify_deduction(&d).is_ok());
    }

    #[test]
    fn mp_shape_is_checked() {
        let s = sig("P/0 Q/0");
        let d = Deduction::new(
            s.clone(),
            vec![f("P", &s), f("(Q -> P)", &s)],
            vec![
                Step::new(f("P", &s), Justification::Hyp(1)),
                Step::new(f("(Q -> P)", &s), Justification::Hyp(2)),
                Step::new(f("Q", &s), Justification::Mp(1, 2)),
            ],
        );
        match verify_deduction(&d) {
            Verdict::Failure(failure) => {
                assert_eq!(failure.step, 3);
                assert!(matches!(failure.reason, FailureReason::MpMismatch { .. }));
            }
            Verdict::Ok => panic!("bad modus ponens accepted"),
        }
    }

    #[test]
    fn forward_references_are_rejected() {
        let s = sig("P/0 Q/0");
        let d = Deduction::new(
            s.clone(),
            vec![f("P", &s)],
            vec![Step::new(f("P", &s), Justification::Mp(1, 1))],
        );
        assert!(matches!(
            verify_deduction(&d),
            Verdict::Failure(Failure {
                step: 1,
                reason: FailureReason::StepIndexOutOfRange(1)
            })
        ));
    }

    #[test]
    fn prefix_closure() {
        let s = sig("R/1 P/0");
        let all = f("(A x) R(x)", &s);
        let d = Deduction::new(
            s.clone(),
            vec![all.clone()],
            vec![
                Step::new(all.clone(), Justification::Hyp(1)),
                Step::new(f("((A x) R(x) -> R(x))", &s), Justification::Axiom),
                Step::new(f("R(x)", &s), Justification::Mp(1, 2)),
            ],
        );
        assert!(verify_deduction(&d).is_ok());
        for n in 1..=d.steps.len() {
            let prefix = Deduction::new(d.sig.clone(), d.hypotheses.clone(), d.steps[..n].to_vec());
            assert!(verify_deduction(&prefix).is_ok(), "prefix of length {n}");
        }
    }

    #[test]
    fn infer_single_axiom() {
        let s = sig("P/0 Q/0");
        let d = infer_justifications(&[f("(P -> (Q -> P))", &s)], &[], &s).unwrap();
        assert_eq!(d.steps[0].justification, Justification::Axiom);
        assert!(verify_deduction(&d).is_ok());
    }

    #[test]
    fn infer_modus_ponens_chain() {
        let s = sig("P/0 Q/0");
        let hyps = vec![f("P", &s), f("(P -> Q)", &s)];
        let lines = vec![f("P", &s), f("(P -> Q)", &s), f("Q", &s)];
        let d = infer_justifications(&lines, &hyps, &s).unwrap();
        let justs: Vec<_> = d.steps.iter().map(|s| s.justification.clone()).collect();
        assert_eq!(
            justs,
            vec![
                Justification::Hyp(1),
                Justification::Hyp(2),
                Justification::Mp(1, 2)
            ]
        );
        assert!(verify_deduction(&d).is_ok());
    }

    #[test]
    fn infer_failure_reports_line() {
        let s = sig("P/0");
        let err = infer_justifications(&[f("P", &s)], &[], &s).unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn infer_elaborates_the_self_implication_sequence() {
        let s = sig("P/0");
        let lines = vec![
            f("(P -> ((P -> P) -> P))", &s),
            f(
                "((P -> ((P -> P) -> P)) -> ((P -> (P -> P)) -> (P -> P)))",
                &s,
            ),
            f("((P -> (P -> P)) -> (P -> P))", &s),
            f("(P -> (P -> P))", &s),
            f("(P -> P)", &s),
        ];
        let d = infer_justifications(&lines, &[], &s).unwrap();
        assert!(verify_deduction(&d).is_ok());
        assert_eq!(d.conclusion(), Some(&f("(P -> P)", &s)));
    }
}
