//! Proof transformations over verified deductions: hypothesis discharge and
//! its converse, deduction concatenation, and weakening.
//!
//! Nothing here is trusted. Every output is rebuilt from kernel rules and can
//! be re-checked with [`verify_deduction`]; the unit tests do exactly that.

use crate::kernel::{verify_deduction, Deduction, Failure, Justification, Step};
use crate::syntax::{Formula, Signature};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("input deduction does not verify: {0}")]
    NotVerified(Failure),
    #[error("`{0}` is not the last hypothesis")]
    HypothesisNotLast(String),
    #[error("`{0}` is not closed")]
    NotClosed(String),
    #[error("conclusion `{conclusion}` is not an implication with antecedent `{antecedent}`")]
    ConclusionMismatch {
        conclusion: String,
        antecedent: String,
    },
    #[error("second deduction's hypotheses must be the first's plus its conclusion")]
    HypothesesMismatch,
    #[error("result does not verify: {0}")]
    BrokenResult(Failure),
}

fn require_verified(d: &Deduction) -> Result<(), TransformError> {
    verify_deduction(d)
        .into_result()
        .map_err(TransformError::NotVerified)
}

fn require_closed(a: &Formula) -> Result<(), TransformError> {
    if a.is_closed() {
        Ok(())
    } else {
        Err(TransformError::NotClosed(a.to_string()))
    }
}

/// The five-step derivation of `a -> a` from no hypotheses:
///
/// 1. `a -> ((a -> a) -> a)`                                   A1
/// 2. `(a -> ((a -> a) -> a)) -> ((a -> (a -> a)) -> (a -> a))` A2
/// 3. `(a -> (a -> a)) -> (a -> a)`                            MP 1,2
/// 4. `a -> (a -> a)`                                          A1
/// 5. `a -> a`                                                 MP 4,3
pub fn prove_self_implication(a: &Formula, sig: &Signature) -> Deduction {
    let steps = self_implication_steps(a, 0);
    Deduction::new(sig.clone(), Vec::new(), steps)
}

/// The same five steps with internal references shifted by `offset`, for
/// splicing into a longer deduction.
fn self_implication_steps(a: &Formula, offset: usize) -> Vec<Step> {
    let a_a = Formula::implies(a.clone(), a.clone());
    let s1 = Formula::implies(a.clone(), Formula::implies(a_a.clone(), a.clone()));
    let s3 = Formula::implies(Formula::implies(a.clone(), a_a.clone()), a_a.clone());
    let s2 = Formula::implies(s1.clone(), s3.clone());
    let s4 = Formula::implies(a.clone(), a_a.clone());
    vec![
        Step::new(s1, Justification::Axiom),
        Step::new(s2, Justification::Axiom),
        Step::new(s3, Justification::Mp(offset + 1, offset + 2)),
        Step::new(s4, Justification::Axiom),
        Step::new(a_a, Justification::Mp(offset + 4, offset + 3)),
    ]
}

/// Removes the last hypothesis `a` (which must be closed) from a verified
/// deduction of `B`, producing a verified deduction of `a -> B` from the
/// remaining hypotheses.
///
/// Each original step `B_i` becomes a short block ending in `a -> B_i`,
/// dispatched on the step's justification: axiom and hypothesis steps get an
/// A1 instance plus MP; the step justified by `a`'s own hypothesis index is
/// replaced by the self-implication splice; MP steps get an A2 instance and
/// two MPs; generalization steps get Gen, an A5 instance, and MP. At most
/// five output lines per input line.
pub fn discharge(d: &Deduction, a: &Formula) -> Result<Deduction, TransformError> {
    require_verified(d)?;
    require_closed(a)?;
    if d.hypotheses.last() != Some(a) {
        return Err(TransformError::HypothesisNotLast(a.to_string()));
    }
    let last_hyp = d.hypotheses.len();

    let mut out: Vec<Step> = Vec::new();
    // output index (1-based) of the line proving `a -> B_i`, per input step
    let mut translated: Vec<usize> = Vec::with_capacity(d.steps.len());

    for step in &d.steps {
        let b = &step.formula;
        let a_b = Formula::implies(a.clone(), b.clone());
        match &step.justification {
            Justification::Hyp(i) if *i == last_hyp => {
                // B_i is a itself: splice the a -> a proof
                out.extend(self_implication_steps(a, out.len()));
            }
            Justification::Axiom | Justification::Hyp(_) => {
                // B_i, then B_i -> (a -> B_i), then MP
                out.push(Step::new(b.clone(), step.justification.clone()));
                out.push(Step::new(
                    Formula::implies(b.clone(), a_b.clone()),
                    Justification::Axiom,
                ));
                out.push(Step::new(a_b, Justification::Mp(out.len() - 1, out.len())));
            }
            Justification::Mp(i, j) => {
                // step j proved B_i -> B, step i proved B_i (original indices)
                let b_ant = &d.steps[*i - 1].formula;
                let a_bant = Formula::implies(a.clone(), b_ant.clone());
                let a_imp = Formula::implies(a.clone(), Formula::implies(b_ant.clone(), b.clone()));
                let a2 = Formula::implies(a_imp, Formula::implies(a_bant.clone(), a_b.clone()));
                out.push(Step::new(a2, Justification::Axiom));
                out.push(Step::new(
                    Formula::implies(a_bant, a_b.clone()),
                    Justification::Mp(translated[*j - 1], out.len()),
                ));
                out.push(Step::new(
                    a_b,
                    Justification::Mp(translated[*i - 1], out.len()),
                ));
            }
            Justification::Gen(i, x) => {
                let b_src = &d.steps[*i - 1].formula;
                let a_bsrc = Formula::implies(a.clone(), b_src.clone());
                let all_a_bsrc = Formula::forall(x, a_bsrc);
                // legal since a is closed, so x is not free in a
                out.push(Step::new(
                    all_a_bsrc.clone(),
                    Justification::Gen(translated[*i - 1], x.clone()),
                ));
                out.push(Step::new(
                    Formula::implies(all_a_bsrc, a_b.clone()),
                    Justification::Axiom,
                ));
                out.push(Step::new(a_b, Justification::Mp(out.len() - 1, out.len())));
            }
        }
        translated.push(out.len());
    }

    Ok(Deduction::new(
        d.sig.clone(),
        d.hypotheses[..last_hyp - 1].to_vec(),
        out,
    ))
}

/// The converse of [`discharge`]: from a verified deduction of `a -> B`,
/// appends `a` as a hypothesis and derives `B` by modus ponens.
pub fn undischarge(d: &Deduction, a: &Formula) -> Result<Deduction, TransformError> {
    require_verified(d)?;
    let conclusion = d.conclusion().expect("verified deductions are nonempty");
    let b = match conclusion {
        Formula::Implies(ant, cons) if ant.as_ref() == a => cons.as_ref().clone(),
        _ => {
            return Err(TransformError::ConclusionMismatch {
                conclusion: conclusion.to_string(),
                antecedent: a.to_string(),
            })
        }
    };
    let mut hypotheses = d.hypotheses.clone();
    hypotheses.push(a.clone());
    let n = d.steps.len();
    let mut steps = d.steps.clone();
    steps.push(Step::new(a.clone(), Justification::Hyp(hypotheses.len())));
    steps.push(Step::new(b, Justification::Mp(n + 1, n)));
    let result = Deduction::new(d.sig.clone(), hypotheses, steps);
    // an open `a` can invalidate generalization steps; never return junk
    verify_deduction(&result)
        .into_result()
        .map_err(TransformError::BrokenResult)?;
    Ok(result)
}

/// Joins a verified deduction of `A` from `T` with a verified deduction of
/// `B` from `T ++ [A]`, yielding a verified deduction of `B` from `T`.
///
/// Lines of the second deduction that cite `A`'s hypothesis index are
/// re-justified by modus ponens against a single spliced `A -> A` proof; the
/// kernel has no rule for copying an earlier step.
pub fn concat(d_a: &Deduction, d_b: &Deduction) -> Result<Deduction, TransformError> {
    require_verified(d_a)?;
    require_verified(d_b)?;
    let conclusion = d_a
        .conclusion()
        .expect("verified deductions are nonempty")
        .clone();
    let mut expected = d_a.hypotheses.clone();
    expected.push(conclusion.clone());
    if d_b.hypotheses != expected {
        return Err(TransformError::HypothesesMismatch);
    }
    let borrowed_index = d_b.hypotheses.len();
    let uses_borrowed = d_b
        .steps
        .iter()
        .any(|s| s.justification == Justification::Hyp(borrowed_index));

    let mut steps = d_a.steps.clone();
    let m = steps.len();
    let offset = if uses_borrowed {
        steps.extend(self_implication_steps(&conclusion, m));
        m + 5
    } else {
        m
    };
    for step in &d_b.steps {
        let justification = match &step.justification {
            Justification::Hyp(i) if *i == borrowed_index => {
                // conclusion at line m, A -> A at line m+5
                Justification::Mp(m, m + 5)
            }
            Justification::Hyp(i) => Justification::Hyp(*i),
            Justification::Axiom => Justification::Axiom,
            Justification::Mp(i, j) => Justification::Mp(i + offset, j + offset),
            Justification::Gen(i, v) => Justification::Gen(i + offset, v.clone()),
        };
        steps.push(Step::new(step.formula.clone(), justification));
    }
    Ok(Deduction::new(
        d_a.sig.clone(),
        d_a.hypotheses.clone(),
        steps,
    ))
}

/// Appends a closed hypothesis; the steps are untouched and stay valid.
pub fn weaken(d: &Deduction, a: &Formula) -> Result<Deduction, TransformError> {
    require_verified(d)?;
    require_closed(a)?;
    let mut hypotheses = d.hypotheses.clone();
    hypotheses.push(a.clone());
    Ok(Deduction::new(d.sig.clone(), hypotheses, d.steps.clone()))
}
