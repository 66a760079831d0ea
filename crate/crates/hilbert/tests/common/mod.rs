//! Seeded random generators shared by the integration suites. Everything is
//! deterministic: fixed ChaCha streams, no time or platform dependence.

use hilbert::kernel::{verify_deduction, Deduction, Justification, Step};
use hilbert::syntax::{parse_signature_decls, Formula, Signature, Term};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The standard test signature {P/0, Q/0, R/1, c/0}.
pub fn test_sig() -> Signature {
    let mut sig = Signature::new();
    parse_signature_decls("P/0 Q/0 R/1 c/0", &mut sig).unwrap();
    sig
}

/// Variables stay in the canonical family so every generated formula is
/// Gödel-encodable.
const VAR: &str = "x0";

fn closed_atom(rng: &mut ChaCha8Rng) -> Formula {
    match rng.gen_range(0..3) {
        0 => Formula::atom("P", vec![]),
        1 => Formula::atom("Q", vec![]),
        _ => Formula::atom("R", vec![Term::constant("c")]),
    }
}

/// Atom whose free variables are contained in {x0}.
fn open_atom(rng: &mut ChaCha8Rng) -> Formula {
    if rng.gen_range(0..4) == 0 {
        Formula::atom("R", vec![Term::var(VAR)])
    } else {
        closed_atom(rng)
    }
}

/// Random closed formula of depth at most `depth`.
pub fn closed_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 {
        return closed_atom(rng);
    }
    match rng.gen_range(0..5) {
        0 => closed_atom(rng),
        1 => Formula::not(closed_formula(rng, depth - 1)),
        2 => Formula::implies(
            closed_formula(rng, depth - 1),
            closed_formula(rng, depth - 1),
        ),
        _ => Formula::forall(VAR, open_body(rng, depth - 1)),
    }
}

/// Random formula with free variables contained in {x0}.
fn open_body(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 {
        return open_atom(rng);
    }
    match rng.gen_range(0..4) {
        0 => open_atom(rng),
        1 => Formula::not(open_body(rng, depth - 1)),
        _ => Formula::implies(open_body(rng, depth - 1), open_body(rng, depth - 1)),
    }
}

fn random_axiom_instance(rng: &mut ChaCha8Rng, closed_only: bool) -> Formula {
    let pick = rng.gen_range(0..if closed_only { 3 } else { 4 });
    match pick {
        // A1: b -> (c -> b)
        0 => {
            let b = closed_formula(rng, 1);
            let c = closed_formula(rng, 1);
            Formula::implies(b.clone(), Formula::implies(c, b))
        }
        // A2 instance
        1 => {
            let b = closed_formula(rng, 1);
            let c = closed_formula(rng, 1);
            let d = closed_formula(rng, 1);
            Formula::implies(
                Formula::implies(b.clone(), Formula::implies(c.clone(), d.clone())),
                Formula::implies(Formula::implies(b.clone(), c), Formula::implies(b, d)),
            )
        }
        // A4 with t = c: (A x0) B -> B[x0 := c]; both sides closed
        2 => {
            let body = open_body(rng, 1);
            let instance = body.substitute(VAR, &Term::constant("c")).unwrap();
            Formula::implies(Formula::forall(VAR, body), instance)
        }
        // A4 with t = x0: (A x0) B -> B; the instance may be open
        _ => {
            let body = open_body(rng, 1);
            Formula::implies(Formula::forall(VAR, body.clone()), body)
        }
    }
}

/// Options for [`verified_deduction`].
#[derive(Clone, Copy)]
pub struct GenOptions {
    pub max_steps: usize,
    pub hyp_count: usize,
    /// Keep every step formula closed (soundness-suite mode).
    pub closed_steps: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_steps: 20,
            hyp_count: 2,
            closed_steps: false,
        }
    }
}

/// Random verified deduction over the test signature. Hypotheses are closed,
/// so its last hypothesis is always dischargeable.
pub fn verified_deduction(rng: &mut ChaCha8Rng, sig: &Signature, opts: GenOptions) -> Deduction {
    let hyp_count = rng.gen_range(1..=opts.hyp_count.max(1));
    let hypotheses: Vec<Formula> = (0..hyp_count).map(|_| closed_formula(rng, 2)).collect();
    let target = rng.gen_range(1..=opts.max_steps.max(1));
    let mut steps: Vec<Step> = Vec::new();

    while steps.len() < target {
        let roll = rng.gen_range(0..100);
        if roll < 25 {
            let i = rng.gen_range(1..=hypotheses.len());
            steps.push(Step::new(hypotheses[i - 1].clone(), Justification::Hyp(i)));
        } else if roll < 55 {
            let f = random_axiom_instance(rng, opts.closed_steps);
            steps.push(Step::new(f, Justification::Axiom));
        } else if roll < 85 {
            // modus ponens over an existing (antecedent, implication) pair
            let mut candidates = Vec::new();
            for (j, s) in steps.iter().enumerate() {
                if let Formula::Implies(ant, cons) = &s.formula {
                    for (i, s2) in steps.iter().enumerate() {
                        if &s2.formula == ant.as_ref() {
                            candidates.push((i + 1, j + 1, cons.as_ref().clone()));
                        }
                    }
                }
            }
            if candidates.is_empty() {
                let f = random_axiom_instance(rng, opts.closed_steps);
                steps.push(Step::new(f, Justification::Axiom));
            } else {
                let (i, j, f) = candidates[rng.gen_range(0..candidates.len())].clone();
                steps.push(Step::new(f, Justification::Mp(i, j)));
            }
        } else {
            // generalization; hypotheses are closed, so any variable is legal
            if steps.is_empty() {
                let i = rng.gen_range(1..=hypotheses.len());
                steps.push(Step::new(hypotheses[i - 1].clone(), Justification::Hyp(i)));
            } else {
                let i = rng.gen_range(1..=steps.len());
                let f = Formula::forall(VAR, steps[i - 1].formula.clone());
                steps.push(Step::new(f, Justification::Gen(i, VAR.to_string())));
            }
        }
    }

    let d = Deduction::new(sig.clone(), hypotheses, steps);
    assert!(
        verify_deduction(&d).is_ok(),
        "generator produced an unverifiable deduction: {d:?}"
    );
    d
}

/// Random verified continuation from `base_hyps ++ [borrowed]`, using the
/// borrowed hypothesis in at least one step; for exercising `concat`.
pub fn continuation_deduction(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    base_hyps: &[Formula],
    borrowed: &Formula,
    max_steps: usize,
) -> Deduction {
    let mut hypotheses = base_hyps.to_vec();
    hypotheses.push(borrowed.clone());
    let borrowed_index = hypotheses.len();
    let mut steps: Vec<Step> = vec![Step::new(
        borrowed.clone(),
        Justification::Hyp(borrowed_index),
    )];
    let gen_legal = hypotheses.iter().all(|h| !h.free_vars().contains(VAR));
    let target = rng.gen_range(1..=max_steps.max(1));
    while steps.len() < target {
        match rng.gen_range(0..4) {
            0 if !hypotheses.is_empty() => {
                let i = rng.gen_range(1..=hypotheses.len());
                steps.push(Step::new(hypotheses[i - 1].clone(), Justification::Hyp(i)));
            }
            1 if gen_legal => {
                let i = rng.gen_range(1..=steps.len());
                let f = Formula::forall(VAR, steps[i - 1].formula.clone());
                steps.push(Step::new(f, Justification::Gen(i, VAR.to_string())));
            }
            _ => {
                let f = random_axiom_instance(rng, false);
                steps.push(Step::new(f, Justification::Axiom));
            }
        }
    }
    let d = Deduction::new(sig.clone(), hypotheses, steps);
    assert!(verify_deduction(&d).is_ok());
    d
}
