//! Bounded, deterministic proof search.
//!
//! The search saturates forward over a finite candidate universe instead of
//! enumerating raw deduction sequences (whose count is astronomical even at
//! tiny bounds). The universe is built from a formula pool (every
//! well-formed formula of depth <= `pool_depth` plus all subformulas of the
//! theory and the goal) closed under axiom-schema instantiation over the
//! pool, subformulas, and one layer of quantification. Modus ponens and
//! generalization are then applied for up to `max_len` rounds. A found proof
//! is read back off the derivation pointers, deduplicated, and rejected if it
//! exceeds `max_len` lines.
//!
//! An empty result reports bound exhaustion, never refutation.

use super::{encode_deduction, CodeError, GodelNumber, SymbolCode};
use crate::kernel::{match_axiom, verify_deduction, Deduction, Justification, Step};
use crate::syntax::{enumerate_formulas, enumerate_terms, Formula, Signature};
use std::collections::HashMap;

/// Instance enumeration caps keep degenerate pool sizes from exhausting
/// memory; searches that hit them simply explore a truncated universe.
const MAX_SCHEMA_INSTANCES: usize = 200_000;
const MAX_POOL: usize = 20_000;

/// Searches for a deduction of `goal` from `theory` within the given bounds
/// and returns it together with its Gödel number. Encoding fails only when a
/// found witness mentions variables outside the canonical `x0, x1, ...`
/// family.
pub fn search_deduction(
    goal: &Formula,
    theory: &[Formula],
    sig: &Signature,
    max_len: usize,
    pool_depth: usize,
) -> Result<Option<(Deduction, GodelNumber)>, CodeError> {
    if max_len == 0 {
        return Ok(None);
    }
    let mut space = Space::new(goal, theory, sig, pool_depth);
    let goal_idx = space.intern(goal.clone());
    space.saturate(max_len, goal_idx);
    let Some(steps) = space.reconstruct(goal_idx, max_len) else {
        return Ok(None);
    };
    let d = Deduction::new(sig.clone(), theory.to_vec(), steps);
    debug_assert!(verify_deduction(&d).is_ok());
    let codes = SymbolCode::new(sig);
    let number = encode_deduction(&d, &codes)?;
    Ok(Some((d, number)))
}

#[derive(Clone)]
enum Derivation {
    Hyp(usize),
    Axiom,
    Mp {
        antecedent: usize,
        implication: usize,
    },
    Gen {
        source: usize,
        var: String,
    },
}

struct Space {
    formulas: Vec<Formula>,
    index: HashMap<Formula, usize>,
    /// For interned implications, the (lhs, rhs) member indices.
    implication_parts: Vec<Option<(usize, usize)>>,
    derived: Vec<Option<Derivation>>,
    vars: Vec<String>,
    hypotheses: Vec<Formula>,
}

impl Space {
    fn new(goal: &Formula, theory: &[Formula], sig: &Signature, pool_depth: usize) -> Self {
        let mut vars: Vec<String> = Vec::new();
        for f in theory.iter().chain([goal]) {
            collect_all_vars(f, &mut vars);
        }
        vars.sort();
        vars.dedup();
        if vars.is_empty() {
            vars.push("x0".to_string());
        }

        let mut space = Space {
            formulas: Vec::new(),
            index: HashMap::new(),
            implication_parts: Vec::new(),
            derived: Vec::new(),
            vars,
            hypotheses: theory.to_vec(),
        };

        // pool: subformulas of goal and theory first, then the depth-bounded
        // enumeration, so schema-instance caps favor relevant formulas
        let mut pool: Vec<Formula> = Vec::new();
        let mut seen: HashMap<Formula, ()> = HashMap::new();
        let mut push = |pool: &mut Vec<Formula>, f: Formula| {
            if pool.len() < MAX_POOL && seen.insert(f.clone(), ()).is_none() {
                pool.push(f);
            }
        };
        for f in [goal].into_iter().chain(theory) {
            for sub in f.subformulas() {
                push(&mut pool, sub);
            }
        }
        for depth in 0..=pool_depth {
            let level = enumerate_formulas(sig, &space.vars.clone(), depth);
            let level_len = level.len();
            for f in level {
                push(&mut pool, f);
            }
            // the next level squares the current one; stop before it explodes
            if pool.len() >= MAX_POOL || level_len > 2_000 {
                break;
            }
        }

        for h in theory {
            space.intern(h.clone());
        }
        space.intern(goal.clone());
        for f in &pool {
            space.intern(f.clone());
        }
        space.add_schema_instances(&pool, sig);

        // one layer of quantifications over the pool as generalization
        // targets; deeper targets must already be in the pool or the goal
        for f in &pool {
            for v in space.vars.clone() {
                space.intern(Formula::forall(&v, f.clone()));
            }
        }
        space
    }

    /// Interns `f` and, recursively, every subformula. Returns the index.
    fn intern(&mut self, f: Formula) -> usize {
        if let Some(&i) = self.index.get(&f) {
            return i;
        }
        let parts = match &f {
            Formula::Atom(_, _) => None,
            Formula::Not(g) => {
                self.intern(g.as_ref().clone());
                None
            }
            Formula::ForAll(_, g) => {
                self.intern(g.as_ref().clone());
                None
            }
            Formula::Implies(a, b) => {
                let ai = self.intern(a.as_ref().clone());
                let bi = self.intern(b.as_ref().clone());
                Some((ai, bi))
            }
        };
        let i = self.formulas.len();
        self.formulas.push(f.clone());
        self.index.insert(f, i);
        self.implication_parts.push(parts);
        self.derived.push(None);
        i
    }

    fn add_schema_instances(&mut self, pool: &[Formula], sig: &Signature) {
        let mut budget = MAX_SCHEMA_INSTANCES;
        let mut add = |space: &mut Space, f: Formula| {
            if budget > 0 {
                space.intern(f);
                budget -= 1;
            }
        };

        // A1: B -> (C -> B)
        for b in pool {
            for c in pool {
                add(
                    self,
                    Formula::implies(b.clone(), Formula::implies(c.clone(), b.clone())),
                );
            }
        }
        // A3: (~C -> ~B) -> ((~C -> B) -> C)
        for c in pool {
            for b in pool {
                let nc = Formula::not(c.clone());
                add(
                    self,
                    Formula::implies(
                        Formula::implies(nc.clone(), Formula::not(b.clone())),
                        Formula::implies(Formula::implies(nc, b.clone()), c.clone()),
                    ),
                );
            }
        }
        // A4: (A x) B -> B[x:=t]
        let terms = enumerate_terms(sig, &self.vars.clone());
        for b in pool {
            for v in self.vars.clone() {
                for t in &terms {
                    if let Ok(instance) = b.substitute(&v, t) {
                        add(
                            self,
                            Formula::implies(Formula::forall(&v, b.clone()), instance),
                        );
                    }
                }
            }
        }
        // A5: (A x)(B -> C) -> (B -> (A x) C), x not free in B
        for b in pool {
            for c in pool {
                for v in self.vars.clone() {
                    if b.free_vars().contains(&v) {
                        continue;
                    }
                    add(
                        self,
                        Formula::implies(
                            Formula::forall(&v, Formula::implies(b.clone(), c.clone())),
                            Formula::implies(b.clone(), Formula::forall(&v, c.clone())),
                        ),
                    );
                }
            }
        }
        // A2: (B -> (C -> D)) -> ((B -> C) -> (B -> D)); cubic, so last
        'outer: for b in pool {
            for c in pool {
                for d in pool {
                    if budget == 0 {
                        break 'outer;
                    }
                    let bc = Formula::implies(b.clone(), c.clone());
                    let bd = Formula::implies(b.clone(), d.clone());
                    let cd = Formula::implies(c.clone(), d.clone());
                    self.intern(Formula::implies(
                        Formula::implies(b.clone(), cd),
                        Formula::implies(bc, bd),
                    ));
                    budget -= 1;
                }
            }
        }
    }

    fn saturate(&mut self, max_rounds: usize, goal_idx: usize) {
        // round 0: hypotheses and every axiom instance in the universe
        for (i, h) in self.hypotheses.clone().into_iter().enumerate() {
            let idx = self.index[&h];
            if self.derived[idx].is_none() {
                self.derived[idx] = Some(Derivation::Hyp(i + 1));
            }
        }
        for i in 0..self.formulas.len() {
            if self.derived[i].is_none() && match_axiom(&self.formulas[i]).is_some() {
                self.derived[i] = Some(Derivation::Axiom);
            }
        }

        // generalization edges (source index, target index), restricted to
        // variables not free in any hypothesis
        let mut gen_edges: Vec<(usize, usize)> = Vec::new();
        let gen_legal: Vec<String> = self
            .vars
            .iter()
            .filter(|v| self.hypotheses.iter().all(|h| !h.free_vars().contains(*v)))
            .cloned()
            .collect();
        for (ti, f) in self.formulas.iter().enumerate() {
            if let Formula::ForAll(v, body) = f {
                if gen_legal.contains(v) {
                    if let Some(&si) = self.index.get(body.as_ref()) {
                        gen_edges.push((si, ti));
                    }
                }
            }
        }

        for _ in 0..max_rounds {
            if self.derived[goal_idx].is_some() {
                return;
            }
            let mut changed = false;
            for i in 0..self.formulas.len() {
                if self.derived[i].is_none() {
                    continue;
                }
                if let Some((lhs, rhs)) = self.implication_parts[i] {
                    if self.derived[lhs].is_some() && self.derived[rhs].is_none() {
                        self.derived[rhs] = Some(Derivation::Mp {
                            antecedent: lhs,
                            implication: i,
                        });
                        changed = true;
                    }
                }
            }
            for &(si, ti) in &gen_edges {
                if self.derived[si].is_some() && self.derived[ti].is_none() {
                    let Formula::ForAll(v, _) = &self.formulas[ti] else {
                        unreachable!()
                    };
                    self.derived[ti] = Some(Derivation::Gen {
                        source: si,
                        var: v.clone(),
                    });
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Reads the derivation DAG back into a deduplicated step list.
    fn reconstruct(&self, goal_idx: usize, max_len: usize) -> Option<Vec<Step>> {
        self.derived[goal_idx].as_ref()?;
        let mut lines: Vec<Step> = Vec::new();
        let mut line_of: HashMap<usize, usize> = HashMap::new();
        self.emit(goal_idx, &mut lines, &mut line_of);
        if lines.len() > max_len {
            return None;
        }
        Some(lines)
    }

    fn emit(
        &self,
        idx: usize,
        lines: &mut Vec<Step>,
        line_of: &mut HashMap<usize, usize>,
    ) -> usize {
        if let Some(&l) = line_of.get(&idx) {
            return l;
        }
        let justification = match self.derived[idx]
            .as_ref()
            .expect("emitted only when derived")
        {
            Derivation::Hyp(i) => Justification::Hyp(*i),
            Derivation::Axiom => Justification::Axiom,
            Derivation::Mp {
                antecedent,
                implication,
            } => {
                let a = self.emit(*antecedent, lines, line_of);
                let b = self.emit(*implication, lines, line_of);
                Justification::Mp(a, b)
            }
            Derivation::Gen { source, var } => {
                let s = self.emit(*source, lines, line_of);
                Justification::Gen(s, var.clone())
            }
        };
        lines.push(Step::new(self.formulas[idx].clone(), justification));
        let line = lines.len();
        line_of.insert(idx, line);
        line
    }
}

fn collect_all_vars(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Atom(_, args) => {
            for t in args {
                for v in t.vars() {
                    out.push(v);
                }
            }
        }
        Formula::Not(g) => collect_all_vars(g, out),
        Formula::Implies(g, h) => {
            collect_all_vars(g, out);
            collect_all_vars(h, out);
        }
        Formula::ForAll(v, g) => {
            out.push(v.clone());
            collect_all_vars(g, out);
        }
    }
}
