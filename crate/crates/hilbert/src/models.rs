//! Finite-domain semantics: evaluation, exhaustive model enumeration,
//! entailment scanning, and an empirical soundness check for the kernel.
//!
//! Domains are `{0, ..., k-1}`. A counterexample verdict is conclusive; a
//! no-counterexample verdict only covers the scanned sizes.

use crate::kernel::{verify_deduction, Deduction};
use crate::syntax::{Formula, Signature, Term};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Variable assignment into a finite domain.
pub type Assignment = BTreeMap<String, usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` is unassigned")]
    UnassignedVariable(String),
    #[error("symbol `{0}` has no table in this interpretation")]
    MissingTable(String),
    #[error("formula `{0}` is not closed")]
    OpenFormula(String),
    #[error("deduction does not verify: {0}")]
    NotVerified(String),
}

/// Total table for one function symbol: `values[index(args)]` with row-major
/// indexing, first argument most significant. Arity 0 means a single cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

/// Total table for one predicate symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateTable {
    pub arity: usize,
    pub values: Vec<bool>,
}

/// A finite interpretation: domain `{0, ..., domain_size-1}` plus one table
/// per declared symbol, in declaration order (functions first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub domain_size: usize,
    pub functions: Vec<(String, FunctionTable)>,
    pub predicates: Vec<(String, PredicateTable)>,
}

fn row_index(args: &[usize], k: usize) -> usize {
    args.iter().fold(0, |acc, a| acc * k + a)
}

impl Interpretation {
    fn function(&self, name: &str) -> Option<&FunctionTable> {
        self.functions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    fn predicate(&self, name: &str) -> Option<&PredicateTable> {
        self.predicates
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.domain_size)?;
        let k = self.domain_size;
        for (name, table) in &self.functions {
            for (row, value) in table.values.iter().enumerate() {
                write_row(f, name, row, table.arity, k)?;
                writeln!(f, " = {value}")?;
            }
        }
        for (name, table) in &self.predicates {
            for (row, value) in table.values.iter().enumerate() {
                write_row(f, name, row, table.arity, k)?;
                writeln!(f, " = {value}")?;
            }
        }
        Ok(())
    }
}

fn write_row(
    f: &mut fmt::Formatter<'_>,
    name: &str,
    row: usize,
    arity: usize,
    k: usize,
) -> fmt::Result {
    write!(f, "table {name}")?;
    if arity > 0 {
        let mut digits = vec![0usize; arity];
        let mut rest = row;
        for d in (0..arity).rev() {
            digits[d] = rest % k;
            rest /= k;
        }
        let rendered: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
        write!(f, " {}", rendered.join(","))?;
    }
    Ok(())
}

fn eval_term(t: &Term, m: &Interpretation, s: &Assignment) -> Result<usize, EvalError> {
    match t {
        Term::Var(v) => s
            .get(v)
            .copied()
            .ok_or_else(|| EvalError::UnassignedVariable(v.clone())),
        Term::App(name, args) => {
            let table = m
                .function(name)
                .ok_or_else(|| EvalError::MissingTable(name.clone()))?;
            let values: Vec<usize> = args
                .iter()
                .map(|a| eval_term(a, m, s))
                .collect::<Result<_, _>>()?;
            Ok(table.values[row_index(&values, m.domain_size)])
        }
    }
}

/// Tarskian satisfaction: atoms via tables, `~` and `->` classically,
/// `(A x)` as a conjunction over the whole domain.
pub fn evaluate(f: &Formula, m: &Interpretation, s: &Assignment) -> Result<bool, EvalError> {
    let mut scratch = s.clone();
    eval_formula(f, m, &mut scratch)
}

fn eval_formula(f: &Formula, m: &Interpretation, s: &mut Assignment) -> Result<bool, EvalError> {
    match f {
        Formula::Atom(p, args) => {
            let table = m
                .predicate(p)
                .ok_or_else(|| EvalError::MissingTable(p.clone()))?;
            let values: Vec<usize> = args
                .iter()
                .map(|a| eval_term(a, m, s))
                .collect::<Result<_, _>>()?;
            Ok(table.values[row_index(&values, m.domain_size)])
        }
        Formula::Not(g) => Ok(!eval_formula(g, m, s)?),
        Formula::Implies(g, h) => Ok(!eval_formula(g, m, s)? || eval_formula(h, m, s)?),
        Formula::ForAll(v, g) => {
            let saved = s.get(v).copied();
            let mut all = true;
            for d in 0..m.domain_size {
                s.insert(v.clone(), d);
                if !eval_formula(g, m, s)? {
                    all = false;
                    break;
                }
            }
            match saved {
                Some(old) => s.insert(v.clone(), old),
                None => s.remove(v),
            };
            Ok(all)
        }
    }
}

/// All interpretations of `sig` with domain size exactly `k`, in a fixed
/// canonical order: the concatenated table cells (functions first, each in
/// row-major order) counted lexicographically, rightmost cell fastest.
pub fn enumerate_interpretations(
    sig: &Signature,
    k: usize,
) -> impl Iterator<Item = Interpretation> {
    assert!(k >= 1, "domains are nonempty");
    let function_shapes: Vec<(String, usize, usize)> = sig
        .functions()
        .iter()
        .map(|(n, a)| (n.clone(), *a, k.pow(*a as u32)))
        .collect();
    let predicate_shapes: Vec<(String, usize, usize)> = sig
        .predicates()
        .iter()
        .map(|(n, a)| (n.clone(), *a, k.pow(*a as u32)))
        .collect();
    let fn_cells: usize = function_shapes.iter().map(|(_, _, c)| c).sum();
    let pred_cells: usize = predicate_shapes.iter().map(|(_, _, c)| c).sum();

    let mut counter = vec![0usize; fn_cells + pred_cells];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut functions = Vec::with_capacity(function_shapes.len());
        let mut offset = 0;
        for (name, arity, cells) in &function_shapes {
            functions.push((
                name.clone(),
                FunctionTable {
                    arity: *arity,
                    values: counter[offset..offset + cells].to_vec(),
                },
            ));
            offset += cells;
        }
        let mut predicates = Vec::with_capacity(predicate_shapes.len());
        for (name, arity, cells) in &predicate_shapes {
            predicates.push((
                name.clone(),
                PredicateTable {
                    arity: *arity,
                    values: counter[offset..offset + cells]
                        .iter()
                        .map(|v| *v == 1)
                        .collect(),
                },
            ));
            offset += cells;
        }
        let result = Interpretation {
            domain_size: k,
            functions,
            predicates,
        };
        // odometer increment, rightmost fastest; function cells range over
        // the domain, predicate cells over {0, 1}
        done = true;
        for i in (0..counter.len()).rev() {
            let radix = if i < fn_cells { k } else { 2 };
            counter[i] += 1;
            if counter[i] < radix {
                done = false;
                break;
            }
            counter[i] = 0;
        }
        Some(result)
    })
}

/// Outcome of an entailment scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntailmentVerdict {
    NoCounterexample,
    Counterexample(Interpretation),
}

impl EntailmentVerdict {
    pub fn is_entailed(&self) -> bool {
        matches!(self, EntailmentVerdict::NoCounterexample)
    }
}

/// Scans every interpretation of every domain size `1..=max_size` for a
/// model of `theory` falsifying `goal`; returns the canonically first one.
/// All formulas must be closed. No counterexample is evidence, not proof.
pub fn check_entailment(
    theory: &[Formula],
    goal: &Formula,
    sig: &Signature,
    max_size: usize,
) -> Result<EntailmentVerdict, EvalError> {
    for f in theory.iter().chain([goal]) {
        if !f.is_closed() {
            return Err(EvalError::OpenFormula(f.to_string()));
        }
    }
    let empty = Assignment::new();
    for k in 1..=max_size {
        for m in enumerate_interpretations(sig, k) {
            let mut all_true = true;
            for h in theory {
                if !evaluate(h, &m, &empty)? {
                    all_true = false;
                    break;
                }
            }
            if all_true && !evaluate(goal, &m, &empty)? {
                return Ok(EntailmentVerdict::Counterexample(m));
            }
        }
    }
    Ok(EntailmentVerdict::NoCounterexample)
}

/// True iff some hypothesis of `d` is false in `m`, or every step formula is
/// true in `m`. Requires a verified deduction with closed hypotheses and
/// steps; a `false` result indicts the kernel.
pub fn check_soundness(d: &Deduction, m: &Interpretation) -> Result<bool, EvalError> {
    if let Err(failure) = verify_deduction(d).into_result() {
        return Err(EvalError::NotVerified(failure.to_string()));
    }
    for f in d
        .hypotheses
        .iter()
        .chain(d.steps.iter().map(|s| &s.formula))
    {
        if !f.is_closed() {
            return Err(EvalError::OpenFormula(f.to_string()));
        }
    }
    let empty = Assignment::new();
    for h in &d.hypotheses {
        if !evaluate(h, m, &empty)? {
            return Ok(true);
        }
    }
    for step in &d.steps {
        if !evaluate(&step.formula, m, &empty)? {
            return Ok(false);
        }
    }
    Ok(true)
}
