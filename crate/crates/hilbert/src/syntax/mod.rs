//! Signatures, terms, formulas, and capture-aware substitution.
//!
//! The core connectives are exactly negation, implication, and universal
//! quantification. Conjunction, disjunction, and the existential quantifier
//! are surface sugar expanded by the parser and never appear in a [`Formula`].

mod parser;
mod printer;

pub use parser::{parse_formula, parse_signature_decls, parse_term, ParseError};
pub use printer::print_formula;

use std::collections::BTreeSet;
use thiserror::Error;

/// A declared vocabulary: predicate and function symbols with arities.
///
/// Function symbols of arity 0 are constants. Predicate names start with an
/// uppercase letter, function names are all lowercase; any lowercase
/// identifier not declared as a function is a variable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    predicates: Vec<(String, usize)>,
    functions: Vec<(String, usize)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("`{0}` is not a valid predicate name (expected [A-Z][A-Za-z0-9_]*)")]
    BadPredicateName(String),
    #[error("`{0}` is not a valid function name (expected [a-z][a-z0-9_]*)")]
    BadFunctionName(String),
}

pub(crate) fn is_predicate_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Valid spelling for functions, constants, and variables alike.
pub(crate) fn is_lowercase_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if !is_predicate_name(name) {
            return Err(SignatureError::BadPredicateName(name.to_string()));
        }
        if self.contains(name) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        self.predicates.push((name.to_string(), arity));
        Ok(())
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if !is_lowercase_name(name) {
            return Err(SignatureError::BadFunctionName(name.to_string()));
        }
        if self.contains(name) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        self.functions.push((name.to_string(), arity));
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.predicate_arity(name).is_some() || self.function_arity(name).is_some()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
    }

    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|(n, _)| n == name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|(n, _)| n == name)
    }

    /// Declared predicates in declaration order.
    pub fn predicates(&self) -> &[(String, usize)] {
        &self.predicates
    }

    /// Declared functions (arity 0 = constants) in declaration order.
    pub fn functions(&self) -> &[(String, usize)] {
        &self.functions
    }

    /// Checks that every symbol of `f` is declared with the right arity and
    /// that variable positions hold valid variable spellings.
    pub fn validate_formula(&self, f: &Formula) -> Result<(), FormulaError> {
        match f {
            Formula::Atom(p, args) => {
                let arity = self
                    .predicate_arity(p)
                    .ok_or_else(|| FormulaError::UndeclaredPredicate(p.clone()))?;
                if arity != args.len() {
                    return Err(FormulaError::ArityMismatch {
                        symbol: p.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|t| self.validate_term(t))
            }
            Formula::Not(g) => self.validate_formula(g),
            Formula::Implies(g, h) => {
                self.validate_formula(g)?;
                self.validate_formula(h)
            }
            Formula::ForAll(v, g) => {
                self.validate_variable(v)?;
                self.validate_formula(g)
            }
        }
    }

    pub fn validate_term(&self, t: &Term) -> Result<(), FormulaError> {
        match t {
            Term::Var(v) => self.validate_variable(v),
            Term::App(f, args) => {
                let arity = self
                    .function_arity(f)
                    .ok_or_else(|| FormulaError::UndeclaredFunction(f.clone()))?;
                if arity != args.len() {
                    return Err(FormulaError::ArityMismatch {
                        symbol: f.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.validate_term(a))
            }
        }
    }

    fn validate_variable(&self, v: &str) -> Result<(), FormulaError> {
        if !is_lowercase_name(v) || self.function_arity(v).is_some() {
            return Err(FormulaError::BadVariable(v.to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("undeclared predicate `{0}`")]
    UndeclaredPredicate(String),
    #[error("undeclared function `{0}`")]
    UndeclaredFunction(String),
    #[error("`{symbol}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("`{0}` cannot be used as a variable")]
    BadVariable(String),
}

/// A first-order term: a variable or a function application. Constants are
/// applications of 0-ary function symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Self {
        Term::App(name.to_string(), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Self {
        Term::App(name.to_string(), args)
    }

    /// All variables occurring in the term.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    fn substitute(&self, var: &str, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => t.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.substitute(var, t)).collect(),
            ),
        }
    }
}

/// A first-order formula over the primitive connectives `~`, `->`, `(A x)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
}

/// Substituting `t` for `v` would capture a variable of `t`.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("term `{term}` is not free for `{var}` in `{formula}`")]
pub struct CaptureError {
    pub var: String,
    pub term: String,
    pub formula: String,
}

impl Formula {
    pub fn atom(name: &str, args: Vec<Term>) -> Self {
        Formula::Atom(name.to_string(), args)
    }

    #[allow(clippy::should_implement_trait)] // constructor, not an operator
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Self {
        Formula::Implies(Box::new(antecedent), Box::new(consequent))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::ForAll(var.to_string(), Box::new(body))
    }

    /// The set of variables with at least one free occurrence.
    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::Atom(_, args) => {
                let mut out = BTreeSet::new();
                args.iter().for_each(|t| t.collect_vars(&mut out));
                out
            }
            Formula::Not(f) => f.free_vars(),
            Formula::Implies(f, g) => {
                let mut out = f.free_vars();
                out.extend(g.free_vars());
                out
            }
            Formula::ForAll(v, f) => {
                let mut out = f.free_vars();
                out.remove(v);
                out
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True iff no free occurrence of `var` lies inside the scope of a
    /// quantifier binding a variable of `term`.
    pub fn is_free_for(&self, term: &Term, var: &str) -> bool {
        match self {
            Formula::Atom(_, _) => true,
            Formula::Not(f) => f.is_free_for(term, var),
            Formula::Implies(f, g) => f.is_free_for(term, var) && g.is_free_for(term, var),
            Formula::ForAll(v, f) => {
                if v == var {
                    return true; // no free occurrence of var below
                }
                if term.vars().contains(v) && f.free_vars().contains(var) {
                    return false;
                }
                f.is_free_for(term, var)
            }
        }
    }

    /// Replaces every free occurrence of `var` by `term`. Capture is an
    /// error, never repaired by renaming.
    pub fn substitute(&self, var: &str, term: &Term) -> Result<Formula, CaptureError> {
        if !self.is_free_for(term, var) {
            return Err(CaptureError {
                var: var.to_string(),
                term: term.to_string(),
                formula: self.to_string(),
            });
        }
        Ok(self.substitute_unchecked(var, term))
    }

    fn substitute_unchecked(&self, var: &str, term: &Term) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter().map(|t| t.substitute(var, term)).collect(),
            ),
            Formula::Not(f) => Formula::not(f.substitute_unchecked(var, term)),
            Formula::Implies(f, g) => Formula::implies(
                f.substitute_unchecked(var, term),
                g.substitute_unchecked(var, term),
            ),
            Formula::ForAll(v, f) if v == var => Formula::ForAll(v.clone(), f.clone()),
            Formula::ForAll(v, f) => {
                Formula::ForAll(v.clone(), Box::new(f.substitute_unchecked(var, term)))
            }
        }
    }

    /// Number of connective/quantifier nodes above the deepest atom.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_, _) => 0,
            Formula::Not(f) | Formula::ForAll(_, f) => 1 + f.depth(),
            Formula::Implies(f, g) => 1 + f.depth().max(g.depth()),
        }
    }

    /// Total node count, connectives plus atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, _) => 1,
            Formula::Not(f) | Formula::ForAll(_, f) => 1 + f.size(),
            Formula::Implies(f, g) => 1 + f.size() + g.size(),
        }
    }

    /// All subformulas including `self`, deduplicated, in first-visit
    /// (preorder) order.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut Vec<Formula>) {
        if out.contains(self) {
            return;
        }
        out.push(self.clone());
        match self {
            Formula::Atom(_, _) => {}
            Formula::Not(f) | Formula::ForAll(_, f) => f.collect_subformulas(out),
            Formula::Implies(f, g) => {
                f.collect_subformulas(out);
                g.collect_subformulas(out);
            }
        }
    }
}

/// Exhaustively enumerates the well-formed formulas of depth at most
/// `max_depth` over `sig`, using `vars` as the variable supply and terms of
/// depth at most 1. Deterministic: each depth level lists atoms, negations,
/// implications, then quantifications, each over the previous level in order.
pub fn enumerate_formulas(sig: &Signature, vars: &[String], max_depth: usize) -> Vec<Formula> {
    let terms = enumerate_terms(sig, vars);
    let mut atoms = Vec::new();
    for (p, arity) in sig.predicates() {
        for args in tuples(&terms, *arity) {
            atoms.push(Formula::Atom(p.clone(), args));
        }
    }
    let mut level = atoms.clone();
    for _ in 0..max_depth {
        let mut next = atoms.clone();
        let mut seen: std::collections::HashSet<Formula> = next.iter().cloned().collect();
        let mut push = |out: &mut Vec<Formula>, f: Formula| {
            if seen.insert(f.clone()) {
                out.push(f);
            }
        };
        for f in &level {
            push(&mut next, Formula::not(f.clone()));
        }
        for f in &level {
            for g in &level {
                push(&mut next, Formula::implies(f.clone(), g.clone()));
            }
        }
        for v in vars {
            for f in &level {
                push(&mut next, Formula::forall(v, f.clone()));
            }
        }
        level = next;
    }
    level
}

/// Terms of depth at most 1: variables, constants, and single applications.
pub fn enumerate_terms(sig: &Signature, vars: &[String]) -> Vec<Term> {
    let mut base: Vec<Term> = vars.iter().map(|v| Term::var(v)).collect();
    for (f, arity) in sig.functions() {
        if *arity == 0 {
            base.push(Term::constant(f));
        }
    }
    let mut out = base.clone();
    for (f, arity) in sig.functions() {
        if *arity > 0 {
            for args in tuples(&base, *arity) {
                out.push(Term::App(f.clone(), args));
            }
        }
    }
    out
}

fn tuples<T: Clone>(pool: &[T], len: usize) -> Vec<Vec<T>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for prefix in tuples(pool, len - 1) {
        for item in pool {
            let mut tuple = prefix.clone();
            tuple.push(item.clone());
            out.push(tuple);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn test_sig() -> Signature {
        let mut sig = Signature::new();
        sig.declare_predicate("P", 0).unwrap();
        sig.declare_predicate("Q", 2).unwrap();
        sig.declare_predicate("R", 1).unwrap();
        sig.declare_function("c", 0).unwrap();
        sig
    }

    fn r_of(t: Term) -> Formula {
        Formula::atom("R", vec![t])
    }

    #[test]
    fn free_vars_examples() {
        let rx = r_of(Term::var("x"));
        assert_eq!(rx.free_vars(), BTreeSet::from(["x".to_string()]));
        let all = Formula::forall("x", rx.clone());
        assert!(all.free_vars().is_empty());
        // only the left occurrence is free
        let f = Formula::implies(rx.clone(), all);
        assert_eq!(f.free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn is_free_for_examples() {
        let q_xy = Formula::atom("Q", vec![Term::var("x"), Term::var("y")]);
        let under_y = Formula::forall("y", q_xy.clone());
        assert!(under_y.is_free_for(&Term::constant("c"), "x"));
        assert!(!under_y.is_free_for(&Term::var("y"), "x"));
        assert!(q_xy.is_free_for(&Term::var("y"), "x"));
    }

    #[test]
    fn substitute_examples() {
        let rx = r_of(Term::var("x"));
        let rc = r_of(Term::constant("c"));
        assert_eq!(rx.substitute("x", &Term::constant("c")).unwrap(), rc);

        let closed = Formula::forall("x", rx);
        assert_eq!(
            closed.substitute("x", &Term::constant("c")).unwrap(),
            closed
        );

        let q_xy = Formula::atom("Q", vec![Term::var("x"), Term::var("y")]);
        let under_y = Formula::forall("y", q_xy);
        assert!(under_y.substitute("x", &Term::var("y")).is_err());
    }

    #[test]
    fn substitute_noop_when_not_free() {
        let f = Formula::forall("x", r_of(Term::var("x")));
        let g = f.substitute("y", &Term::constant("c")).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn validate_catches_arity_and_symbols() {
        let sig = test_sig();
        let bad = Formula::atom("R", vec![Term::var("x"), Term::var("y")]);
        assert!(matches!(
            sig.validate_formula(&bad),
            Err(FormulaError::ArityMismatch { .. })
        ));
        let undeclared = Formula::atom("S", vec![]);
        assert!(matches!(
            sig.validate_formula(&undeclared),
            Err(FormulaError::UndeclaredPredicate(_))
        ));
        // a declared function name cannot be a variable
        let shadow = r_of(Term::var("c"));
        assert!(matches!(
            sig.validate_formula(&shadow),
            Err(FormulaError::BadVariable(_))
        ));
    }

    /// Signature with one 0-ary and one 1-ary predicate, one constant; the
    /// variable supply is a single `x`.
    fn roundtrip_sig() -> Signature {
        let mut sig = Signature::new();
        sig.declare_predicate("P", 0).unwrap();
        sig.declare_predicate("R", 1).unwrap();
        sig.declare_function("c", 0).unwrap();
        sig
    }

    #[test]
    fn exhaustive_roundtrip_depth_3() {
        let sig = roundtrip_sig();
        let vars = vec!["x".to_string()];
        let all = enumerate_formulas(&sig, &vars, 3);
        assert!(all.len() > 100_000, "expected a substantial universe");
        for f in &all {
            let printed = print_formula(f);
            let back = parse_formula(&printed, &sig).unwrap();
            assert_eq!(&back, f, "round-trip failed for {printed}");
        }
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        prop_oneof![
            Just(Term::var("x")),
            Just(Term::var("y")),
            Just(Term::constant("c")),
        ]
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::atom("P", vec![])),
            arb_term().prop_map(|t| Formula::atom("R", vec![t])),
            (arb_term(), arb_term()).prop_map(|(s, t)| Formula::atom("Q", vec![s, t])),
        ];
        leaf.prop_recursive(4, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(f, g)| Formula::implies(f, g)),
                ("[xy]", inner).prop_map(|(v, f)| Formula::forall(&v, f)),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_print_roundtrip(f in arb_formula()) {
            let sig = test_sig();
            let back = parse_formula(&print_formula(&f), &sig).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn substitute_is_identity_off_free_vars(f in arb_formula()) {
            // `z` never occurs in generated formulas
            let g = f.substitute("z", &Term::constant("c")).unwrap();
            prop_assert_eq!(g, f);
        }

        #[test]
        fn forall_removes_bound_var(f in arb_formula(), v in "[xy]") {
            let mut expected = f.free_vars();
            expected.remove(&v);
            prop_assert_eq!(Formula::forall(&v, f).free_vars(), expected);
        }

        #[test]
        fn variable_free_terms_are_free_for_anything(f in arb_formula(), v in "[xyz]") {
            prop_assert!(f.is_free_for(&Term::constant("c"), &v));
        }
    }
}
