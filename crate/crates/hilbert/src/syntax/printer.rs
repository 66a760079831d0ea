//! Canonical ASCII printing. Output always uses the primitive connectives;
//! sugar forms are never reintroduced.

use super::{Formula, Term};
use std::fmt;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => write_applied(f, name, args),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(name, args) if args.is_empty() => write!(f, "{name}"),
            Formula::Atom(name, args) => write_applied(f, name, args),
            Formula::Not(inner) => write!(f, "~{inner}"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::ForAll(v, body) => write!(f, "(A {v}) {body}"),
        }
    }
}

fn write_applied(f: &mut fmt::Formatter<'_>, name: &str, args: &[Term]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, arg) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{arg}")?;
    }
    write!(f, ")")
}

/// Renders a formula in the grammar the parser accepts; parsing the result
/// yields a structurally equal formula.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}
