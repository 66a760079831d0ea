//! A small trusted kernel for Hilbert-style first-order deductions, together
//! with the machinery built on top of it:
//!
//! - [`syntax`]: signatures, terms, formulas, parsing, printing, and
//!   capture-aware substitution;
//! - [`kernel`]: axiom-schema recognizers, the deduction verifier, and
//!   justification inference for bare formula sequences;
//! - [`dedthm`]: proof transformations: hypothesis discharge and its
//!   converse, deduction concatenation, and weakening;
//! - [`godel`]: Gödel numbering of formulas and deductions, the executable
//!   proof relation, bounded proof search, and witness transport;
//! - [`models`]: finite-domain interpretations, entailment scanning, and
//!   empirical soundness checks.
//!
//! Only the kernel is trusted: every transformation produces deductions that
//! are re-checked by [`kernel::verify_deduction`].

pub mod cli;
pub mod dedthm;
pub mod godel;
pub mod kernel;
pub mod models;
pub mod syntax;
