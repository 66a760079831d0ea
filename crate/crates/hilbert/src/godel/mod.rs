//! Gödel numbering of formulas and deductions, the executable proof
//! relation, bounded proof search, and witness transport.
//!
//! A formula is coded by its preorder token stream `<a1, ..., ak>` mapped to
//! `2^a1 * 3^a2 * ... * pk^ak`; parentheses are unnecessary because arities
//! are fixed by the signature. A deduction is the sequence of its step
//! formulas coded the same way, with the formula codes as exponents.
//! Justifications are not coded: the proof relation re-elaborates them.
//!
//! Token codes: `~` 1, `->` 2, `A` 3; the i-th variable `x{i}` gets `4+3i`,
//! the i-th declared function `5+3i`, the i-th declared predicate `6+3i`
//! (i from 0), so the residue mod 3 of a code >= 4 determines its class.

mod number;
mod search;

pub use number::{GodelNumber, NumberError, DECIMAL_BITS_BUDGET};
pub use search::search_deduction;

use crate::dedthm;
use crate::kernel::{infer_justifications, Deduction, Justification, Step};
use crate::syntax::{Formula, Signature, Term};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("symbol `{0}` has no code (not declared, or not of the form x0, x1, ...)")]
    UnknownSymbol(String),
    #[error("not a code: {0}")]
    NotACode(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransportError {
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("{0}")]
    Transform(#[from] dedthm::TransformError),
    #[error("{0}")]
    Code(#[from] CodeError),
}

/// The logical connective codes shared by every signature.
pub const CODE_NOT: u64 = 1;
pub const CODE_IMPLIES: u64 = 2;
pub const CODE_FORALL: u64 = 3;

/// Injective code table for one signature. Variables are the canonical
/// family `x0, x1, x2, ...`; formulas must use these names to be encodable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolCode {
    sig: Signature,
}

impl SymbolCode {
    pub fn new(sig: &Signature) -> Self {
        SymbolCode { sig: sig.clone() }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Code of the canonical variable `x{index}`.
    pub fn variable_code(index: u64) -> u64 {
        4 + 3 * index
    }

    pub fn variable_name(index: u64) -> String {
        format!("x{index}")
    }

    /// Parses a canonical variable name back to its index.
    pub fn variable_index(name: &str) -> Option<u64> {
        let digits = name.strip_prefix('x')?;
        if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
            return None;
        }
        digits.parse().ok()
    }

    pub fn function_code(&self, name: &str) -> Option<u64> {
        self.sig.function_index(name).map(|i| 5 + 3 * i as u64)
    }

    pub fn predicate_code(&self, name: &str) -> Option<u64> {
        self.sig.predicate_index(name).map(|i| 6 + 3 * i as u64)
    }

    /// `code <symbol> <natural>` lines in ascending code order, covering the
    /// logical symbols, the first `var_count` variables, and every declared
    /// symbol.
    pub fn dump(&self, var_count: u64) -> String {
        let mut rows: Vec<(u64, String)> = vec![
            (CODE_NOT, "~".to_string()),
            (CODE_IMPLIES, "->".to_string()),
            (CODE_FORALL, "A".to_string()),
        ];
        for i in 0..var_count {
            rows.push((Self::variable_code(i), Self::variable_name(i)));
        }
        for (i, (name, _)) in self.sig.functions().iter().enumerate() {
            rows.push((5 + 3 * i as u64, name.clone()));
        }
        for (i, (name, _)) in self.sig.predicates().iter().enumerate() {
            rows.push((6 + 3 * i as u64, name.clone()));
        }
        rows.sort_by_key(|(code, _)| *code);
        let mut out = String::new();
        for (code, symbol) in rows {
            let _ = writeln!(out, "code {symbol} {code}");
        }
        out
    }
}

fn tokens_of_term(t: &Term, codes: &SymbolCode, out: &mut Vec<u64>) -> Result<(), CodeError> {
    match t {
        Term::Var(v) => {
            let idx =
                SymbolCode::variable_index(v).ok_or_else(|| CodeError::UnknownSymbol(v.clone()))?;
            out.push(SymbolCode::variable_code(idx));
            Ok(())
        }
        Term::App(f, args) => {
            let code = codes
                .function_code(f)
                .ok_or_else(|| CodeError::UnknownSymbol(f.clone()))?;
            out.push(code);
            args.iter().try_for_each(|a| tokens_of_term(a, codes, out))
        }
    }
}

fn tokens_of_formula(f: &Formula, codes: &SymbolCode, out: &mut Vec<u64>) -> Result<(), CodeError> {
    match f {
        Formula::Atom(p, args) => {
            let code = codes
                .predicate_code(p)
                .ok_or_else(|| CodeError::UnknownSymbol(p.clone()))?;
            out.push(code);
            args.iter().try_for_each(|a| tokens_of_term(a, codes, out))
        }
        Formula::Not(g) => {
            out.push(CODE_NOT);
            tokens_of_formula(g, codes, out)
        }
        Formula::Implies(g, h) => {
            out.push(CODE_IMPLIES);
            tokens_of_formula(g, codes, out)?;
            tokens_of_formula(h, codes, out)
        }
        Formula::ForAll(v, g) => {
            out.push(CODE_FORALL);
            let idx =
                SymbolCode::variable_index(v).ok_or_else(|| CodeError::UnknownSymbol(v.clone()))?;
            out.push(SymbolCode::variable_code(idx));
            tokens_of_formula(g, codes, out)
        }
    }
}

/// Codes the preorder token stream of `f` as a prime-exponent product.
pub fn encode_formula(f: &Formula, codes: &SymbolCode) -> Result<GodelNumber, CodeError> {
    let mut tokens = Vec::new();
    tokens_of_formula(f, codes, &mut tokens)?;
    Ok(GodelNumber::from_exponents(
        tokens.into_iter().map(BigUint::from).collect(),
    ))
}

/// An exponent itself larger than this many bits cannot be held exactly.
const EXPONENT_BITS_BUDGET: u64 = 1 << 28;

/// Codes a formula sequence: the exponent at the i-th prime is the code of
/// the i-th formula. The number 1 codes the empty sequence.
pub fn encode_sequence(formulas: &[Formula], codes: &SymbolCode) -> Result<GodelNumber, CodeError> {
    let mut exps = Vec::with_capacity(formulas.len());
    for f in formulas {
        let code = encode_formula(f, codes)?;
        let value = code
            .to_value(EXPONENT_BITS_BUDGET)
            .ok_or_else(|| CodeError::NotACode("formula code too large to exponentiate".into()))?;
        exps.push(value);
    }
    Ok(GodelNumber::from_exponents(exps))
}

/// Codes a deduction as the sequence of its step formulas. The deduction is
/// expected to verify; justifications are not part of the code.
pub fn encode_deduction(d: &Deduction, codes: &SymbolCode) -> Result<GodelNumber, CodeError> {
    encode_sequence(&d.step_formulas(), codes)
}

enum TokenClass {
    Not,
    Implies,
    ForAll,
    Var(u64),
    Func(usize),
    Pred(usize),
}

fn classify(code: u64) -> Option<TokenClass> {
    match code {
        0 => None,
        1 => Some(TokenClass::Not),
        2 => Some(TokenClass::Implies),
        3 => Some(TokenClass::ForAll),
        c => match (c - 4) % 3 {
            0 => Some(TokenClass::Var((c - 4) / 3)),
            1 => Some(TokenClass::Func(((c - 5) / 3) as usize)),
            _ => Some(TokenClass::Pred(((c - 6) / 3) as usize)),
        },
    }
}

struct TokenReader<'a> {
    tokens: &'a [u64],
    pos: usize,
    sig: &'a Signature,
}

impl<'a> TokenReader<'a> {
    fn next(&mut self) -> Result<TokenClass, CodeError> {
        let code = *self
            .tokens
            .get(self.pos)
            .ok_or_else(|| CodeError::NotACode("truncated token stream".into()))?;
        self.pos += 1;
        classify(code).ok_or_else(|| CodeError::NotACode(format!("unknown token code {code}")))
    }

    fn formula(&mut self) -> Result<Formula, CodeError> {
        match self.next()? {
            TokenClass::Not => Ok(Formula::not(self.formula()?)),
            TokenClass::Implies => {
                let lhs = self.formula()?;
                Ok(Formula::implies(lhs, self.formula()?))
            }
            TokenClass::ForAll => match self.next()? {
                TokenClass::Var(i) => {
                    let name = SymbolCode::variable_name(i);
                    Ok(Formula::forall(&name, self.formula()?))
                }
                _ => Err(CodeError::NotACode(
                    "quantifier not followed by a variable".into(),
                )),
            },
            TokenClass::Pred(i) => {
                let (name, arity) = self.sig.predicates().get(i).cloned().ok_or_else(|| {
                    CodeError::NotACode(format!("predicate index {i} undeclared"))
                })?;
                let args = (0..arity).map(|_| self.term()).collect::<Result<_, _>>()?;
                Ok(Formula::Atom(name, args))
            }
            _ => Err(CodeError::NotACode("term token in formula position".into())),
        }
    }

    fn term(&mut self) -> Result<Term, CodeError> {
        match self.next()? {
            TokenClass::Var(i) => Ok(Term::Var(SymbolCode::variable_name(i))),
            TokenClass::Func(i) => {
                let (name, arity) =
                    self.sig.functions().get(i).cloned().ok_or_else(|| {
                        CodeError::NotACode(format!("function index {i} undeclared"))
                    })?;
                let args = (0..arity).map(|_| self.term()).collect::<Result<_, _>>()?;
                Ok(Term::App(name, args))
            }
            _ => Err(CodeError::NotACode("formula token in term position".into())),
        }
    }
}

fn tokens_of_code(n: &BigUint) -> Result<Vec<u64>, CodeError> {
    let g = GodelNumber::from_value(n.clone()).map_err(|e| CodeError::NotACode(e.to_string()))?;
    let exps = g
        .exponents()
        .ok_or_else(|| CodeError::NotACode("gap in prime support".into()))?;
    exps.iter()
        .map(|e| {
            e.to_u64()
                .ok_or_else(|| CodeError::NotACode("token code out of range".into()))
        })
        .collect()
}

/// Total inverse of [`encode_formula`] on its image.
pub fn decode_formula(n: &GodelNumber, sig: &Signature) -> Result<Formula, CodeError> {
    let exps = n
        .exponents()
        .ok_or_else(|| CodeError::NotACode("gap in prime support".into()))?;
    let tokens: Vec<u64> = exps
        .iter()
        .map(|e| {
            e.to_u64()
                .ok_or_else(|| CodeError::NotACode("token code out of range".into()))
        })
        .collect::<Result<_, _>>()?;
    if tokens.is_empty() {
        return Err(CodeError::NotACode(
            "1 codes the empty sequence, not a formula".into(),
        ));
    }
    let mut reader = TokenReader {
        tokens: &tokens,
        pos: 0,
        sig,
    };
    let f = reader.formula()?;
    if reader.pos != tokens.len() {
        return Err(CodeError::NotACode("trailing tokens after formula".into()));
    }
    Ok(f)
}

/// Decodes a sequence code into its formulas; inverse of [`encode_sequence`].
pub fn decode_sequence(n: &GodelNumber, sig: &Signature) -> Result<Vec<Formula>, CodeError> {
    let exps = n
        .exponents()
        .ok_or_else(|| CodeError::NotACode("gap in prime support".into()))?;
    exps.iter()
        .map(|formula_code| {
            let tokens = tokens_of_code(formula_code)?;
            if tokens.is_empty() {
                return Err(CodeError::NotACode(
                    "exponent 1 is not a formula code".into(),
                ));
            }
            let mut reader = TokenReader {
                tokens: &tokens,
                pos: 0,
                sig,
            };
            let f = reader.formula()?;
            if reader.pos != tokens.len() {
                return Err(CodeError::NotACode("trailing tokens after formula".into()));
            }
            Ok(f)
        })
        .collect()
}

/// The executable proof relation: true iff `x` codes a formula sequence that
/// elaborates into a verified deduction from `theory` whose final formula
/// has code `y`. Total: every failure mode yields `false`.
pub fn proof_check(x: &GodelNumber, y: &GodelNumber, theory: &[Formula], sig: &Signature) -> bool {
    let Ok(formulas) = decode_sequence(x, sig) else {
        return false;
    };
    if formulas.is_empty() {
        return false; // 1 codes the empty sequence; deductions are nonempty
    }
    let Ok(d) = infer_justifications(&formulas, theory, sig) else {
        return false;
    };
    let codes = SymbolCode::new(sig);
    match encode_formula(d.conclusion().expect("nonempty"), &codes) {
        Ok(code) => &code == y,
        Err(_) => false,
    }
}

/// Decodes `x` as a witness that `theory ++ [a] |- B`, discharges `a`, and
/// returns the code of the resulting witness that `theory |- a -> B`.
pub fn transport_discharge(
    x: &GodelNumber,
    a: &Formula,
    theory: &[Formula],
    sig: &Signature,
) -> Result<GodelNumber, TransportError> {
    let formulas =
        decode_sequence(x, sig).map_err(|e| TransportError::InvalidWitness(e.to_string()))?;
    if formulas.is_empty() {
        return Err(TransportError::InvalidWitness("empty sequence".into()));
    }
    let mut extended = theory.to_vec();
    extended.push(a.clone());
    let d = infer_justifications(&formulas, &extended, sig)
        .map_err(|e| TransportError::InvalidWitness(e.to_string()))?;
    let discharged = dedthm::discharge(&d, a)?;
    let codes = SymbolCode::new(sig);
    Ok(encode_deduction(&discharged, &codes)?)
}

/// Decodes `u` as a witness that `theory |- B` and returns the code of a
/// witness that `theory |- a -> B`, obtained by appending the A1 instance
/// `B -> (a -> B)` and one modus ponens.
pub fn transport_weaken(
    u: &GodelNumber,
    a: &Formula,
    theory: &[Formula],
    sig: &Signature,
) -> Result<GodelNumber, TransportError> {
    if !a.is_closed() {
        return Err(TransportError::Transform(
            dedthm::TransformError::NotClosed(a.to_string()),
        ));
    }
    let formulas =
        decode_sequence(u, sig).map_err(|e| TransportError::InvalidWitness(e.to_string()))?;
    if formulas.is_empty() {
        return Err(TransportError::InvalidWitness("empty sequence".into()));
    }
    let mut d = infer_justifications(&formulas, theory, sig)
        .map_err(|e| TransportError::InvalidWitness(e.to_string()))?;
    let b = d.conclusion().expect("nonempty").clone();
    let a_b = Formula::implies(a.clone(), b.clone());
    let n = d.steps.len();
    d.steps.push(Step::new(
        Formula::implies(b, a_b.clone()),
        Justification::Axiom,
    ));
    d.steps.push(Step::new(a_b, Justification::Mp(n, n + 1)));
    let codes = SymbolCode::new(sig);
    Ok(encode_deduction(&d, &codes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::verify_deduction;
    use crate::syntax::{parse_formula, parse_signature_decls};

    /// {P/0, Q/0, R/1, c/0}: P -> 6, Q -> 9, R -> 12, c -> 5.
    fn test_sig() -> Signature {
        let mut s = Signature::new();
        parse_signature_decls("P/0 Q/0 R/1 c/0", &mut s).unwrap();
        s
    }

    fn f(text: &str, s: &Signature) -> Formula {
        parse_formula(text, s).unwrap()
    }

    #[test]
    fn hand_derived_formula_codes() {
        // P: token <6>, code 2^6 = 64
        let s = test_sig();
        let codes = SymbolCode::new(&s);
        let p = encode_formula(&f("P", &s), &codes).unwrap();
        assert_eq!(p.to_string(), "64");

        // ~R(x0) over {R/1}: tokens <1, 6, 4>, code 2 * 3^6 * 5^4 = 911250
        let mut small = Signature::new();
        parse_signature_decls("R/1", &mut small).unwrap();
        let small_codes = SymbolCode::new(&small);
        let nr = encode_formula(&f("~R(x0)", &small), &small_codes).unwrap();
        assert_eq!(nr.to_string(), "911250");
        assert_eq!(decode_formula(&nr, &small).unwrap(), f("~R(x0)", &small));
        assert_eq!(
            decode_formula(&"64".parse().unwrap(), &s).unwrap(),
            f("P", &s)
        );
    }

    #[test]
    fn one_line_deduction_code() {
        let s = test_sig();
        let codes = SymbolCode::new(&s);
        let d = infer_justifications(&[f("P", &s)], &[f("P", &s)], &s).unwrap();
        let n = encode_deduction(&d, &codes).unwrap();
        assert_eq!(n.to_string(), "18446744073709551616"); // 2^64
    }

    #[test]
    fn two_step_sequence_code_roundtrips() {
        let s = test_sig();
        let codes = SymbolCode::new(&s);
        let seq = vec![f("P", &s), f("(P -> (Q -> P))", &s)];
        let n = encode_sequence(&seq, &codes).unwrap();
        // 2^64 * 3^(code of the A1 instance)
        let a1_code = encode_formula(&seq[1], &codes).unwrap();
        let a1_value = a1_code.to_value(u64::MAX).unwrap();
        assert_eq!(n.exponents().unwrap(), &[BigUint::from(64u32), a1_value]);
        assert_eq!(decode_sequence(&n, &s).unwrap(), seq);
    }

    #[test]
    fn non_codes_are_rejected() {
        let s = test_sig();
        let seven: GodelNumber = "7".parse().unwrap();
        assert!(decode_formula(&seven, &s).is_err());
        assert!(decode_sequence(&seven, &s).is_err());
        let one = GodelNumber::one();
        assert!(decode_formula(&one, &s).is_err());
        assert_eq!(decode_sequence(&one, &s).unwrap(), Vec::<Formula>::new());
        // well-formed support but a term token heads the stream: 2^4 = 16
        let sixteen: GodelNumber = "16".parse().unwrap();
        assert!(decode_formula(&sixteen, &s).is_err());
    }

    #[test]
    fn variables_must_be_canonical() {
        let s = test_sig();
        let codes = SymbolCode::new(&s);
        assert!(matches!(
            encode_formula(&f("R(y)", &s), &codes),
            Err(CodeError::UnknownSymbol(_))
        ));
        assert_eq!(SymbolCode::variable_index("x0"), Some(0));
        assert_eq!(SymbolCode::variable_index("x12"), Some(12));
        assert_eq!(SymbolCode::variable_index("x01"), None);
        assert_eq!(SymbolCode::variable_index("y"), None);
    }

    #[test]
    fn proof_check_examples() {
        let s = test_sig();
        let p = f("P", &s);
        let x: GodelNumber = "18446744073709551616".parse().unwrap();
        let y: GodelNumber = "64".parse().unwrap();
        assert!(proof_check(&x, &y, &[p.clone()], &s));
        assert!(!proof_check(&x, &y, &[], &s));
        let seven: GodelNumber = "7".parse().unwrap();
        assert!(!proof_check(&seven, &y, &[p], &s));
        assert!(!proof_check(&GodelNumber::one(), &y, &[], &s));
    }

    #[test]
    fn transport_discharge_one_liner_yields_self_implication_witness() {
        let s = test_sig();
        let p = f("P", &s);
        let codes = SymbolCode::new(&s);
        let x: GodelNumber = "18446744073709551616".parse().unwrap();
        let z = transport_discharge(&x, &p, &[], &s).unwrap();
        let c = encode_formula(&f("(P -> P)", &s), &codes).unwrap();
        assert!(proof_check(&z, &c, &[], &s));
        // five steps, one per prime
        assert_eq!(z.exponents().unwrap().len(), 5);
        // far beyond decimal range: prints in factored form
        assert!(z.to_string().contains('^'));
    }

    #[test]
    fn transport_discharge_case_i() {
        let s = test_sig();
        let p = f("P", &s);
        let q = f("Q", &s);
        let codes = SymbolCode::new(&s);
        let d = infer_justifications(&[q.clone()], &[q.clone(), p.clone()], &s).unwrap();
        let x = encode_deduction(&d, &codes).unwrap();
        let z = transport_discharge(&x, &p, &[q.clone()], &s).unwrap();
        let c = encode_formula(&f("(P -> Q)", &s), &codes).unwrap();
        assert!(proof_check(&z, &c, &[q], &s));
        assert_eq!(z.exponents().unwrap().len(), 3);
    }

    #[test]
    fn transport_rejects_invalid_witness() {
        let s = test_sig();
        let p = f("P", &s);
        let seven: GodelNumber = "7".parse().unwrap();
        assert!(matches!(
            transport_discharge(&seven, &p, &[], &s),
            Err(TransportError::InvalidWitness(_))
        ));
        // decodes fine but does not elaborate from the empty theory
        let x: GodelNumber = "18446744073709551616".parse().unwrap();
        assert!(matches!(
            transport_weaken(&x, &p, &[], &s),
            Err(TransportError::InvalidWitness(_))
        ));
    }

    #[test]
    fn transport_weaken_examples() {
        let s = test_sig();
        let p = f("P", &s);
        let q = f("Q", &s);
        let codes = SymbolCode::new(&s);

        // u witnesses P from [P]; weaken by Q gives Q -> P from [P] in 3 steps
        let u: GodelNumber = "18446744073709551616".parse().unwrap();
        let z = transport_weaken(&u, &q, &[p.clone()], &s).unwrap();
        let c = encode_formula(&f("(Q -> P)", &s), &codes).unwrap();
        assert!(proof_check(&z, &c, &[p.clone()], &s));
        assert_eq!(z.exponents().unwrap().len(), 3);

        // u witnesses P -> P from []; weaken by P gives P -> (P -> P)
        let d = dedthm::prove_self_implication(&p, &s);
        let u2 = encode_deduction(&d, &codes).unwrap();
        let z2 = transport_weaken(&u2, &p, &[], &s).unwrap();
        let c2 = encode_formula(&f("(P -> (P -> P))", &s), &codes).unwrap();
        assert!(proof_check(&z2, &c2, &[], &s));
    }

    #[test]
    fn roundtrip_implies_injectivity_on_small_universe() {
        let s = test_sig();
        let codes = SymbolCode::new(&s);
        let vars = vec!["x0".to_string()];
        let formulas = crate::syntax::enumerate_formulas(&s, &vars, 1);
        for g in &formulas {
            let n = encode_formula(g, &codes).unwrap();
            assert_eq!(&decode_formula(&n, &s).unwrap(), g);
        }
    }

    #[test]
    fn prefix_codes_are_smaller() {
        let s = test_sig();
        let codes = SymbolCode::new(&s);
        let seq1 = vec![f("P", &s), f("Q", &s)];
        let seq2 = vec![f("P", &s), f("Q", &s), f("~P", &s)];
        let n1 = encode_sequence(&seq1, &codes).unwrap();
        let n2 = encode_sequence(&seq2, &codes).unwrap();
        assert!(n1 < n2);
    }

    #[test]
    fn dump_lists_codes_in_order() {
        let s = test_sig();
        let codes = SymbolCode::new(&s);
        let dump = codes.dump(2);
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(
            lines,
            vec![
                "code ~ 1",
                "code -> 2",
                "code A 3",
                "code x0 4",
                "code c 5",
                "code P 6",
                "code x1 7",
                "code Q 9",
                "code R 12",
            ]
        );
    }

    #[test]
    fn elaborated_deductions_verify() {
        let s = test_sig();
        let seq = vec![f("P", &s), f("(P -> (Q -> P))", &s), f("(Q -> P)", &s)];
        let d = infer_justifications(&seq, &[f("P", &s)], &s).unwrap();
        assert!(verify_deduction(&d).is_ok());
    }
}
