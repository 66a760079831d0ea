//! Arbitrary-precision naturals in exact factored form.
//!
//! Sequence codes are products `p1^e1 * p2^e2 * ...` over the consecutive
//! primes. The exponents of a deduction code are themselves formula codes, so
//! the positional value can exceed any machine's memory by many orders of
//! magnitude while its factorization stays tiny. [`GodelNumber`] therefore
//! stores the exponent vector exactly and only materializes decimal digits
//! when the value fits a budget.
//!
//! Values that are not products of an initial run of primes (7, say, or
//! anything with a large prime factor) are kept verbatim; they are never
//! valid codes. Canonicalization at construction makes the representation
//! unique per value, so equality is structural.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Values whose decimal expansion stays under this many bits are printed in
/// decimal; larger codes print in factored form.
pub const DECIMAL_BITS_BUDGET: u64 = 1 << 17;

/// First `n`-ish primes by trial division; desk-scale codes need a few dozen.
pub(crate) struct Primes {
    known: Vec<u64>,
}

impl Primes {
    pub(crate) fn new() -> Self {
        Primes { known: vec![2, 3] }
    }

    pub(crate) fn get(&mut self, index: usize) -> u64 {
        while self.known.len() <= index {
            let mut candidate = self.known.last().unwrap() + 2;
            loop {
                if self
                    .known
                    .iter()
                    .take_while(|p| *p * *p <= candidate)
                    .all(|p| !candidate.is_multiple_of(*p))
                {
                    break;
                }
                candidate += 2;
            }
            self.known.push(candidate);
        }
        self.known[index]
    }
}

/// A natural number >= 1 encoding a formula or a deduction (or an arbitrary
/// natural supplied from outside, which may fail to be a code at all).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GodelNumber {
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `value = prod primes[i]^exps[i]`, every exponent >= 1. Empty vector
    /// means 1, the code of the empty sequence.
    Exponents(Vec<BigUint>),
    /// Not a product of an initial run of primes; held as-is.
    Raw(BigUint),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumberError {
    #[error("Gödel numbers are naturals >= 1")]
    Zero,
    #[error("cannot parse `{0}` as a Gödel number")]
    Malformed(String),
    #[error("factored input must list consecutive primes starting at 2")]
    NotCanonicalFactored,
}

impl GodelNumber {
    pub fn one() -> Self {
        GodelNumber {
            repr: Repr::Exponents(Vec::new()),
        }
    }

    /// Builds `prod primes[i]^exps[i]`. Exponents must all be nonzero, or
    /// the representation would stop being canonical.
    pub fn from_exponents(exps: Vec<BigUint>) -> Self {
        assert!(
            exps.iter().all(|e| !e.is_zero()),
            "zero exponent in sequence code"
        );
        GodelNumber {
            repr: Repr::Exponents(exps),
        }
    }

    /// Canonicalizes an arbitrary natural by peeling consecutive primes.
    pub fn from_value(value: BigUint) -> Result<Self, NumberError> {
        if value.is_zero() {
            return Err(NumberError::Zero);
        }
        let original = value.clone();
        let mut cofactor = value;
        let mut exps: Vec<BigUint> = Vec::new();
        let mut primes = Primes::new();
        for index in 0.. {
            if cofactor.is_one() {
                return Ok(GodelNumber {
                    repr: Repr::Exponents(exps),
                });
            }
            let p = BigUint::from(primes.get(index));
            let mut e = 0u64;
            while (&cofactor % &p).is_zero() {
                cofactor /= &p;
                e += 1;
            }
            if e == 0 {
                // support gap or a large prime factor: not a code
                return Ok(GodelNumber {
                    repr: Repr::Raw(original),
                });
            }
            exps.push(BigUint::from(e));
        }
        unreachable!()
    }

    /// The exponent sequence, when the value is a product of an initial run
    /// of primes. `None` means the value cannot be a code.
    pub fn exponents(&self) -> Option<&[BigUint]> {
        match &self.repr {
            Repr::Exponents(e) => Some(e),
            Repr::Raw(_) => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.repr, Repr::Exponents(e) if e.is_empty())
    }

    /// Approximate size in bits of the positional value.
    pub fn bits_estimate(&self) -> f64 {
        match &self.repr {
            Repr::Raw(v) => v.bits() as f64,
            Repr::Exponents(exps) => {
                let mut primes = Primes::new();
                exps.iter()
                    .enumerate()
                    .map(|(i, e)| {
                        let p = primes.get(i) as f64;
                        e.to_f64().unwrap_or(f64::INFINITY) * p.log2()
                    })
                    .sum()
            }
        }
    }

    /// Materializes the positional value if it fits in `budget_bits`.
    pub fn to_value(&self, budget_bits: u64) -> Option<BigUint> {
        match &self.repr {
            Repr::Raw(v) => Some(v.clone()),
            Repr::Exponents(exps) => {
                if self.bits_estimate() > budget_bits as f64 {
                    return None;
                }
                let mut primes = Primes::new();
                let mut acc = BigUint::one();
                for (i, e) in exps.iter().enumerate() {
                    let e = e.to_u32()?;
                    acc *= BigUint::from(primes.get(i)).pow(e);
                }
                Some(acc)
            }
        }
    }

    /// True iff `self` divides `other`; decidable directly on factored forms.
    pub fn divides(&self, other: &GodelNumber) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Exponents(a), Repr::Exponents(b)) => {
                a.len() <= b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
            }
            _ => match (
                self.to_value(DECIMAL_BITS_BUDGET),
                other.to_value(DECIMAL_BITS_BUDGET),
            ) {
                (Some(x), Some(y)) => (&y % &x).is_zero(),
                _ => false,
            },
        }
    }
}

/// Magnitude comparison is partial: it is decided structurally (equality,
/// divisibility) or by materializing both sides within the decimal budget.
/// Pairs that are huge and multiplicatively unrelated compare as `None`.
impl PartialOrd for GodelNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        if self.divides(other) {
            return Some(Ordering::Less);
        }
        if other.divides(self) {
            return Some(Ordering::Greater);
        }
        let a = self.to_value(DECIMAL_BITS_BUDGET)?;
        let b = other.to_value(DECIMAL_BITS_BUDGET)?;
        Some(a.cmp(&b))
    }
}

impl fmt::Display for GodelNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.to_value(DECIMAL_BITS_BUDGET) {
            return write!(f, "{v}");
        }
        let Repr::Exponents(exps) = &self.repr else {
            unreachable!()
        };
        let mut primes = Primes::new();
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .map(|(i, e)| format!("{}^{}", primes.get(i), e))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for GodelNumber {
    type Err = NumberError;

    /// Accepts a decimal natural or the factored form `2^e1*3^e2*...` with
    /// consecutive primes and nonzero exponents.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if !s.contains('^') {
            let v = BigUint::from_str(s).map_err(|_| NumberError::Malformed(s.to_string()))?;
            return GodelNumber::from_value(v);
        }
        let mut primes = Primes::new();
        let mut exps = Vec::new();
        for (i, part) in s.split('*').enumerate() {
            let (p, e) = part
                .trim()
                .split_once('^')
                .ok_or_else(|| NumberError::Malformed(part.to_string()))?;
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| NumberError::Malformed(part.to_string()))?;
            let e = BigUint::from_str(e.trim())
                .map_err(|_| NumberError::Malformed(part.to_string()))?;
            if p != primes.get(i) || e.is_zero() {
                return Err(NumberError::NotCanonicalFactored);
            }
            exps.push(e);
        }
        Ok(GodelNumber::from_exponents(exps))
    }
}
