//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := "~" formula
//!          | "(" formula "->" formula ")"
//!          | "(" formula "&" formula ")"      sugar: ~(X -> ~Y)
//!          | "(" formula "|" formula ")"      sugar: (~X -> Y)
//!          | "(" "A" var ")" formula
//!          | "(" "E" var ")" formula          sugar: ~(A x)~F
//!          | PRED [ "(" term { "," term } ")" ]
//! term    := var | FUNC "(" term { "," term } ")" | CONST
//! ```

use super::{is_lowercase_name, is_predicate_name, Formula, Signature, Term};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at position {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at position {pos}, found `{found}`")]
    Unexpected {
        expected: &'static str,
        found: String,
        pos: usize,
    },
    #[error("undeclared symbol `{name}` at position {pos}")]
    UndeclaredSymbol { name: String, pos: usize },
    #[error("`{name}` expects {expected} argument(s), got {found} (position {pos})")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        pos: usize,
    },
    #[error("`{name}` cannot be used as a variable (position {pos})")]
    NotAVariable { name: String, pos: usize },
    #[error("trailing input at position {pos}")]
    TrailingInput { pos: usize },
    #[error("malformed signature declaration `{decl}`")]
    BadSignatureDecl { decl: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Arrow,
    Tilde,
    Amp,
    Pipe,
    Ident(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::Arrow => "->".into(),
            Tok::Tilde => "~".into(),
            Tok::Amp => "&".into(),
            Tok::Pipe => "|".into(),
            Tok::Ident(s) => s.clone(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            '~' => {
                toks.push((Tok::Tilde, i));
                i += 1;
            }
            '&' => {
                toks.push((Tok::Amp, i));
                i += 1;
            }
            '|' => {
                toks.push((Tok::Pipe, i));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(ParseError::UnexpectedChar { ch: '-', pos: i });
                }
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(input[start..i].to_string()), start));
            }
            _ => return Err(ParseError::UnexpectedChar { ch: c, pos: i }),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self, ahead: usize) -> Option<&(Tok, usize)> {
        self.toks.get(self.pos + ahead)
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or(ParseError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<usize, ParseError> {
        let (tok, pos) = self.next()?;
        if tok == want {
            Ok(pos)
        } else {
            Err(ParseError::Unexpected {
                expected,
                found: tok.describe(),
                pos,
            })
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek(0) {
            Some((Tok::Tilde, _)) => {
                self.next()?;
                Ok(Formula::not(self.formula()?))
            }
            Some((Tok::LParen, _)) => {
                if self.at_quantifier() {
                    self.quantifier()
                } else {
                    self.binary()
                }
            }
            Some((Tok::Ident(_), _)) => self.atom(),
            Some((tok, pos)) => Err(ParseError::Unexpected {
                expected: "formula",
                found: tok.describe(),
                pos: *pos,
            }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    /// Lookahead for `( A v )` / `( E v )` with `v` lowercase; anything else
    /// after `(` is a binary connective form.
    fn at_quantifier(&self) -> bool {
        matches!(self.peek(1), Some((Tok::Ident(q), _)) if q == "A" || q == "E")
            && matches!(self.peek(2), Some((Tok::Ident(v), _)) if is_lowercase_name(v))
            && matches!(self.peek(3), Some((Tok::RParen, _)))
    }

    fn quantifier(&mut self) -> Result<Formula, ParseError> {
        self.expect(Tok::LParen, "(")?;
        let (q, _) = self.next()?;
        let existential = matches!(&q, Tok::Ident(s) if s == "E");
        let (var_tok, var_pos) = self.next()?;
        let var = match var_tok {
            Tok::Ident(v) => v,
            _ => unreachable!("guarded by at_quantifier"),
        };
        if self.sig.function_arity(&var).is_some() {
            return Err(ParseError::NotAVariable {
                name: var,
                pos: var_pos,
            });
        }
        self.expect(Tok::RParen, ")")?;
        let body = self.formula()?;
        Ok(if existential {
            Formula::not(Formula::forall(&var, Formula::not(body)))
        } else {
            Formula::forall(&var, body)
        })
    }

    fn binary(&mut self) -> Result<Formula, ParseError> {
        self.expect(Tok::LParen, "(")?;
        let left = self.formula()?;
        let (op, pos) = self.next()?;
        let right = self.formula()?;
        self.expect(Tok::RParen, ")")?;
        match op {
            Tok::Arrow => Ok(Formula::implies(left, right)),
            Tok::Amp => Ok(Formula::not(Formula::implies(left, Formula::not(right)))),
            Tok::Pipe => Ok(Formula::implies(Formula::not(left), right)),
            other => Err(ParseError::Unexpected {
                expected: "`->`, `&`, or `|`",
                found: other.describe(),
                pos,
            }),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let (tok, pos) = self.next()?;
        let name = match tok {
            Tok::Ident(n) => n,
            other => {
                return Err(ParseError::Unexpected {
                    expected: "predicate",
                    found: other.describe(),
                    pos,
                })
            }
        };
        if !is_predicate_name(&name) {
            return Err(ParseError::Unexpected {
                expected: "predicate",
                found: name,
                pos,
            });
        }
        let arity =
            self.sig
                .predicate_arity(&name)
                .ok_or_else(|| ParseError::UndeclaredSymbol {
                    name: name.clone(),
                    pos,
                })?;
        let args = if matches!(self.peek(0), Some((Tok::LParen, _))) {
            self.args()?
        } else {
            Vec::new()
        };
        if args.len() != arity {
            return Err(ParseError::ArityMismatch {
                name,
                expected: arity,
                found: args.len(),
                pos,
            });
        }
        Ok(Formula::Atom(name, args))
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen, "(")?;
        let mut args = vec![self.term()?];
        while matches!(self.peek(0), Some((Tok::Comma, _))) {
            self.next()?;
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, ")")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (tok, pos) = self.next()?;
        let name = match tok {
            Tok::Ident(n) => n,
            other => {
                return Err(ParseError::Unexpected {
                    expected: "term",
                    found: other.describe(),
                    pos,
                })
            }
        };
        if !is_lowercase_name(&name) {
            return Err(ParseError::Unexpected {
                expected: "term",
                found: name,
                pos,
            });
        }
        match self.sig.function_arity(&name) {
            Some(0) => {
                if matches!(self.peek(0), Some((Tok::LParen, _))) {
                    return Err(ParseError::ArityMismatch {
                        name,
                        expected: 0,
                        found: 1,
                        pos,
                    });
                }
                Ok(Term::App(name, Vec::new()))
            }
            Some(arity) => {
                if !matches!(self.peek(0), Some((Tok::LParen, _))) {
                    return Err(ParseError::ArityMismatch {
                        name,
                        expected: arity,
                        found: 0,
                        pos,
                    });
                }
                let args = self.args()?;
                if args.len() != arity {
                    return Err(ParseError::ArityMismatch {
                        name,
                        expected: arity,
                        found: args.len(),
                        pos,
                    });
                }
                Ok(Term::App(name, args))
            }
            None => {
                if matches!(self.peek(0), Some((Tok::LParen, _))) {
                    return Err(ParseError::UndeclaredSymbol { name, pos });
                }
                Ok(Term::Var(name))
            }
        }
    }
}

/// Parses `text` as a single formula over `sig`, expanding `&`, `|`, and
/// `(E x)` into the primitive connectives.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sig,
    };
    let f = p.formula()?;
    if let Some((_, pos)) = p.peek(0) {
        return Err(ParseError::TrailingInput { pos: *pos });
    }
    Ok(f)
}

/// Parses `text` as a single term over `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sig,
    };
    let t = p.term()?;
    if let Some((_, pos)) = p.peek(0) {
        return Err(ParseError::TrailingInput { pos: *pos });
    }
    Ok(t)
}

/// Parses the body of a `sig` line: whitespace-separated `name/arity` pairs.
/// Uppercase names declare predicates, lowercase names functions.
pub fn parse_signature_decls(decls: &str, sig: &mut Signature) -> Result<(), ParseError> {
    for decl in decls.split_whitespace() {
        let (name, arity) = decl
            .split_once('/')
            .ok_or_else(|| ParseError::BadSignatureDecl {
                decl: decl.to_string(),
            })?;
        let arity: usize = arity.parse().map_err(|_| ParseError::BadSignatureDecl {
            decl: decl.to_string(),
        })?;
        let result = if name.starts_with(|c: char| c.is_ascii_uppercase()) {
            sig.declare_predicate(name, arity)
        } else {
            sig.declare_function(name, arity)
        };
        result.map_err(|_| ParseError::BadSignatureDecl {
            decl: decl.to_string(),
        })?;
    }
    Ok(())
}
