//! Polynomial expression front end.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?          right-associative
//! atom    := literal | var | '(' expr ')'
//! literal := INT ('^' exponent)? ('/' INT ('^' exponent)?)?
//! var     := z1 | z2 | x | y | t1 | t2
//! ```
//!
//! `/` is only accepted between integer literals, so `1/6*z2^2` reads as
//! `(1/6) * z2^2`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{BivarPoly, PolyError, Rational, Var, DEFAULT_DEGREE_CAP};

const MAX_CONSTANT_EXPONENT: u32 = 256;
const MAX_CONSTANT_BITS: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("negative exponent at byte {offset}")]
    NegativeExponent { offset: usize },
    #[error(transparent)]
    Degree(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(ParseError::SyntaxError {
                        offset: i,
                        message: "floating-point literals are not supported".into(),
                    });
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::SyntaxError {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    cap: u32,
    depth: usize,
}

const MAX_NESTING: usize = 200;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::SyntaxError { offset: self.offset(), message: message.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<BivarPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BivarPoly, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.unary()?;
            acc = acc.try_mul(&rhs, self.cap)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BivarPoly, ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.err("expression nested too deeply");
        }
        let out = if self.eat(&Tok::Minus) { self.unary().map(|u| -&u) } else { self.power() };
        self.depth -= 1;
        out
    }

    fn power(&mut self) -> Result<BivarPoly, ParseError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let at = self.offset();
            let k = self.exponent()?;
            if base.is_constant() {
                let c = base.coeff(0, 0);
                let bits = c.numer().bits() + c.denom().bits();
                if k > MAX_CONSTANT_EXPONENT || bits * k as u64 > MAX_CONSTANT_BITS {
                    return Err(ParseError::SyntaxError {
                        offset: at,
                        message: format!("exponent {k} too large for a constant"),
                    });
                }
                return Ok(base.pow(k));
            }
            return Ok(base.try_pow(k, self.cap)?);
        }
        Ok(base)
    }

    /// Right-hand side of `^`: must evaluate to a nonnegative integer constant.
    fn exponent(&mut self) -> Result<u32, ParseError> {
        let at = self.offset();
        let negative = self.eat(&Tok::Minus);
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.err("expression nested too deeply");
        }
        let value = self.power()?;
        self.depth -= 1;
        if !value.is_constant() {
            return Err(ParseError::SyntaxError {
                offset: at,
                message: "exponent must be a constant".into(),
            });
        }
        let c = value.coeff(0, 0);
        if negative && !c.is_zero() || c.is_negative() {
            return Err(ParseError::NegativeExponent { offset: at });
        }
        if !c.is_integer() {
            return Err(ParseError::SyntaxError {
                offset: at,
                message: "exponent must be an integer".into(),
            });
        }
        c.to_integer().to_u32().ok_or(ParseError::SyntaxError {
            offset: at,
            message: "exponent out of range".into(),
        })
    }

    fn int_with_power(&mut self, n: BigInt) -> Result<BigInt, ParseError> {
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.offset();
            let k = self.exponent()?;
            if k > MAX_CONSTANT_EXPONENT || n.bits() * k as u64 > MAX_CONSTANT_BITS {
                return Err(ParseError::SyntaxError {
                    offset: at,
                    message: format!("exponent {k} too large for a constant"),
                });
            }
            return Ok(num_traits::pow::pow(n, k as usize));
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<BivarPoly, ParseError> {
        let at = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        let out = match tok {
            Tok::Int(n) => {
                let num = self.int_with_power(n)?;
                if self.eat(&Tok::Slash) {
                    let den_at = self.offset();
                    let Some(Tok::Int(d)) = self.peek().cloned() else {
                        return self.err("`/` must be followed by an integer literal");
                    };
                    self.pos += 1;
                    let den = self.int_with_power(d)?;
                    if den.is_zero() {
                        return Err(ParseError::SyntaxError {
                            offset: den_at,
                            message: "zero denominator".into(),
                        });
                    }
                    BivarPoly::constant(Rational::new(num, den))
                } else {
                    BivarPoly::constant(Rational::from_integer(num))
                }
            }
            Tok::Ident(name) => match name.as_str() {
                "z1" | "x" | "t1" => BivarPoly::var(Var::Z1),
                "z2" | "y" | "t2" => BivarPoly::var(Var::Z2),
                _ => return Err(ParseError::UnknownVariable { name, offset: at }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                inner
            }
            _ => {
                self.pos -= 1;
                return self.err("expected a number, variable or `(`");
            }
        };
        match self.peek() {
            Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                self.err("implicit multiplication is not allowed; use `*`")
            }
            Some(Tok::Slash) => self.err("`/` is only allowed between integer literals"),
            _ => Ok(out),
        }
    }
}

pub fn parse(src: &str) -> Result<BivarPoly, ParseError> {
    parse_with_cap(src, DEFAULT_DEGREE_CAP)
}

pub fn parse_with_cap(src: &str, cap: u32) -> Result<BivarPoly, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError::SyntaxError { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: src.len(), cap, depth: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

fn graded_lex(poly: &BivarPoly) -> Vec<((u32, u32), Rational)> {
    let mut terms: Vec<_> = poly.terms().map(|(e, c)| (*e, c.clone())).collect();
    terms.sort_by(|a, b| {
        let (x, y) = (a.0, b.0);
        (y.0 + y.1).cmp(&(x.0 + x.1)).then(y.0.cmp(&x.0))
    });
    terms
}

/// Graded-lex rendering that `parse` reads back exactly.
pub fn format(poly: &BivarPoly) -> String {
    if poly.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, ((a, b), c)) in graded_lex(poly).into_iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || (a == 0 && b == 0) {
            factors.push(mag.to_string());
        }
        for (name, e) in [("z1", a), ("z2", b)] {
            match e {
                0 => {}
                1 => factors.push(name.into()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}
