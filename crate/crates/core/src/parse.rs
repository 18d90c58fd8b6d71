//! Text form of polynomials.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := integer | integer '/' positive-integer | variable | '(' expr ')'
//! ```
//!
//! Multiplication is always explicit, and `/` only joins two integer literals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{Monomial, Polynomial, Rational, Ring};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    /// Character offset into the input.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unexpected character `{0}`")]
    BadCharacter(char),
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("`/` must join an integer numerator and a positive integer denominator")]
    BadDivision,
    #[error("exponent must be a non-negative integer no larger than {MAX_EXPONENT}")]
    BadExponent,
    #[error("missing `*` between factors")]
    ImplicitMultiplication,
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

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((start, Tok::Int(digits.parse().unwrap())));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::BadCharacter(other),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        let what = self
            .peek()
            .map_or_else(|| "end of input".to_string(), Tok::describe);
        self.err(ParseErrorKind::Unexpected(what))
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen) => {
                    return Err(self.err(ParseErrorKind::ImplicitMultiplication))
                }
                Some(Tok::Slash) => return Err(self.err(ParseErrorKind::BadDivision)),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = match self.peek() {
            Some(Tok::Int(n)) => n
                .to_string()
                .parse::<u32>()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| self.err(ParseErrorKind::BadExponent))?,
            _ => return Err(self.err(ParseErrorKind::BadExponent)),
        };
        self.pos += 1;
        Ok(base.pow(e))
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if self.peek() != Some(&Tok::Slash) {
                    return Ok(Polynomial::constant(self.ring, Rational::from_integer(n)));
                }
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::Int(d)) if !d.is_zero() => {
                        self.pos += 1;
                        Ok(Polynomial::constant(self.ring, Rational::new(n, d)))
                    }
                    _ => Err(self.err(ParseErrorKind::BadDivision)),
                }
            }
            Some(Tok::Ident(name)) => {
                let Some(i) = self.ring.index_of(&name) else {
                    return Err(self.err(ParseErrorKind::UnknownVariable(name)));
                };
                self.pos += 1;
                Ok(Polynomial::var(self.ring, i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `text` over `ring`.
pub fn parse(ring: &Ring, text: &str) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::Empty,
        });
    }
    let mut p = Parser {
        ring,
        toks,
        pos: 0,
        end: text.chars().count(),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

fn render_monomial(ring: &Ring, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.name(i).to_string()),
            _ => parts.push(format!("{}^{e}", ring.name(i))),
        }
    }
    parts.join("*")
}

fn render_magnitude(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text: terms in descending graded-lex order, explicit `*` and `^`.
pub fn render(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        let mono = render_monomial(p.ring(), m);
        if mono.is_empty() {
            out.push_str(&render_magnitude(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&render_magnitude(&mag));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}
