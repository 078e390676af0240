//! Recursive-descent parser for expressions in the single variable `q`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'q' | '(' expr ')'
//! ```
//!
//! Multiplication must be written out: `4*q` parses, `4q` does not.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::{Field, Polynomial, Rational, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnknownIdentifier(String),
    NegativeExponent,
    ExponentTooLarge,
    DivisionByZero,
    NotPolynomial,
    NotConstant,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "unexpected end of input, expected {expected}")
            }
            ParseErrorKind::UnknownIdentifier(name) => {
                write!(f, "unknown identifier `{name}` (only `q` is allowed)")
            }
            ParseErrorKind::NegativeExponent => f.write_str("negative exponent"),
            ParseErrorKind::ExponentTooLarge => f.write_str("exponent too large"),
            ParseErrorKind::DivisionByZero => f.write_str("division by zero"),
            ParseErrorKind::NotPolynomial => f.write_str("expression is not a polynomial"),
            ParseErrorKind::NotConstant => f.write_str("expression is not a rational constant"),
        }
    }
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

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
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
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("ascii digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or(c);
                return Err(ParseError {
                    pos: start,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            pos: self.pos(),
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken {
                found: t.to_string(),
                expected,
            }),
            None => self.err(ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn expr(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.idx += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    let inv = rhs.inv().ok_or(ParseError {
                        pos,
                        kind: ParseErrorKind::DivisionByZero,
                    })?;
                    acc = &acc * &inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.idx += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.idx += 1;
            let e = match self.peek() {
                Some(Tok::Int(n)) => {
                    let e = n.to_u32().ok_or_else(|| self.err(ParseErrorKind::ExponentTooLarge))?;
                    self.idx += 1;
                    e
                }
                Some(Tok::Minus) => return Err(self.err(ParseErrorKind::NegativeExponent)),
                _ => return Err(self.unexpected("a nonnegative integer exponent")),
            };
            if let Some(Tok::Caret) = self.peek() {
                return Err(self.unexpected("an operator other than a second `^`"));
            }
            return Ok(base.pow(u64::from(e)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.idx += 1;
                Ok(RationalFunction::constant(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                if name == "q" {
                    self.idx += 1;
                    Ok(RationalFunction::q())
                } else {
                    Err(self.err(ParseErrorKind::UnknownIdentifier(name)))
                }
            }
            Some(Tok::LParen) => {
                self.idx += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.idx += 1;
                        Ok(inner)
                    }
                    _ => Err(self.unexpected("`)`")),
                }
            }
            _ => Err(self.unexpected("a number, `q` or `(`")),
        }
    }
}

/// Parses an element of ℚ(q).
pub fn parse_rational_function(src: &str) -> Result<RationalFunction, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        idx: 0,
        end: src.len(),
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(v)
}

/// Parses an expression that must expand to a polynomial.
pub fn parse_polynomial(src: &str) -> Result<Polynomial, ParseError> {
    parse_rational_function(src)?
        .into_polynomial()
        .map_err(|_| ParseError {
            pos: 0,
            kind: ParseErrorKind::NotPolynomial,
        })
}

/// Parses an expression that must be a rational constant, such as `-3/4`.
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    parse_rational_function(src)?
        .to_rational()
        .ok_or(ParseError {
            pos: 0,
            kind: ParseErrorKind::NotConstant,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(s: &str) -> Vec<i64> {
        parse_polynomial(s)
            .unwrap()
            .coeffs()
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn table_row_genus_one() {
        assert_eq!(coeffs("q^4 + 4*q^3 - q^2 - 4*q"), vec![0, -4, -1, 4, 1]);
    }

    #[test]
    fn zero_and_products() {
        assert!(parse_polynomial("0").unwrap().is_zero());
        assert_eq!(coeffs("(q-1)*(q+1)"), vec![-1, 0, 1]);
        assert_eq!(coeffs("-q^2"), vec![0, 0, -1]);
        assert_eq!(coeffs("2^3*q"), vec![0, 8]);
    }

    #[test]
    fn rational_literals() {
        let p = parse_polynomial("1/2*q + 3/4").unwrap();
        assert_eq!(p.coeff(1).to_string(), "1/2");
        assert_eq!(p.coeff(0).to_string(), "3/4");
        assert_eq!(parse_rational("-6/4").unwrap().to_string(), "-3/2");
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let e = parse_polynomial("4q").unwrap_err();
        assert_eq!(e.pos, 1);
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedToken { .. }));
    }

    #[test]
    fn unknown_identifier() {
        let e = parse_polynomial("q + x").unwrap_err();
        assert_eq!(e.pos, 4);
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("x".into()));
    }

    #[test]
    fn negative_exponent() {
        let e = parse_polynomial("q^-2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NegativeExponent);
        assert_eq!(e.pos, 2);
    }

    #[test]
    fn syntax_errors_report_position() {
        let e = parse_polynomial("(q + 1").unwrap_err();
        assert_eq!(e.pos, 6);
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));
        let e = parse_polynomial("q + * 2").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_polynomial("q $ 2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));
    }

    #[test]
    fn non_polynomial_and_zero_division() {
        assert_eq!(
            parse_polynomial("1/q").unwrap_err().kind,
            ParseErrorKind::NotPolynomial
        );
        assert_eq!(
            parse_polynomial("q/(q-q)").unwrap_err().kind,
            ParseErrorKind::DivisionByZero
        );
        assert_eq!(parse_polynomial("(q^2-1)/(q-1)").unwrap(), parse_polynomial("q+1").unwrap());
    }
}
