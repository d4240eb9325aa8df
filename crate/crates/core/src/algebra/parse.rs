//! Parser for rational-function literals over named coordinates.
//!
//! Grammar: `expr = term (('+'|'-') term)*`, `term = factor (('*'|'/') factor)*`,
//! `factor = ('-'|'+') factor | atom ('^' integer)?`, `atom = integer | name | '(' expr ')'`.
//! The output of [`RationalFn::display_with`] parses back to the same function.

use super::{RationalFn, Rational};
use num_bigint::BigInt;
use thiserror::Error;

/// Bound on intermediate degrees, so that literals like `x^99999999` fail fast.
pub const MAX_PARSED_DEGREE: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn n(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<RationalFn, ParseError> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFn, ParseError> {
        let mut acc = self.factor()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let f = self.factor()?;
            if acc.total_degree() + f.total_degree() > MAX_PARSED_DEGREE {
                return Err(ParseError { column: at + 1, message: format!("degree exceeds {MAX_PARSED_DEGREE}") });
            }
            acc = if c == '*' {
                &acc * &f
            } else {
                match acc.checked_div(&f) {
                    Ok(q) => q,
                    Err(_) => return Err(ParseError { column: at + 1, message: "division by zero".into() }),
                }
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalFn, ParseError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some('+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    self.skip_ws();
                    let (k, at) = self.integer()?;
                    let k: u32 = match k.try_into() {
                        Ok(k) => k,
                        Err(_) => return Err(ParseError { column: at + 1, message: "exponent out of range".into() }),
                    };
                    if u64::from(base.total_degree()) * u64::from(k) > u64::from(MAX_PARSED_DEGREE) {
                        return Err(ParseError { column: at + 1, message: format!("degree exceeds {MAX_PARSED_DEGREE}") });
                    }
                    Ok(base.pow(k))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn integer(&mut self) -> Result<(BigInt, usize), ParseError> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok((s.parse().expect("digits"), start))
    }

    fn atom(&mut self) -> Result<RationalFn, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let (k, _) = self.integer()?;
                Ok(RationalFn::constant(Rational::from_integer(k), self.n()))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.names.iter().position(|s| *s == name) {
                    Some(i) => Ok(RationalFn::var(i, self.n())),
                    None => Err(ParseError { column: start + 1, message: format!("unknown coordinate '{name}'") }),
                }
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

impl RationalFn {
    /// Parses an expression in the given coordinate names.
    pub fn parse(s: &str, names: &[String]) -> Result<RationalFn, ParseError> {
        let mut p = Parser { chars: s.chars().collect(), pos: 0, names };
        let out = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(out)
    }
}
