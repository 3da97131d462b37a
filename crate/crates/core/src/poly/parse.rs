//! Text grammar for polynomials:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' digits)?
//! atom   := digits | name | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants, so `3/4*x0` reads as the
//! rational coefficient 3/4 times `x0`. Whitespace is insignificant.

use num_bigint::BigInt;
use num_traits::One;

use super::{Poly, PolyError, Rational};

pub fn default_names(arity: usize) -> Vec<String> {
    (0..arity).map(|i| format!("x{i}")).collect()
}

/// Parses `text` over the variables `x0 .. x{arity-1}`.
pub fn parse_poly(text: &str, arity: usize) -> Result<Poly, PolyError> {
    parse_poly_with(text, &default_names(arity))
}

/// Parses `text` over the given variable names (index = position).
pub fn parse_poly_with(text: &str, names: &[String]) -> Result<Poly, PolyError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        names,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(p)
}

/// Parses an integer or `a/b` rational literal, with optional sign.
pub fn parse_rational(text: &str) -> Result<Rational, PolyError> {
    let p = parse_poly(text, 0)?;
    match p.terms() {
        [] => Ok(Rational::from_integer(0.into())),
        [(_, c)] => Ok(c.clone()),
        _ => unreachable!("constant polynomial has at most one term"),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn arity(&self) -> usize {
        self.names.len()
    }

    fn syntax(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.checked_add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.checked_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.checked_mul(&self.unary()?)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    acc = acc.checked_div_constant(&d).map_err(|e| match e {
                        PolyError::DivisionByZero | PolyError::NonConstantDivisor => {
                            PolyError::Syntax {
                                pos: at,
                                msg: e.to_string(),
                            }
                        }
                        e => e,
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'-') {
                return Err(PolyError::NegativeExponent(self.pos));
            }
            let digits = self.digits().ok_or_else(|| self.syntax("expected exponent"))?;
            let e: u32 = digits
                .parse()
                .map_err(|_| self.syntax("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start)
            .then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits().expect("at least one digit");
                let n: BigInt = digits.parse().expect("decimal digits");
                Ok(Poly::constant(self.arity(), Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                let index = self
                    .names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or(PolyError::UnknownVariable(name))?;
                Poly::var(self.arity(), index)
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}
