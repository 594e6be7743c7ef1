//! Recursive-descent parser for the ASCII polynomial grammar
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | '+' unary | power
//! power := atom ('^' uint)?
//! atom  := uint | 'X' uint | 'Y' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::multi::IntPolyMulti;
use super::uni::IntPolyUni;
use crate::error::{Error, Result};

/// Exponents above this are rejected to keep expansion bounded.
const MAX_EXPONENT: u32 = 4096;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> Error {
        let before = &self.src[..at.min(self.src.len())];
        let line = before.iter().filter(|&&c| c == b'\n').count() + 1;
        let col_start = before.iter().rposition(|&c| c == b'\n').map_or(0, |p| p + 1);
        Error::Parse {
            line,
            column: at - col_start + 1,
            message: message.into(),
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

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Some((start, s))
    }

    fn expr(&mut self) -> Result<IntPolyMulti> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPolyMulti> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPolyMulti> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPolyMulti> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let (start, s) = self
                .digits()
                .ok_or_else(|| self.error(at, "expected exponent"))?;
            let e: u32 = s
                .parse()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| self.error(start, format!("exponent exceeds {MAX_EXPONENT}")))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPolyMulti> {
        let nv = self.n + 1;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let (_, s) = self.digits().expect("digit present");
                let v: BigInt = s.parse().expect("decimal literal");
                Ok(IntPolyMulti::constant(nv, v))
            }
            Some(b'X') => {
                let at = self.pos;
                self.pos += 1;
                // no whitespace allowed between X and its index
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let idx: usize = std::str::from_utf8(&self.src[start..self.pos])
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| self.error(at, "expected variable index after X"))?;
                if idx == 0 || idx > self.n {
                    return Err(self.error(at, format!("variable X{idx} out of range 1..{}", self.n)));
                }
                Ok(IntPolyMulti::var(nv, idx - 1))
            }
            Some(b'Y') => {
                self.pos += 1;
                Ok(IntPolyMulti::var(nv, self.n))
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error(open, "unclosed parenthesis"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) => Err(self.error(self.pos, format!("unexpected character '{}'", c as char))),
            None => Err(self.error(self.pos, "unexpected end of input")),
        }
    }
}

/// Parse a polynomial in `X1..Xn, Y`.
pub fn parse_system_poly(src: &str, n: usize) -> Result<IntPolyMulti> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        n,
    };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(p.error(p.pos, format!("unexpected character '{}'", c as char)));
    }
    Ok(e)
}

/// Parse a univariate polynomial in `X<axis>` (1-based) of an `n`-variable
/// system.
pub fn parse_axis_poly(src: &str, axis: usize, n: usize) -> Result<IntPolyUni> {
    let f = parse_system_poly(src, n)?;
    f.to_univariate(axis - 1, &format!("X{axis}")).ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: format!("polynomial must involve only X{axis}"),
    })
}
