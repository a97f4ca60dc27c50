//! Text syntax for scalars.
//!
//! Accepted forms are arithmetic over rationals and a single square root,
//! e.g. `3/2`, `7.3`, `sqrt(2)`, `1-2*sqrt(3)`, `1/sqrt(2)`, plus the
//! standalone root form `root(c_k, ..., c_0; lo, hi)` with integer
//! coefficients listed from the highest degree down.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::expr::{rational_from_decimal_str, squarefree_split};
use super::{AlgebraicScalar, Rational, RootGen};
use crate::error::{Error, Result};

/// Splits on `sep` at bracket depth zero.
pub fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

pub fn parse_scalar(s: &str) -> Result<AlgebraicScalar> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix("root(") {
        let body = body
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated root form: {s}")))?;
        return parse_root(body).map(AlgebraicScalar::poly_root);
    }
    let mut p = Parser { s: s.as_bytes(), pos: 0, src: s };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(AlgebraicScalar::quadratic(v.r, v.s, v.d))
}

fn parse_root(body: &str) -> Result<RootGen> {
    let (coeffs, bounds) = body
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("root form needs ';' between coefficients and interval: {body}")))?;
    let desc: Vec<BigInt> = coeffs
        .split(',')
        .map(|c| c.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient '{}'", c.trim()))))
        .collect::<Result<_>>()?;
    let b: Vec<&str> = bounds.split(',').collect();
    if b.len() != 2 {
        return Err(Error::Parse(format!("root interval needs two bounds: {bounds}")));
    }
    let lo = parse_rational(b[0])?;
    let hi = parse_rational(b[1])?;
    RootGen::new(desc.into_iter().rev().collect(), lo, hi)
}

/// A plain rational: `p`, `p/q` or a decimal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let v = parse_scalar(s)?;
    v.as_rational()
        .cloned()
        .ok_or_else(|| Error::Parse(format!("expected a rational, got '{s}'")))
}

/// `r + s*sqrt(d)`; `d == 1` with `s == 0` for rationals.
#[derive(Clone, Debug)]
struct QVal {
    r: Rational,
    s: Rational,
    d: u64,
}

impl QVal {
    fn rational(r: Rational) -> Self {
        QVal { r, s: Rational::zero(), d: 1 }
    }

    fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    fn common_d(&self, o: &Self) -> Option<u64> {
        match (self.is_rational(), o.is_rational()) {
            (true, true) => Some(1),
            (true, false) => Some(o.d),
            (false, true) => Some(self.d),
            (false, false) => (self.d == o.d).then_some(self.d),
        }
    }

    fn add(&self, o: &Self) -> Option<Self> {
        let d = self.common_d(o)?;
        Some(QVal { r: &self.r + &o.r, s: &self.s + &o.s, d })
    }

    fn neg(&self) -> Self {
        QVal { r: -&self.r, s: -&self.s, d: self.d }
    }

    fn mul(&self, o: &Self) -> Option<Self> {
        let d = self.common_d(o)?;
        let dq = Rational::from_integer(d.into());
        Some(QVal {
            r: &self.r * &o.r + &self.s * &o.s * dq,
            s: &self.r * &o.s + &self.s * &o.r,
            d,
        })
    }

    fn recip(&self) -> Option<Self> {
        let dq = Rational::from_integer(self.d.into());
        let n = &self.r * &self.r - &self.s * &self.s * dq;
        if n.is_zero() {
            return None;
        }
        Some(QVal { r: &self.r / &n, s: -(&self.s / &n), d: self.d })
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in '{}'", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn mixed(&self) -> Error {
        self.err("mixed square roots are not representable")
    }

    fn expr(&mut self) -> Result<QVal> {
        let mut v = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    v = v.add(&t).ok_or_else(|| self.mixed())?;
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    v = v.add(&t.neg()).ok_or_else(|| self.mixed())?;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<QVal> {
        let mut v = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    let t = self.unary()?;
                    v = v.mul(&t).ok_or_else(|| self.mixed())?;
                }
                b'/' => {
                    self.pos += 1;
                    let t = self.unary()?;
                    let inv = t.recip().ok_or_else(|| self.err("division by zero"))?;
                    v = v.mul(&inv).ok_or_else(|| self.mixed())?;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<QVal> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<QVal> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(_) if self.s[self.pos..].starts_with(b"sqrt") => {
                self.pos += 4;
                if self.peek() != Some(b'(') {
                    return Err(self.err("expected '(' after sqrt"));
                }
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                let q = if inner.is_rational() { Some(inner.r) } else { None };
                let n = q
                    .filter(|q| q.is_integer() && !q.is_negative())
                    .ok_or_else(|| self.err("sqrt argument must be a nonnegative integer"))?;
                let n: u64 = n
                    .to_integer()
                    .try_into()
                    .map_err(|_| self.err("sqrt argument too large"))?;
                let (k, r) = squarefree_split(n);
                let kq = Rational::from_integer(k.into());
                if n == 0 {
                    Ok(QVal::rational(Rational::zero()))
                } else if r == 1 {
                    Ok(QVal::rational(kq))
                } else {
                    Ok(QVal { r: Rational::zero(), s: kq, d: r })
                }
            }
            _ => Err(self.err("expected a number, sqrt(...) or '('")),
        }
    }

    fn number(&mut self) -> Result<QVal> {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
            self.pos += 1;
        }
        let mantissa = &self.src[start..self.pos];
        let mut q = rational_from_decimal_str(mantissa).ok_or_else(|| self.err("malformed number"))?;
        if self.pos < self.s.len() && (self.s[self.pos] == b'e' || self.s[self.pos] == b'E') {
            self.pos += 1;
            let es = self.pos;
            if self.pos < self.s.len() && (self.s[self.pos] == b'-' || self.s[self.pos] == b'+') {
                self.pos += 1;
            }
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: i32 = self.src[es..self.pos].parse().map_err(|_| self.err("malformed exponent"))?;
            let ten = Rational::from_integer(10.into());
            let p = num_traits::pow(ten, e.unsigned_abs() as usize);
            q = if e >= 0 { q * p } else { q / p };
        }
        Ok(QVal::rational(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ScalarForm};

    fn round_trip(s: &str) {
        let v: AlgebraicScalar = s.parse().unwrap();
        let back: AlgebraicScalar = v.to_string().parse().unwrap();
        assert_eq!(v, back, "{s} -> {v}");
    }

    #[test]
    fn parses_basic_forms() {
        assert_eq!(parse_scalar("3/2").unwrap().as_rational(), Some(&rat(3, 2)));
        assert_eq!(parse_scalar("7.3").unwrap().as_rational(), Some(&rat(73, 10)));
        assert_eq!(parse_scalar("1e-3").unwrap().as_rational(), Some(&rat(1, 1000)));
        assert_eq!(
            parse_scalar("1/sqrt(2)").unwrap().form(),
            &ScalarForm::Quadratic { r: rat(0, 1), s: rat(1, 2), d: 2 }
        );
        assert_eq!(
            parse_scalar("1 - 2*sqrt(12)").unwrap().form(),
            &ScalarForm::Quadratic { r: rat(1, 1), s: rat(-4, 1), d: 3 }
        );
        assert_eq!(parse_scalar("sqrt(9)").unwrap().as_rational(), Some(&rat(3, 1)));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "sqrt(2", "1/0", "sqrt(2)+sqrt(3)", "sqrt(-1)", "2x", "root(1, 0, -2; 1)"] {
            assert!(parse_scalar(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_round_trips() {
        for s in ["0", "-5/3", "sqrt(2)", "-sqrt(3)", "1/2+3/4*sqrt(5)", "1-sqrt(2)", "root(1, 0, 0, -2; 1, 2)", "-2/3*sqrt(7)"] {
            round_trip(s);
        }
    }

    #[test]
    fn splits_respecting_brackets() {
        assert_eq!(split_top_level("a, root(1, 2; 3, 4), [5, 6]", ','), vec!["a", " root(1, 2; 3, 4)", " [5, 6]"]);
    }
}
