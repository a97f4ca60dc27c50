//! Exact linear combinations of algebraic monomials.
//!
//! An [`AlgExpr`] is a finite sum `sum q_i * sqrt(r_i) * prod alpha_j^e_j` with
//! rational `q_i`, squarefree integer radicands `r_i` and isolated polynomial
//! roots `alpha_j` reduced modulo their defining polynomials. Ring operations
//! are exact; signs are decided symbolically when possible and by adaptive
//! interval refinement otherwise.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::Interval;
use super::poly::{QPoly, RootGen};
use super::{Rational, PRECISION_CAP};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    /// Squarefree radicand; 1 means no square root.
    pub radicand: u64,
    /// Root generators with exponents in `1..deg`, sorted.
    pub roots: Vec<(RootGen, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { radicand: 1, roots: Vec::new() }
    }

    fn is_one(&self) -> bool {
        self.radicand == 1 && self.roots.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgExpr {
    terms: BTreeMap<Monomial, Rational>,
}

/// Squarefree decomposition `n = k^2 * r`, returning `(k, r)`.
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut r = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (k, r * n)
}

impl AlgExpr {
    pub fn zero() -> Self {
        AlgExpr { terms: BTreeMap::new() }
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut e = AlgExpr::zero();
        e.add_term(Monomial::one(), q);
        e
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// `s * sqrt(d)` for a positive integer `d` (not necessarily squarefree).
    pub fn sqrt_scaled(s: Rational, d: u64) -> Self {
        let (k, r) = squarefree_split(d);
        let mut e = AlgExpr::zero();
        e.add_term(Monomial { radicand: r, roots: Vec::new() }, s * Rational::from_integer(k.into()));
        e
    }

    pub fn root(g: RootGen) -> Self {
        let mut e = AlgExpr::zero();
        if g.degree() == 1 {
            // Linear: the root is rational.
            let c = g.coeffs();
            e.add_term(Monomial::one(), Rational::new(-c[0].clone(), c[1].clone()));
        } else {
            e.add_term(Monomial { radicand: 1, roots: vec![(g, 1)] }, Rational::one());
        }
        e
    }

    fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The value as a rational, if the expression has no irrational monomials.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, q) = self.terms.iter().next().unwrap();
                m.is_one().then(|| q.clone())
            }
            _ => None,
        }
    }

    pub fn root_gens(&self) -> Vec<RootGen> {
        let mut v: Vec<RootGen> = self
            .terms
            .keys()
            .flat_map(|m| m.roots.iter().map(|(g, _)| g.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, q) in &o.terms {
            r.add_term(m.clone(), q.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        AlgExpr { terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return AlgExpr::zero();
        }
        AlgExpr { terms: self.terms.iter().map(|(m, q)| (m.clone(), q * s)).collect() }
    }

    pub fn add_rational(&self, s: &Rational) -> Self {
        let mut r = self.clone();
        r.add_term(Monomial::one(), s.clone());
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = AlgExpr::zero();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &o.terms {
                let coef = qa * qb;
                for (m, q) in mul_monomials(ma, mb) {
                    r.add_term(m, q * &coef);
                }
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = AlgExpr::from_int(1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Enclosure of the value at working precision `prec` (absolute units of
    /// `2^-prec`, before rounding accumulation).
    pub fn interval_at(&self, prec: u32) -> Interval {
        let mut acc = Interval::from_int(&BigInt::zero(), prec);
        for (m, q) in &self.terms {
            let mut v = Interval::from_rational(q, prec);
            if m.radicand != 1 {
                v = v.mul(&Interval::sqrt_int(&BigUint::from(m.radicand), prec));
            }
            for (g, e) in &m.roots {
                v = v.mul(&g.enclosure(prec).powi(*e));
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Enclosure with width at most `2^(1-bits) * max(1, |value|)`.
    pub fn interval(&self, bits: u32) -> Result<Interval> {
        if let Some(q) = self.as_rational() {
            return Ok(Interval::from_rational(&q, bits + 2));
        }
        let mut prec = bits + 16;
        loop {
            let iv = self.interval_at(prec);
            if iv.meets_width(bits) {
                return Ok(iv);
            }
            if prec > PRECISION_CAP + 64 {
                return Err(Error::PrecisionExhausted {
                    bits: prec,
                    context: format!("enclosing {self}"),
                });
            }
            prec = prec.saturating_mul(2);
        }
    }

    /// Sign of the exact value.
    pub fn sign(&self) -> Result<Ordering> {
        self.sign_with_cap(PRECISION_CAP)
    }

    pub fn sign_with_cap(&self, cap: u32) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(q) = self.as_rational() {
            return Ok(q.cmp(&Rational::zero()));
        }
        let gens = self.root_gens();
        if gens.is_empty() {
            // Square roots of distinct squarefree integers are linearly
            // independent over Q, so a nonempty combination is nonzero.
            return self.refine_sign(cap, true);
        }
        if gens.len() == 1 && self.terms.keys().all(|m| m.radicand == 1) {
            return Ok(gens[0].sign_of(&self.as_poly()));
        }
        if let Some(s) = self.root_difference_sign() {
            return Ok(s);
        }
        self.refine_sign(cap, false)
    }

    /// `c * (alpha - beta)` with two generators: compare the roots directly.
    fn root_difference_sign(&self) -> Option<Ordering> {
        if self.terms.len() != 2 {
            return None;
        }
        let mut it = self.terms.iter();
        let (m1, q1) = it.next().unwrap();
        let (m2, q2) = it.next().unwrap();
        let single = |m: &Monomial| m.radicand == 1 && m.roots.len() == 1 && m.roots[0].1 == 1;
        if !(single(m1) && single(m2)) || q1 != &-q2 {
            return None;
        }
        let c = m1.roots[0].0.cmp_value(&m2.roots[0].0);
        Some(if q1.is_negative() { c.reverse() } else { c })
    }

    fn refine_sign(&self, cap: u32, nonzero: bool) -> Result<Ordering> {
        let mut prec = 64u32;
        loop {
            let iv = self.interval_at(prec);
            if let Some(s) = iv.sign() {
                if s != Ordering::Equal || !nonzero {
                    return Ok(s);
                }
            }
            if prec >= cap {
                return Err(Error::PrecisionExhausted {
                    bits: prec,
                    context: format!("sign of {self}"),
                });
            }
            prec = (prec * 2).min(cap);
        }
    }

    /// The expression as a polynomial in its single root generator.
    fn as_poly(&self) -> QPoly {
        let mut p = QPoly::zero();
        for (m, q) in &self.terms {
            let e = m.roots.first().map(|(_, e)| *e as usize).unwrap_or(0);
            p = p.add(&QPoly::x_pow(e).scale(q));
        }
        p
    }

    pub fn cmp_expr(&self, o: &Self) -> Result<Ordering> {
        self.sub(o).sign()
    }

    pub fn floor(&self) -> Result<BigInt> {
        if let Some(q) = self.as_rational() {
            return Ok(q.floor().to_integer());
        }
        // relative width 2^-64 is only absolute width < 1 when |value| is small
        let mut bits = 64 + self.approx().0.abs().log2().max(0.0).min(1e6) as u32;
        let iv = loop {
            let iv = self.interval(bits)?;
            if iv.floor_hi() - iv.floor_lo() <= BigInt::one() {
                break iv;
            }
            bits = bits.saturating_mul(2);
        };
        let n = iv.floor_lo();
        if n == iv.floor_hi() {
            return Ok(n);
        }
        // The interval straddles n + 1; decide exactly.
        let cand: BigInt = &n + BigInt::one();
        match self.sub(&AlgExpr::from_rational(Rational::from_integer(cand.clone()))).sign()? {
            Ordering::Less => Ok(n),
            _ => Ok(cand),
        }
    }

    /// f64 midpoint and a rigorous bound on its error.
    pub fn approx(&self) -> (f64, f64) {
        match self.interval(96) {
            Ok(iv) => iv.mid_rad_f64(),
            Err(_) => (f64::NAN, f64::INFINITY),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.approx().0
    }
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Vec<(Monomial, Rational)> {
    let g = a.radicand.gcd(&b.radicand);
    let radicand = (a.radicand / g) * (b.radicand / g);
    let coef = Rational::from_integer(g.into());
    let mut roots: BTreeMap<RootGen, u32> = BTreeMap::new();
    for (r, e) in a.roots.iter().chain(b.roots.iter()) {
        *roots.entry(r.clone()).or_insert(0) += e;
    }
    // Reduce generator powers modulo their defining polynomials.
    let mut out = vec![(Monomial { radicand, roots: Vec::new() }, coef)];
    for (r, e) in roots {
        let reduced = power_mod(&r, e);
        let mut next = Vec::new();
        for (m, q) in &out {
            for (k, c) in reduced.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut m2 = m.clone();
                if k > 0 {
                    m2.roots.push((r.clone(), k as u32));
                }
                next.push((m2, q * c));
            }
        }
        out = next;
    }
    out
}

/// `x^e mod f` as a polynomial of degree below `deg f`.
fn power_mod(g: &RootGen, e: u32) -> QPoly {
    let x = QPoly::x_pow(e as usize);
    if (e as usize) < g.degree() {
        x
    } else {
        x.rem(&g.poly())
    }
}

impl fmt::Display for AlgExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{q}")?;
            if m.radicand != 1 {
                write!(f, "*sqrt({})", m.radicand)?;
            }
            for (g, e) in &m.roots {
                if *e == 1 {
                    write!(f, "*{g}")?;
                } else {
                    write!(f, "*{g}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Rational `p/q` from an f64-free decimal: used for grid values.
pub fn rational_from_decimal_str(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let d = BigInt::from(10).pow(frac.len() as u32);
    let q = Rational::new(n, d);
    Some(if neg { -q } else { q })
}

/// Decimal text of `q` rounded half away from zero to `digits` places.
pub fn rational_to_decimal(q: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = q.abs() * Rational::from_integer(scale);
    let n = (scaled + Rational::new(1.into(), 2.into())).floor().to_integer();
    let text = n.to_string();
    let body = if digits == 0 {
        text
    } else {
        let padded = format!("{text:0>width$}", width = digits + 1);
        let (int, frac) = padded.split_at(padded.len() - digits);
        format!("{int}.{frac}")
    };
    if q.is_negative() && !n.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

impl AlgExpr {
    /// Decimal text of the enclosure midpoint at `bits` of relative precision.
    pub fn decimal(&self, bits: u32, digits: usize) -> Result<String> {
        if let Some(q) = self.as_rational() {
            return Ok(rational_to_decimal(&q, digits));
        }
        let iv = self.interval(bits)?;
        let mid = (iv.lo_rational() + iv.hi_rational()) / Rational::from_integer(2.into());
        Ok(rational_to_decimal(&mid, digits))
    }
}

/// Nearest integer to an exact value, with ties resolved upward.
pub fn round_expr(e: &AlgExpr) -> Result<BigInt> {
    e.add_rational(&Rational::new(1.into(), 2.into())).floor()
}

/// Best f64 of a rational.
pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => Interval::from_rational(q, 80).mid_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn squarefree_split_works() {
        assert_eq!(squarefree_split(8), (2, 2));
        assert_eq!(squarefree_split(72), (6, 2));
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(30), (1, 30));
    }

    #[test]
    fn sqrt_products_collapse() {
        let s2 = AlgExpr::sqrt_scaled(q(1, 1), 2);
        let s8 = AlgExpr::sqrt_scaled(q(1, 1), 8);
        assert_eq!(s8, s2.scale(&q(2, 1)));
        let s6 = s2.mul(&AlgExpr::sqrt_scaled(q(1, 1), 3));
        assert_eq!(s6, AlgExpr::sqrt_scaled(q(1, 1), 6));
        assert_eq!(s2.mul(&s2).as_rational(), Some(q(2, 1)));
    }

    #[test]
    fn signs_of_surd_combinations() {
        // 3*sqrt(2)/2 - 2 > 0
        let e = AlgExpr::sqrt_scaled(q(3, 2), 2).add_rational(&q(-2, 1));
        assert_eq!(e.sign().unwrap(), Ordering::Greater);
        // sqrt(2) + sqrt(3) - sqrt(10) is about -0.016
        let e = AlgExpr::sqrt_scaled(q(1, 1), 2)
            .add(&AlgExpr::sqrt_scaled(q(1, 1), 3))
            .sub(&AlgExpr::sqrt_scaled(q(1, 1), 10));
        assert_eq!(e.sign().unwrap(), Ordering::Less);
    }

    #[test]
    fn cube_root_power_reduction() {
        let c = RootGen::from_desc_ints(&[1, 0, 0, -2], q(1, 1), q(2, 1)).unwrap();
        let a = AlgExpr::root(c);
        assert_eq!(a.pow(3).as_rational(), Some(q(2, 1)));
        let e = a.pow(2).sub(&AlgExpr::from_rational(q(8, 5)));
        // 2^(2/3) = 1.5874 < 1.6
        assert_eq!(e.sign().unwrap(), Ordering::Less);
    }

    #[test]
    fn floor_is_exact_on_integers() {
        let s2 = AlgExpr::sqrt_scaled(q(1, 1), 2);
        assert_eq!(s2.mul(&s2).floor().unwrap(), BigInt::from(2));
        assert_eq!(s2.scale(&q(10, 1)).floor().unwrap(), BigInt::from(14));
        assert_eq!(s2.scale(&q(-1, 1)).floor().unwrap(), BigInt::from(-2));
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(rational_from_decimal_str("7.3"), Some(q(73, 10)));
        assert_eq!(rational_from_decimal_str("-0.25"), Some(q(-1, 4)));
        assert_eq!(rational_from_decimal_str("12"), Some(q(12, 1)));
        assert_eq!(rational_from_decimal_str("1.2.3"), None);
    }

    #[test]
    fn decimal_text() {
        let q = |a: i64, b: i64| Rational::new(a.into(), b.into());
        assert_eq!(rational_to_decimal(&q(1, 3), 4), "0.3333");
        assert_eq!(rational_to_decimal(&q(-2, 3), 2), "-0.67");
        assert_eq!(rational_to_decimal(&q(5, 2), 0), "3");
        assert_eq!(rational_to_decimal(&q(-1, 1000), 2), "0.00");
        assert_eq!(AlgExpr::sqrt_scaled(q(1, 1), 2).decimal(128, 20).unwrap(), "1.41421356237309504880");
    }
}
