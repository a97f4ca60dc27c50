//! Dyadic fixed-point intervals with outward rounding.
//!
//! An [`Interval`] at precision `p` is the closed set `[lo, hi] * 2^-p` with
//! integer endpoints. Every operation rounds the lower endpoint down and the
//! upper endpoint up, so the exact result is always enclosed.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << (k as usize)
}

pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn floor_shr(x: &BigInt, k: u32) -> BigInt {
    floor_div(x, &pow2(k))
}

fn ceil_shr(x: &BigInt, k: u32) -> BigInt {
    ceil_div(x, &pow2(k))
}

/// `m * 2^e` as f64, correct to within a couple of ulps for any size of `m`.
pub(crate) fn bigint_ldexp(m: &BigInt, e: i64) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let bits = m.bits() as i64;
    let (top, shift) = if bits > 64 {
        let s = bits - 64;
        ((m >> (s as usize)).to_f64().unwrap_or(f64::NAN), s)
    } else {
        (m.to_f64().unwrap_or(f64::NAN), 0)
    };
    ldexp(top, e + shift)
}

pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Interval {
    pub fn new(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi, prec }
    }

    pub fn point(v: BigInt, prec: u32) -> Self {
        Interval { lo: v.clone(), hi: v, prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Self::point(n << (prec as usize), prec)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let scaled = q.numer() << (prec as usize);
        Interval {
            lo: floor_div(&scaled, q.denom()),
            hi: ceil_div(&scaled, q.denom()),
            prec,
        }
    }

    /// Enclosure of `[lo, hi]` given as rationals.
    pub fn from_rational_bounds(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        let l = Self::from_rational(lo, prec);
        let h = Self::from_rational(hi, prec);
        Interval { lo: l.lo, hi: h.hi, prec }
    }

    /// Enclosure of `sqrt(n)` for a nonnegative integer `n`.
    pub fn sqrt_int(n: &BigUint, prec: u32) -> Self {
        let scaled: BigUint = n << (2 * prec as usize);
        let r = scaled.sqrt();
        let exact = &r * &r == scaled;
        let lo = BigInt::from_biguint(Sign::Plus, r);
        let hi = if exact { lo.clone() } else { &lo + 1 };
        Interval { lo, hi, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_units(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_units(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo_rational(&self) -> Rational {
        Rational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn hi_rational(&self) -> Rational {
        Rational::new(self.hi.clone(), pow2(self.prec))
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = (prec - self.prec) as usize;
                Interval { lo: &self.lo << s, hi: &self.hi << s, prec }
            }
            Ordering::Less => {
                let s = self.prec - prec;
                Interval { lo: floor_shr(&self.lo, s), hi: ceil_shr(&self.hi, s), prec }
            }
        }
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.align(other);
        Interval { lo: a.lo + b.lo, hi: a.hi + b.hi, prec: a.prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.align(other);
        let p = a.prec;
        let cands = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let mn = cands.iter().min().unwrap();
        let mx = cands.iter().max().unwrap();
        Interval { lo: floor_shr(mn, p), hi: ceil_shr(mx, p), prec: p }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval { lo: a, hi: b, prec: self.prec }
        } else {
            Interval { lo: b, hi: a, prec: self.prec }
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        self.mul(&Interval::from_rational(q, self.prec))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Interval::from_int(&BigInt::one(), self.prec);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        if n.is_multiple_of(2) && self.contains_zero() {
            // Even powers are nonnegative.
            if acc.lo.is_negative() {
                acc.lo = BigInt::zero();
            }
        }
        acc
    }

    /// Reciprocal; `None` if the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        let num = pow2(2 * self.prec);
        Some(Interval {
            lo: floor_div(&num, &self.hi),
            hi: ceil_div(&num, &self.lo),
            prec: self.prec,
        })
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign if the interval excludes zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn width_units(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// True when `width <= 2^(1-bits) * max(1, |x|)` for every `x` in the interval.
    pub fn meets_width(&self, bits: u32) -> bool {
        let unit = pow2(self.prec);
        // The smallest magnitude in the interval keeps the test valid for every x.
        let min_mag = if self.contains_zero() {
            BigInt::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        };
        let scale = unit.max(min_mag);
        let w = self.width_units();
        if bits == 0 {
            return w <= (scale << 1usize);
        }
        (w << ((bits - 1) as usize)) <= scale
    }

    /// Interval hull.
    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = self.align(other);
        Interval { lo: a.lo.min(b.lo), hi: a.hi.max(b.hi), prec: a.prec }
    }

    pub fn mid_f64(&self) -> f64 {
        bigint_ldexp(&(&self.lo + &self.hi), -(self.prec as i64) - 1)
    }

    /// Midpoint as f64 together with a bound on `|x - mid|` valid for every `x`
    /// in the interval, including the rounding of the midpoint itself.
    pub fn mid_rad_f64(&self) -> (f64, f64) {
        let mid = self.mid_f64();
        let half_w = bigint_ldexp(&self.width_units(), -(self.prec as i64) - 1);
        let rad = half_w * (1.0 + 1e-12) + mid.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
        (mid, rad)
    }

    pub fn lo_f64(&self) -> f64 {
        bigint_ldexp(&self.lo, -(self.prec as i64))
    }

    pub fn hi_f64(&self) -> f64 {
        bigint_ldexp(&self.hi, -(self.prec as i64))
    }

    pub fn floor_lo(&self) -> BigInt {
        floor_shr(&self.lo, self.prec)
    }

    pub fn floor_hi(&self) -> BigInt {
        floor_shr(&self.hi, self.prec)
    }

    /// True if `self` is contained in `other`.
    pub fn subset_of(&self, other: &Self) -> bool {
        let (a, b) = self.align(other);
        a.lo >= b.lo && a.hi <= b.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        q >= &self.lo_rational() && q <= &self.hi_rational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rational_enclosure_is_tight() {
        let i = Interval::from_rational(&q(1, 3), 64);
        assert!(i.contains_rational(&q(1, 3)));
        assert_eq!(i.width_units(), BigInt::one());
        let exact = Interval::from_rational(&q(3, 8), 16);
        assert_eq!(exact.width_units(), BigInt::zero());
    }

    #[test]
    fn sqrt_two_digits() {
        let i = Interval::sqrt_int(&BigUint::from(2u32), 80);
        assert!(i.lo_f64() <= std::f64::consts::SQRT_2 + 1e-15);
        assert!(i.hi_f64() >= std::f64::consts::SQRT_2 - 1e-15);
        assert!(i.meets_width(79));
    }

    #[test]
    fn negative_rounding_is_outward() {
        let a = Interval::from_rational(&q(-1, 3), 10);
        let b = Interval::from_rational(&q(1, 7), 10);
        let p = a.mul(&b);
        assert!(p.contains_rational(&q(-1, 21)));
        let r = a.recip().unwrap();
        assert!(r.contains_rational(&q(-3, 1)));
    }

    #[test]
    fn ldexp_handles_huge_exponents() {
        let m = BigInt::one() << 5000usize;
        assert_eq!(bigint_ldexp(&m, -5000), 1.0);
        assert_eq!(ldexp(1.0, -1074), f64::from_bits(1));
    }
}
