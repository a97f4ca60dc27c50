//! Univariate rational polynomials and isolated real roots.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::interval::Interval;
use super::Rational;
use crate::error::{Error, Result};

/// Polynomial with rational coefficients, stored in ascending order with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoly {
    c: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn constant(q: Rational) -> Self {
        QPoly::new(vec![q])
    }

    /// The monomial `x^k`.
    pub fn x_pow(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        QPoly { c }
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        QPoly::new(c.iter().map(|x| Rational::from_integer(x.clone())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.c.last().expect("lead of zero polynomial")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let prec = x.prec();
        let mut acc = Interval::from_int(&BigInt::zero(), prec);
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add(&Interval::from_rational(c, prec));
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.eval(x).cmp(&Rational::zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = Rational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        QPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        QPoly::new(self.c.iter().map(|x| x * q).collect())
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let mut q = vec![Rational::zero(); r.len() - dd];
        let inv_lead = d.lead().recip();
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] * &inv_lead;
            if !f.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[k + j] -= &f * dc;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Largest squarefree divisor.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.monic()
        } else {
            self.divrem(&g).0.monic()
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    fn sturm_chain(&self) -> Vec<QPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    fn variations(chain: &[QPoly], x: &Rational) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for p in chain {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        Self::variations(&chain, lo).saturating_sub(Self::variations(&chain, hi))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

fn scaled_horner(c: &[BigInt], m: &BigInt, p: u32) -> BigInt {
    // h_k = h_{k+1} * m + c_k * 2^{p (n - k)}, starting from the top.
    let n = c.len() - 1;
    let mut h = BigInt::zero();
    for k in (0..=n).rev() {
        h = h * m + (&c[k] << (p as usize * (n - k)));
    }
    h
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

#[derive(Debug)]
struct RootData {
    /// Primitive integer coefficients, ascending, positive leading term.
    coeffs: Vec<BigInt>,
    lo: Rational,
    hi: Rational,
    /// Dyadic enclosure `[dlo, dhi] * 2^-dprec` with a strict sign change.
    dlo: BigInt,
    dhi: BigInt,
    dprec: u32,
    /// Sign of the polynomial at the lower end of the dyadic enclosure.
    sign_lo: Ordering,
}

/// A real root of an integer polynomial identified by an isolating interval.
#[derive(Clone, Debug)]
pub struct RootGen(Arc<RootData>);

impl PartialEq for RootGen {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for RootGen {}

impl PartialOrd for RootGen {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for RootGen {
    fn cmp(&self, o: &Self) -> Ordering {
        (&self.0.coeffs, &self.0.lo, &self.0.hi).cmp(&(&o.0.coeffs, &o.0.lo, &o.0.hi))
    }
}

impl std::hash::Hash for RootGen {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.0.coeffs.hash(h);
        self.0.lo.hash(h);
        self.0.hi.hash(h);
    }
}

const BASE_DYADIC_PREC: u32 = 64;

impl RootGen {
    /// `coeffs` are ascending integer coefficients.
    pub fn new(coeffs: Vec<BigInt>, lo: Rational, hi: Rational) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|x| x.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("root polynomial must have degree >= 1".into()));
        }
        if lo >= hi {
            return Err(Error::InvalidInput(format!("isolating interval [{lo}, {hi}] is empty")));
        }
        let g = coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let flip = coeffs.last().unwrap().is_negative();
        let coeffs: Vec<BigInt> = coeffs
            .into_iter()
            .map(|c| if flip { -(c / &g) } else { c / &g })
            .collect();
        let f = QPoly::from_ints(&coeffs);
        if !f.is_squarefree() {
            return Err(Error::InvalidInput(format!("root polynomial {f} is not squarefree")));
        }
        let (sl, sh) = (f.sign_at(&lo), f.sign_at(&hi));
        if sl == Ordering::Equal || sh == Ordering::Equal || sl == sh {
            return Err(Error::InvalidInput(format!(
                "polynomial {f} has no sign change on [{lo}, {hi}]"
            )));
        }
        if f.count_roots(&lo, &hi) != 1 {
            return Err(Error::InvalidInput(format!(
                "interval [{lo}, {hi}] does not isolate a single root of {f}"
            )));
        }
        // Shrink in rational arithmetic until a dyadic enclosure is safe.
        let (mut l, mut h) = (lo.clone(), hi.clone());
        let target = Rational::new(BigInt::one(), BigInt::one() << (BASE_DYADIC_PREC as usize));
        loop {
            if &h - &l <= target {
                let p = BASE_DYADIC_PREC;
                let dl = (&l * Rational::from_integer(BigInt::one() << p as usize)).floor();
                let dh = (&h * Rational::from_integer(BigInt::one() << p as usize)).ceil();
                let ql = Rational::new(dl.to_integer(), BigInt::one() << p as usize);
                let qh = Rational::new(dh.to_integer(), BigInt::one() << p as usize);
                let s_ql = f.sign_at(&ql);
                let s_qh = f.sign_at(&qh);
                if s_ql != Ordering::Equal
                    && s_qh != Ordering::Equal
                    && s_ql != s_qh
                    && f.count_roots(&ql, &qh) == 1
                {
                    return Ok(RootGen(Arc::new(RootData {
                        coeffs,
                        lo,
                        hi,
                        dlo: dl.to_integer(),
                        dhi: dh.to_integer(),
                        dprec: p,
                        sign_lo: s_ql,
                    })));
                }
            }
            let m = (&l + &h) / Rational::from_integer(2.into());
            let sm = f.sign_at(&m);
            if sm == Ordering::Equal {
                // The root is this rational; a tiny dyadic box around it isolates it.
                let eps = Rational::new(BigInt::one(), BigInt::one() << 200usize);
                l = &m - &eps;
                h = &m + &eps;
                while f.count_roots(&l, &h) != 1
                    || f.sign_at(&l) == Ordering::Equal
                    || f.sign_at(&h) == Ordering::Equal
                {
                    let e2 = (&h - &m) / Rational::from_integer(2.into());
                    l = &m - &e2;
                    h = &m + &e2;
                }
                // Force the dyadic step through the generic branch with a finer target.
                let p = 256u32;
                let dl = (&l * Rational::from_integer(BigInt::one() << p as usize)).floor();
                let dh = (&h * Rational::from_integer(BigInt::one() << p as usize)).ceil();
                let ql = Rational::new(dl.to_integer(), BigInt::one() << p as usize);
                return Ok(RootGen(Arc::new(RootData {
                    coeffs,
                    lo,
                    hi,
                    dlo: dl.to_integer(),
                    dhi: dh.to_integer(),
                    dprec: p,
                    sign_lo: f.sign_at(&ql),
                })));
            }
            if sm == f.sign_at(&l) {
                l = m;
            } else {
                h = m;
            }
        }
    }

    pub fn from_desc_ints(desc: &[i64], lo: Rational, hi: Rational) -> Result<Self> {
        let asc: Vec<BigInt> = desc.iter().rev().map(|&c| BigInt::from(c)).collect();
        Self::new(asc, lo, hi)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0.coeffs
    }

    pub fn poly(&self) -> QPoly {
        QPoly::from_ints(&self.0.coeffs)
    }

    pub fn degree(&self) -> usize {
        self.0.coeffs.len() - 1
    }

    pub fn lo(&self) -> &Rational {
        &self.0.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.0.hi
    }

    /// Dyadic enclosure of width at most `2^-prec`.
    pub fn enclosure(&self, prec: u32) -> Interval {
        let d = &self.0;
        let c = &d.coeffs;
        let (mut l, mut h, mut p) = (d.dlo.clone(), d.dhi.clone(), d.dprec);
        if p < prec {
            l <<= (prec - p) as usize;
            h <<= (prec - p) as usize;
            p = prec;
        }
        let two = BigInt::from(2);
        while &h - &l > BigInt::one() {
            let s = &l + &h;
            if s.is_odd() {
                l <<= 1usize;
                h <<= 1usize;
                p += 1;
                continue;
            }
            let m = s / &two;
            match scaled_horner(c, &m, p).sign_ord() {
                Ordering::Equal => {
                    return Interval::point(m, p).with_prec(prec.max(p));
                }
                s if s == d.sign_lo => l = m,
                _ => h = m,
            }
        }
        Interval::new(l, h, p).with_prec(prec)
    }

    /// A rational isolating interval of width at most `2^-prec` with a strict
    /// sign change, as `(lo, hi)`.
    fn rational_box(&self, prec: u32) -> (Rational, Rational) {
        let e = self.enclosure(prec);
        (e.lo_rational(), e.hi_rational())
    }

    /// Exact sign of `g(alpha)` for a rational polynomial `g`.
    pub fn sign_of(&self, g: &QPoly) -> Ordering {
        if g.is_zero() {
            return Ordering::Equal;
        }
        if g.degree() == Some(0) {
            return g.coeffs()[0].cmp(&Rational::zero());
        }
        let f = self.poly();
        let h = f.gcd(g);
        let (mut lo, mut hi) = (self.0.lo.clone(), self.0.hi.clone());
        if h.degree().unwrap_or(0) > 0 {
            let (a, b) = (h.sign_at(&lo), h.sign_at(&hi));
            if a != Ordering::Equal && b != Ordering::Equal && a != b {
                return Ordering::Equal;
            }
        }
        // alpha is not a root of g: shrink until g has no root left in the box.
        let gs = g.squarefree_part();
        let mut prec = 32;
        loop {
            let inside = gs.count_roots(&lo, &hi) + usize::from(gs.sign_at(&lo) == Ordering::Equal);
            if inside == 0 {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                return g.sign_at(&mid);
            }
            prec *= 2;
            let (l, h) = self.rational_box(prec);
            lo = l;
            hi = h;
        }
    }

    /// Exact comparison of two roots. Equality is certified by a common factor
    /// vanishing inside both isolating intervals.
    pub fn cmp_value(&self, o: &Self) -> Ordering {
        if self == o {
            return Ordering::Equal;
        }
        let h = self.poly().gcd(&o.poly());
        if h.degree().unwrap_or(0) > 0 {
            let lo = (&self.0.lo).max(&o.0.lo).clone();
            let hi = (&self.0.hi).min(&o.0.hi).clone();
            if lo < hi && h.count_roots(&lo, &hi) + usize::from(h.sign_at(&lo) == Ordering::Equal) > 0 {
                // A common root inside both isolating boxes must be both values.
                let f = self.poly();
                let g = o.poly();
                let in_f = f.count_roots(&lo, &hi) + usize::from(f.sign_at(&lo) == Ordering::Equal);
                let in_g = g.count_roots(&lo, &hi) + usize::from(g.sign_at(&lo) == Ordering::Equal);
                if in_f == 1 && in_g == 1 {
                    return Ordering::Equal;
                }
            }
        }
        let mut prec = 64;
        loop {
            let a = self.enclosure(prec);
            let b = o.enclosure(prec);
            if a.hi_units() < b.lo_units() {
                return Ordering::Less;
            }
            if b.hi_units() < a.lo_units() {
                return Ordering::Greater;
            }
            prec *= 2;
        }
    }
}

impl fmt::Display for RootGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root(")?;
        for (i, c) in self.0.coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "; {}, {})", self.0.lo, self.0.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn qp(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| q(x, 1)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = qp(&[2, -3, 1]);
        let b = qp(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), qp(&[-1, 1]));
        let (qq, r) = a.divrem(&qp(&[-1, 1]));
        assert_eq!(qq, qp(&[-2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn sturm_counts_roots() {
        // x^3 - x has roots -1, 0, 1
        let f = qp(&[0, -1, 0, 1]);
        assert_eq!(f.count_roots(&q(-2, 1), &q(2, 1)), 3);
        assert_eq!(f.count_roots(&q(-1, 2), &q(1, 2)), 1);
        assert_eq!(f.count_roots(&q(1, 2), &q(3, 1)), 1);
    }

    #[test]
    fn cube_root_of_two() {
        let r = RootGen::from_desc_ints(&[1, 0, 0, -2], q(1, 1), q(2, 1)).unwrap();
        let e = r.enclosure(40);
        let v = 2f64.powf(1.0 / 3.0);
        assert!(e.lo_f64() <= v + 1e-15 && e.hi_f64() >= v - 1e-15);
        assert!(e.hi_f64() - e.lo_f64() <= 2f64.powi(-39));
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(RootGen::from_desc_ints(&[1, 0, -1], q(-2, 1), q(2, 1)).is_err());
        assert!(RootGen::from_desc_ints(&[1, 0, -2], q(2, 1), q(3, 1)).is_err());
        // (x - 1)^2 is not squarefree
        assert!(RootGen::from_desc_ints(&[1, -2, 1], q(0, 1), q(3, 1)).is_err());
    }

    #[test]
    fn exact_sign_of_polynomial_at_root() {
        let r = RootGen::from_desc_ints(&[1, 0, -2], q(1, 1), q(2, 1)).unwrap();
        // x^2 - 2 vanishes, x - 3/2 is negative, x - 7/5 positive
        assert_eq!(r.sign_of(&qp(&[-2, 0, 1])), Ordering::Equal);
        assert_eq!(r.sign_of(&QPoly::new(vec![q(-3, 2), q(1, 1)])), Ordering::Less);
        assert_eq!(r.sign_of(&QPoly::new(vec![q(-7, 5), q(1, 1)])), Ordering::Greater);
    }

    #[test]
    fn same_root_from_different_polynomials() {
        let a = RootGen::from_desc_ints(&[1, 0, -2], q(1, 1), q(2, 1)).unwrap();
        // (x^2 - 2)(x - 5) with a different isolating interval
        let b = RootGen::from_desc_ints(&[1, -5, -2, 10], q(13, 10), q(3, 2)).unwrap();
        assert_eq!(a.cmp_value(&b), Ordering::Equal);
        let c = RootGen::from_desc_ints(&[1, 0, -3], q(1, 1), q(2, 1)).unwrap();
        assert_eq!(a.cmp_value(&c), Ordering::Less);
    }

    #[test]
    fn rational_root_inside_interval() {
        // 2x - 1 has the root 1/2
        let r = RootGen::from_desc_ints(&[2, -1], q(0, 1), q(1, 1)).unwrap();
        let e = r.enclosure(64);
        assert!(e.contains_rational(&q(1, 2)));
    }
}
