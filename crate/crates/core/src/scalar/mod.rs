//! Exact and certified real scalars.
//!
//! [`AlgebraicScalar`] has three tiers: rationals, quadratic surds
//! `r + s*sqrt(D)`, and real roots of integer polynomials given by an
//! isolating interval. All boundary decisions go through [`AlgExpr`], which
//! decides signs exactly or fails loudly at the precision cap.

pub mod expr;
pub mod interval;
pub mod parse;
pub mod poly;
pub mod relation;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use expr::AlgExpr;
pub use interval::Interval;
pub use poly::{QPoly, RootGen};
pub use relation::detect_rational_dependence;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const PRECISION_CAP: u32 = 4096;

/// Shorthand for `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScalarForm {
    Rational(Rational),
    /// `r + s*sqrt(d)` with `d > 1` squarefree and `s != 0`.
    Quadratic { r: Rational, s: Rational, d: u64 },
    PolyRoot(RootGen),
}

#[derive(Clone, Debug)]
pub struct AlgebraicScalar {
    form: ScalarForm,
    interval: Interval,
    precision_bits: u32,
}

impl PartialEq for AlgebraicScalar {
    fn eq(&self, o: &Self) -> bool {
        self.form == o.form
    }
}

impl Eq for AlgebraicScalar {}

impl AlgebraicScalar {
    fn with_form(form: ScalarForm, bits: u32) -> Result<Self> {
        if bits > PRECISION_CAP {
            return Err(Error::PrecisionExhausted {
                bits,
                context: "requested precision exceeds the cap".into(),
            });
        }
        let expr = form_expr(&form);
        let interval = expr.interval(bits.max(1))?;
        Ok(AlgebraicScalar { form, interval, precision_bits: bits.max(1) })
    }

    pub fn rational(q: Rational) -> Self {
        Self::with_form(ScalarForm::Rational(q), DEFAULT_PRECISION_BITS).expect("rational enclosure")
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }

    /// `r + s*sqrt(d)`, canonicalized: perfect-square factors of `d` move into
    /// `s`, and a vanishing surd part yields the rational tier.
    pub fn quadratic(r: Rational, s: Rational, d: u64) -> Self {
        let (k, sqf) = expr::squarefree_split(d);
        let s = s * Rational::from_integer(k.into());
        let form = if d == 0 || s.is_zero() {
            ScalarForm::Rational(r)
        } else if sqf == 1 {
            ScalarForm::Rational(r + s)
        } else {
            ScalarForm::Quadratic { r, s, d: sqf }
        };
        Self::with_form(form, DEFAULT_PRECISION_BITS).expect("quadratic enclosure")
    }

    pub fn sqrt(d: u64) -> Self {
        Self::quadratic(Rational::zero(), Rational::one(), d)
    }

    pub fn poly_root(g: RootGen) -> Self {
        let form = if g.degree() == 1 {
            let c = g.coeffs();
            ScalarForm::Rational(Rational::new(-c[0].clone(), c[1].clone()))
        } else {
            ScalarForm::PolyRoot(g)
        };
        Self::with_form(form, DEFAULT_PRECISION_BITS).expect("root enclosure")
    }

    pub fn form(&self) -> &ScalarForm {
        &self.form
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn cached_interval(&self) -> &Interval {
        &self.interval
    }

    pub fn to_expr(&self) -> AlgExpr {
        form_expr(&self.form)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.form {
            ScalarForm::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Same value with a tighter enclosure. Exact tiers recompute from the
    /// closed form, so there is no error growth.
    pub fn refine(&self, bits: u32) -> Result<Self> {
        if bits > PRECISION_CAP {
            return Err(Error::PrecisionExhausted {
                bits,
                context: format!("refining {self}"),
            });
        }
        if bits <= self.precision_bits {
            return Ok(self.clone());
        }
        Self::with_form(self.form.clone(), bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.interval.mid_f64()
    }

    pub fn sign(&self) -> Result<Ordering> {
        match &self.form {
            ScalarForm::Rational(q) => Ok(q.cmp(&Rational::zero())),
            _ => self.to_expr().sign(),
        }
    }

    /// Exact test for a rational value. Poly-root values are checked against
    /// the rational root theorem on a shrunken isolating interval.
    pub fn is_rational(&self) -> bool {
        match &self.form {
            ScalarForm::Rational(_) => true,
            ScalarForm::Quadratic { .. } => false,
            ScalarForm::PolyRoot(g) => rational_value_of_root(g).is_some(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        let form = match &self.form {
            ScalarForm::Rational(q) => {
                if q.is_zero() {
                    return Err(Error::InvalidInput("reciprocal of zero".into()));
                }
                ScalarForm::Rational(q.recip())
            }
            ScalarForm::Quadratic { r, s, d } => {
                let n = r * r - s * s * Rational::from_integer((*d).into());
                ScalarForm::Quadratic { r: r / &n, s: -(s / &n), d: *d }
            }
            ScalarForm::PolyRoot(g) => {
                if let Some(q) = rational_value_of_root(g) {
                    if q.is_zero() {
                        return Err(Error::InvalidInput("reciprocal of zero".into()));
                    }
                    ScalarForm::Rational(q.recip())
                } else {
                    ScalarForm::PolyRoot(reciprocal_root(g)?)
                }
            }
        };
        Self::with_form(form, self.precision_bits)
    }

    pub fn neg(&self) -> Self {
        let form = match &self.form {
            ScalarForm::Rational(q) => ScalarForm::Rational(-q),
            ScalarForm::Quadratic { r, s, d } => ScalarForm::Quadratic { r: -r, s: -s, d: *d },
            ScalarForm::PolyRoot(g) => {
                let c: Vec<BigInt> = g
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                    .collect();
                ScalarForm::PolyRoot(RootGen::new(c, -g.hi(), -g.lo()).expect("negated root"))
            }
        };
        Self::with_form(form, self.precision_bits).expect("negation enclosure")
    }

    /// Exact comparison of `x * t` against the integer `n`.
    pub fn compare_to_integer_multiple(&self, t: &AlgebraicScalar, n: &BigInt) -> Result<Ordering> {
        self.to_expr()
            .mul(&t.to_expr())
            .add_rational(&-Rational::from_integer(n.clone()))
            .sign()
    }

    pub fn cmp_value(&self, o: &Self) -> Result<Ordering> {
        self.to_expr().cmp_expr(&o.to_expr())
    }
}

fn form_expr(f: &ScalarForm) -> AlgExpr {
    match f {
        ScalarForm::Rational(q) => AlgExpr::from_rational(q.clone()),
        ScalarForm::Quadratic { r, s, d } => AlgExpr::sqrt_scaled(s.clone(), *d).add_rational(r),
        ScalarForm::PolyRoot(g) => AlgExpr::root(g.clone()),
    }
}

/// The root's value if it is rational: any rational root `p/q` of an integer
/// polynomial has `q` dividing the leading coefficient.
fn rational_value_of_root(g: &RootGen) -> Option<Rational> {
    let c = g.coeffs();
    let lead = c.last().unwrap().abs();
    let f = g.poly();
    // Width below 1/(2 lead) leaves at most two candidates k/lead.
    let bits = lead.bits() as u32 + 4;
    let e = g.enclosure(bits);
    let l = Rational::from_integer(lead.clone());
    let lo = (e.lo_rational() * &l).floor().to_integer();
    let hi = (e.hi_rational() * &l).ceil().to_integer();
    let mut k = lo;
    while k <= hi {
        let cand = Rational::new(k.clone(), lead.clone());
        if f.eval(&cand).is_zero() && &cand >= g.lo() && &cand <= g.hi() {
            return Some(cand);
        }
        k += 1;
    }
    None
}

fn reciprocal_root(g: &RootGen) -> Result<RootGen> {
    let rev: Vec<BigInt> = g.coeffs().iter().rev().cloned().collect();
    // Shrink until the interval excludes zero.
    let mut prec = 8;
    loop {
        let e = g.enclosure(prec);
        let (lo, hi) = (e.lo_rational(), e.hi_rational());
        if lo.is_positive() || hi.is_negative() {
            // x -> 1/x is decreasing on each half-line.
            let (nlo, nhi) = (hi.recip(), lo.recip());
            let (nlo, nhi) = if nlo < nhi { (nlo, nhi) } else { (nhi, nlo) };
            if lo == hi {
                return Err(Error::InvalidInput("rational root has no isolating interval".into()));
            }
            if let Ok(r) = RootGen::new(rev.clone(), nlo, nhi) {
                return Ok(r);
            }
        }
        if prec > PRECISION_CAP {
            return Err(Error::PrecisionExhausted { bits: prec, context: format!("reciprocal of {g}") });
        }
        prec *= 2;
    }
}

impl fmt::Display for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            ScalarForm::Rational(q) => write!(f, "{q}"),
            ScalarForm::Quadratic { r, s, d } => {
                let surd = if s.is_one() {
                    format!("sqrt({d})")
                } else if *s == -Rational::one() {
                    format!("-sqrt({d})")
                } else {
                    format!("{s}*sqrt({d})")
                };
                if r.is_zero() {
                    write!(f, "{surd}")
                } else if surd.starts_with('-') {
                    write!(f, "{r}{surd}")
                } else {
                    write!(f, "{r}+{surd}")
                }
            }
            ScalarForm::PolyRoot(g) => write!(f, "{g}"),
        }
    }
}

impl FromStr for AlgebraicScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_scalar(s)
    }
}

impl Serialize for AlgebraicScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AlgebraicScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refine_sqrt_two() {
        let s = AlgebraicScalar::sqrt(2).refine(64).unwrap();
        let iv = s.cached_interval();
        let lo = rat(141421356237309504, 100000000000000000);
        let hi = rat(141421356237309511, 100000000000000000);
        assert!(iv.lo_rational() >= lo && iv.hi_rational() <= hi);
    }

    #[test]
    fn rationals_stay_exact() {
        let s = AlgebraicScalar::rational(rat(3, 7)).refine(1000).unwrap();
        assert_eq!(s.as_rational(), Some(&rat(3, 7)));
        assert!(AlgebraicScalar::rational(rat(3, 7)).refine(5000).is_err());
    }

    #[test]
    fn quadratic_canonical_form() {
        let s = AlgebraicScalar::quadratic(rat(1, 1), rat(1, 1), 8);
        assert_eq!(s.form(), &ScalarForm::Quadratic { r: rat(1, 1), s: rat(2, 1), d: 2 });
        let s = AlgebraicScalar::quadratic(rat(1, 1), rat(3, 1), 4);
        assert_eq!(s.form(), &ScalarForm::Rational(rat(7, 1)));
    }

    #[test]
    fn integer_multiple_comparisons() {
        let s2 = AlgebraicScalar::sqrt(2);
        let t = AlgebraicScalar::rational(rat(3, 2));
        assert_eq!(s2.compare_to_integer_multiple(&t, &2.into()).unwrap(), Ordering::Greater);
        let half = AlgebraicScalar::rational(rat(1, 2));
        let four = AlgebraicScalar::from_int(4);
        assert_eq!(half.compare_to_integer_multiple(&four, &2.into()).unwrap(), Ordering::Equal);
        let cbrt = AlgebraicScalar::poly_root(RootGen::from_desc_ints(&[1, 0, 0, -2], rat(1, 1), rat(2, 1)).unwrap());
        let one = AlgebraicScalar::from_int(1);
        assert_eq!(cbrt.compare_to_integer_multiple(&one, &2.into()).unwrap(), Ordering::Less);
        // (2^(1/3))^3 * 1 vs 2 through the expression layer
        let cube = cbrt.to_expr().pow(3);
        assert_eq!(cube.sub(&AlgExpr::from_int(2)).sign().unwrap(), Ordering::Equal);
    }

    #[test]
    fn reciprocals_preserve_tier() {
        let s = AlgebraicScalar::quadratic(rat(1, 1), rat(1, 1), 2);
        let r = s.recip().unwrap();
        assert!(matches!(r.form(), ScalarForm::Quadratic { .. }));
        let prod = s.to_expr().mul(&r.to_expr());
        assert_eq!(prod.as_rational(), Some(rat(1, 1)));
        let c = AlgebraicScalar::poly_root(RootGen::from_desc_ints(&[1, 0, 0, -2], rat(1, 1), rat(2, 1)).unwrap());
        let rc = c.recip().unwrap();
        assert!((rc.to_f64() - 2f64.powf(-1.0 / 3.0)).abs() < 1e-15);
        assert!(!c.is_rational());
    }

    #[test]
    fn rational_poly_root_detected() {
        // (2x - 3)(x^2 + 1)
        let g = RootGen::from_desc_ints(&[2, -3, 2, -3], rat(1, 1), rat(2, 1)).unwrap();
        let s = AlgebraicScalar::poly_root(g);
        assert!(s.is_rational());
    }
}
