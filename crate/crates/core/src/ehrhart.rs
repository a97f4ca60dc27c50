//! Dedekind sums and Ehrhart polynomials of integer corner simplices
//! `{x >= 0, sum x_i / a_i <= 1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::counting::count_simplex;
use crate::error::{Error, Result};
use crate::mainterm::closed_forms;
use crate::polytope::{AxisLengths, CornerSimplex};
use crate::scalar::{AlgebraicScalar, Rational};

/// Largest modulus summed term by term by default.
pub const DIRECT_LIMIT: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DedekindSum {
    pub a: i64,
    pub b: u64,
    pub value: Rational,
}

fn check_coprime(a: i64, b: u64) -> Result<()> {
    if b == 0 || a.unsigned_abs().gcd(&b) != 1 {
        return Err(Error::NotCoprime { a, b: b as i64 });
    }
    Ok(())
}

/// `s(a, b)` through the defining sum; every term is kept as an integer over
/// the common denominator `4 b^2`.
pub fn dedekind_direct(a: i64, b: u64) -> Result<Rational> {
    check_coprime(a, b)?;
    let bi = b as i128;
    let ar = (a as i128).rem_euclid(bi);
    let mut acc: i128 = 0;
    for k in 1..bi {
        acc += (2 * k - bi) * (2 * ((ar * k) % bi) - bi);
    }
    Ok(Rational::new(acc.into(), (4 * bi * bi).into()))
}

/// `s(a, b)` through reciprocity, as in the Euclidean algorithm.
pub fn dedekind_reciprocity(a: i64, b: u64) -> Result<Rational> {
    check_coprime(a, b)?;
    let mut sign = Rational::one();
    let mut total = Rational::zero();
    let mut b = b as i128;
    let mut a = (a as i128).rem_euclid(b);
    // s(a, b) = -s(b, a) - 1/4 + (a/b + b/a + 1/(ab)) / 12 and s(b, a) = s(b mod a, a)
    while b > 1 && a > 0 {
        let (ai, bi) = (BigInt::from(a), BigInt::from(b));
        let corr = Rational::new(&ai * &ai + &bi * &bi + 1, 12 * &ai * &bi) - Rational::new(1.into(), 4.into());
        total += &sign * corr;
        sign = -sign;
        let r = b % a;
        b = a;
        a = r;
    }
    Ok(total)
}

pub fn dedekind_sum(a: i64, b: u64) -> Result<DedekindSum> {
    let value = if b <= DIRECT_LIMIT { dedekind_direct(a, b)? } else { dedekind_reciprocity(a, b)? };
    Ok(DedekindSum { a, b, value })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    pub d: usize,
    /// Coefficients of `t^0, ..., t^d`.
    pub coefficients: Vec<Rational>,
}

impl EhrhartPolynomial {
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }
}

impl Serialize for EhrhartPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

fn integer_simplex(a: &[u64]) -> Result<CornerSimplex> {
    if a.is_empty() || a.contains(&0) {
        return Err(Error::InvalidInput("axes must be positive integers".into()));
    }
    let axes = AxisLengths::new(a.iter().map(|&x| AlgebraicScalar::from_int(x as i64)).collect())?;
    Ok(CornerSimplex::standard(axes))
}

fn lattice_count(s: &CornerSimplex, t: u64) -> Result<BigInt> {
    if t == 0 {
        return Ok(BigInt::one());
    }
    Ok(BigInt::from(count_simplex(s, &AlgebraicScalar::from_int(t as i64))?.count))
}

/// Coefficients of the polynomial through `(x_i, y_i)`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    let mut out = vec![Rational::zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
        let mut basis = vec![Rational::one()];
        let mut den = Rational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[j];
            }
            basis = next;
            den *= &xs[i] - &xs[j];
        }
        let f = &ys[i] / den;
        for (o, c) in out.iter_mut().zip(&basis) {
            *o += c * &f;
        }
    }
    out
}

/// Interpolates through the counts at `t = 0..=d` and checks the
/// polynomial against the counts at `t = d + 1` and `t = d + 2`.
pub fn ehrhart_by_interpolation(a: &[u64]) -> Result<EhrhartPolynomial> {
    let s = integer_simplex(a)?;
    let d = a.len();
    let xs: Vec<Rational> = (0..=d as i64).map(|t| Rational::from_integer(t.into())).collect();
    let ys: Vec<Rational> =
        (0..=d as u64).map(|t| lattice_count(&s, t).map(Rational::from_integer)).collect::<Result<_>>()?;
    let poly = EhrhartPolynomial { d, coefficients: interpolate(&xs, &ys) };
    for t in [d as u64 + 1, d as u64 + 2] {
        let actual = Rational::from_integer(lattice_count(&s, t)?);
        let expected = poly.eval(&Rational::from_integer(t.into()));
        if actual != expected {
            return Err(Error::InterpolationInconsistent { t, expected: expected.to_string(), actual: actual.to_string() });
        }
    }
    Ok(poly)
}

/// The coefficient of `t^{d-2}` for pairwise coprime integer axes: the
/// real-axis main-term coefficient plus a Dedekind-sum correction.
pub fn coefficient_td_minus_2_formula(a: &[u64]) -> Result<Rational> {
    let d = a.len();
    if d < 2 {
        return Err(Error::InvalidInput("the formula needs d >= 2".into()));
    }
    if a.contains(&0) {
        return Err(Error::InvalidInput("axes must be positive integers".into()));
    }
    for i in 0..d {
        for j in i + 1..d {
            if a[i].gcd(&a[j]) != 1 {
                return Err(Error::NotPairwiseCoprime(a.to_vec()));
            }
        }
    }
    let aq: Vec<Rational> = a.iter().map(|&x| Rational::from_integer(x.into())).collect();
    let main = closed_forms::e_d_minus_2(d).eval_rational(&aq);
    let prod: BigInt = a.iter().map(|&x| BigInt::from(x)).product();
    let mut corr = Rational::new(BigInt::from(d), 4.into()) + Rational::new(BigInt::one(), 12 * &prod);
    for i in 0..d {
        let others: BigInt = &prod / BigInt::from(a[i]);
        let r = (others % BigInt::from(a[i])).try_into().expect("residue below a_i");
        corr -= dedekind_sum(r, a[i])?.value;
    }
    let fact: BigInt = (1..=(d as u64).saturating_sub(2)).map(BigInt::from).product();
    Ok(main + corr / Rational::from_integer(fact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn small_dedekind_sums() {
        assert_eq!(dedekind_sum(1, 2).unwrap().value, rat(0, 1));
        assert_eq!(dedekind_sum(1, 3).unwrap().value, rat(1, 18));
        assert_eq!(dedekind_sum(5, 1).unwrap().value, rat(0, 1));
        assert!(matches!(dedekind_sum(4, 6), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn both_paths_agree() {
        for (a, b) in [(3, 7), (-5, 12), (100, 997), (12, 1), (7_919, 10_007)] {
            assert_eq!(dedekind_direct(a, b).unwrap(), dedekind_reciprocity(a, b).unwrap(), "s({a},{b})");
        }
    }

    #[test]
    fn standard_tetrahedron() {
        let p = ehrhart_by_interpolation(&[1, 1, 1]).unwrap();
        assert_eq!(p.coefficients, vec![rat(1, 1), rat(11, 6), rat(1, 1), rat(1, 6)]);
        assert_eq!(coefficient_td_minus_2_formula(&[1, 1, 1]).unwrap(), rat(11, 6));
    }

    #[test]
    fn segment_and_triangle() {
        assert_eq!(ehrhart_by_interpolation(&[1]).unwrap().coefficients, vec![rat(1, 1), rat(1, 1)]);
        let p = ehrhart_by_interpolation(&[2, 3]).unwrap();
        assert_eq!(p.coefficients[2], rat(3, 1));
        assert_eq!(coefficient_td_minus_2_formula(&[2, 3]).unwrap(), p.coefficients[0]);
    }

    #[test]
    fn coprime_triple() {
        let p = ehrhart_by_interpolation(&[2, 3, 5]).unwrap();
        assert_eq!(coefficient_td_minus_2_formula(&[2, 3, 5]).unwrap(), p.coefficients[1]);
        assert!(matches!(coefficient_td_minus_2_formula(&[2, 4, 5]), Err(Error::NotPairwiseCoprime(_))));
    }
}
