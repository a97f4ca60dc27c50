//! Integer relation search by lattice reduction.
//!
//! The result is advisory: a relation found at finite precision is checked
//! against the exact values, but the absence of one proves nothing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgExpr, AlgebraicScalar, Rational};
use crate::error::{Error, Result};

type Vector = Vec<BigInt>;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_q(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &[Vector]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = b.len();
    let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<Rational> = b[i].iter().map(|x| Rational::from_integer(x.clone())).collect();
        let mut v = bi.clone();
        for j in 0..i {
            if norms[j] == Rational::zero() {
                continue;
            }
            mu[i][j] = dot_q(&bi, &star[j]) / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        norms.push(dot_q(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

fn round_q(q: &Rational) -> BigInt {
    (q + Rational::new(1.into(), 2.into())).floor().to_integer()
}

/// LLL reduction with parameter 3/4.
pub fn lll_reduce(mut b: Vec<Vector>) -> Vec<Vector> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = Rational::new(3.into(), 4.into());
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = round_q(&mu[k][j]);
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qq = Rational::from_integer(q);
                for i in 0..j {
                    let t = &qq * &mu[j][i];
                    mu[k][i] -= t;
                }
                mu[k][j] -= &qq;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let gs = gram_schmidt(&b);
            mu = gs.0;
            norms = gs.1;
            k = (k - 1).max(1);
        }
    }
    b
}

fn normalize(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    v
}

/// Searches for a small integer vector `v` with `|sum v_i x_i| < 2^(-bits/2)`.
pub fn detect_rational_dependence(xs: &[AlgebraicScalar], bits: u32) -> Result<Option<Vec<BigInt>>> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::InvalidInput("relation search needs at least two values".into()));
    }
    let exprs: Vec<AlgExpr> = xs.iter().map(|x| x.to_expr()).collect();
    let prec = bits + 32;
    let mut basis = Vec::with_capacity(n);
    for (i, e) in exprs.iter().enumerate() {
        let iv = e.interval_at(prec);
        // round(2^bits * x) from the enclosure midpoint
        let mid2 = iv.lo_units() + iv.hi_units();
        let scaled = round_q(&Rational::new(mid2, BigInt::one() << (prec - bits + 1) as usize));
        let mut row = vec![BigInt::zero(); n + 1];
        row[i] = BigInt::one();
        row[n] = scaled;
        basis.push(row);
    }
    let reduced = lll_reduce(basis);
    let coef_bound = BigInt::one() << (bits as usize / (2 * n)).max(1);
    let tol_bits = bits / 2;
    let mut best: Option<Vec<BigInt>> = None;
    for row in reduced {
        let v: Vec<BigInt> = row[..n].to_vec();
        if v.iter().all(|x| x.is_zero()) || v.iter().any(|x| x.abs() > coef_bound) {
            continue;
        }
        let combo = exprs.iter().zip(&v).fold(AlgExpr::zero(), |acc, (e, c)| {
            acc.add(&e.scale(&Rational::from_integer(c.clone())))
        });
        let small = if combo.is_zero() {
            true
        } else {
            let iv = combo.interval_at(bits + 16);
            let lim = Rational::new(BigInt::one(), BigInt::one() << tol_bits as usize);
            iv.hi_rational().abs() < lim && iv.lo_rational().abs() < lim
        };
        if small {
            let v = normalize(v);
            let better = match &best {
                None => true,
                Some(b) => dot(&v, &v) < dot(b, b),
            };
            if better {
                best = Some(v);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn sqrt_eight_is_twice_sqrt_two() {
        let xs = [AlgebraicScalar::from_int(1), AlgebraicScalar::sqrt(2), AlgebraicScalar::sqrt(8)];
        // sqrt(8) canonicalizes to 2*sqrt(2)
        assert_eq!(detect_rational_dependence(&xs, 128).unwrap(), Some(ints(&[0, 2, -1])));
    }

    #[test]
    fn independent_surds() {
        let xs = [AlgebraicScalar::from_int(1), AlgebraicScalar::sqrt(2), AlgebraicScalar::sqrt(3)];
        assert_eq!(detect_rational_dependence(&xs, 128).unwrap(), None);
    }

    #[test]
    fn rationals_are_dependent() {
        let xs = [AlgebraicScalar::rational(rat(1, 2)), AlgebraicScalar::rational(rat(1, 3))];
        assert_eq!(detect_rational_dependence(&xs, 128).unwrap(), Some(ints(&[2, -3])));
    }
}
