//! Main-term polynomials `p(t)` for cross-polytopes and `q(t)` for corner
//! simplices, kept as exact Laurent polynomials in the axes.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::polytope::AxisLengths;
use crate::scalar::{AlgExpr, AlgebraicScalar, Interval, Rational};

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::zero(); n + 1];
    b[0] = Rational::one();
    // sum_{k=0}^{m} C(m+1, k) B_k = 0
    for m in 1..=n {
        let mut s = Rational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate().take(m) {
            s += Rational::from_integer(binom.clone()) * bk;
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b[m] = -s / Rational::from_integer(BigInt::from(m + 1));
    }
    b
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `zeta(n) = ratio * pi^n` for even `n >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaEven {
    pub n: usize,
    pub ratio: Rational,
}

pub fn zeta_even(n: usize) -> ZetaEven {
    assert!(n >= 2 && n.is_multiple_of(2), "zeta_even needs an even argument >= 2, got {n}");
    let b = &bernoulli(n)[n];
    let k = n / 2;
    let sign = if k % 2 == 1 { Rational::one() } else { -Rational::one() };
    let ratio = sign * b * Rational::from_integer(BigInt::one() << n)
        / Rational::from_integer(factorial(n) * 2);
    ZetaEven { n, ratio }
}

/// Laurent polynomial in `a_1..a_d`: exponent vector to rational coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbolic(pub BTreeMap<Vec<i32>, Rational>);

impl Symbolic {
    pub fn monomial(exps: Vec<i32>, c: Rational) -> Self {
        let mut s = Symbolic::default();
        s.add_term(exps, c);
        s
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, o: &Symbolic) {
        for (k, v) in &o.0 {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn scale(&mut self, q: &Rational) {
        if q.is_zero() {
            self.0.clear();
            return;
        }
        for v in self.0.values_mut() {
            *v *= q;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Exact value at the given axes.
    pub fn eval(&self, axes: &AxisLengths) -> AlgExpr {
        let mut acc = AlgExpr::zero();
        for (exps, c) in &self.0 {
            let mut term = AlgExpr::from_rational(c.clone());
            for (j, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&axes.a_expr(j).pow(e as u32));
                } else if e < 0 {
                    term = term.mul(&axes.inv_expr(j).pow((-e) as u32));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Value at rational axes.
    pub fn eval_rational(&self, a: &[Rational]) -> Rational {
        self.0
            .iter()
            .map(|(exps, c)| {
                exps.iter().zip(a).fold(c.clone(), |acc, (&e, x)| {
                    if e >= 0 {
                        acc * num_traits::pow(x.clone(), e as usize)
                    } else {
                        acc / num_traits::pow(x.clone(), (-e) as usize)
                    }
                })
            })
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolyKind {
    Cross,
    SimplexAverage,
}

/// `sum_k coeffs[k] t^k` with each coefficient a Laurent polynomial in the
/// axes, plus its exact value at those axes.
#[derive(Clone, Debug)]
pub struct MainTermPolynomial {
    pub kind: PolyKind,
    pub axes: AxisLengths,
    pub symbolic: Vec<Symbolic>,
    pub numeric: Vec<AlgExpr>,
}

/// Exact value together with an enclosure.
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: AlgExpr,
    pub enclosure: Interval,
}

impl Certified {
    pub fn mid(&self) -> f64 {
        self.enclosure.mid_f64()
    }

    pub fn width(&self) -> f64 {
        self.enclosure.hi_f64() - self.enclosure.lo_f64()
    }
}

/// Ordered tuples of even parts `>= 2` summing to `n`, with exactly `len`
/// parts.
fn even_compositions(n: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut first = 2;
    while first + 2 * (len - 1) <= n {
        for mut rest in even_compositions(n - first, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
        first += 2;
    }
    out
}

fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if items.len() < size {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets_of_size(&items[1..], size - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    with.extend(subsets_of_size(&items[1..], size));
    with
}

/// Coefficients of `p` in the variables indexed by `idx`, written with
/// exponent vectors of length `full_d`.
fn p_symbolic(full_d: usize, idx: &[usize]) -> Vec<Symbolic> {
    let d = idx.len();
    let mut base = vec![0i32; full_d];
    for &j in idx {
        base[j] = 1;
    }
    let mut coeffs = vec![Symbolic::default(); d + 1];
    if d == 0 {
        coeffs[0] = Symbolic::monomial(base, Rational::one());
        return coeffs;
    }
    coeffs[d] = Symbolic::monomial(base.clone(), Rational::new(BigInt::one() << d, factorial(d)));
    let zetas: Vec<Rational> = (0..=d).map(|n| if n >= 2 && n % 2 == 0 { zeta_even(n).ratio } else { Rational::zero() }).collect();
    for k in (0..d).rev() {
        let n = d - k;
        if n % 2 == 1 {
            continue;
        }
        // 2^d / ((2 pi i)^n k!) after the pi powers cancel against the zetas
        let sign = if (n / 2).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        let pre = sign * Rational::new(BigInt::one() << d, (BigInt::one() << n) * factorial(k));
        for l in 1..=n / 2 {
            let comps = even_compositions(n, l);
            for js in subsets_of_size(idx, l) {
                for parts in &comps {
                    let mut exps = base.clone();
                    let mut c = pre.clone();
                    for (&j, &i) in js.iter().zip(parts) {
                        exps[j] -= i as i32;
                        c *= Rational::from_integer((-2).into()) * &zetas[i];
                    }
                    coeffs[k].add_term(exps, c);
                }
            }
        }
    }
    coeffs
}

impl MainTermPolynomial {
    fn from_symbolic(kind: PolyKind, axes: &AxisLengths, symbolic: Vec<Symbolic>) -> Self {
        let numeric = symbolic.iter().map(|s| s.eval(axes)).collect();
        MainTermPolynomial { kind, axes: axes.clone(), symbolic, numeric }
    }

    pub fn dim(&self) -> usize {
        self.axes.dim()
    }

    pub fn degree(&self) -> usize {
        self.symbolic.len() - 1
    }

    /// Exact value at `t`.
    pub fn value(&self, t: &AlgExpr) -> AlgExpr {
        let mut acc = AlgExpr::zero();
        for c in self.numeric.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    /// Horner evaluation returning the exact value and an enclosure of
    /// relative width `2^(1-bits)`.
    pub fn evaluate(&self, t: &AlgebraicScalar, bits: u32) -> Result<Certified> {
        let value = self.value(&t.to_expr());
        let enclosure = value.interval(bits)?;
        Ok(Certified { value, enclosure })
    }

    /// Fast f64 evaluation, for plotting-grade work only.
    pub fn evaluate_f64(&self, t: f64) -> f64 {
        self.numeric.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64())
    }
}

pub fn build_p(axes: &AxisLengths) -> MainTermPolynomial {
    let idx: Vec<usize> = (0..axes.dim()).collect();
    MainTermPolynomial::from_symbolic(PolyKind::Cross, axes, p_symbolic(axes.dim(), &idx))
}

pub fn build_q(axes: &AxisLengths) -> MainTermPolynomial {
    let d = axes.dim();
    let mut coeffs = vec![Symbolic::default(); d + 1];
    for mask in 0u32..(1 << d) {
        let idx: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
        for (k, c) in p_symbolic(d, &idx).into_iter().enumerate() {
            coeffs[k].add(&c);
        }
    }
    let inv = Rational::new(BigInt::one(), BigInt::one() << d);
    for c in coeffs.iter_mut() {
        c.scale(&inv);
    }
    MainTermPolynomial::from_symbolic(PolyKind::SimplexAverage, axes, coeffs)
}

/// Published closed forms for the leading lower coefficients.
pub mod closed_forms {
    use super::*;

    fn ones(d: usize) -> Vec<i32> {
        vec![1; d]
    }

    fn fact_q(n: usize) -> Rational {
        Rational::from_integer(factorial(n))
    }

    /// `c_{d-2}`, needs `d >= 2`.
    pub fn c_d_minus_2(d: usize) -> Symbolic {
        let pre = Rational::from_integer(BigInt::one() << (d - 2)) / (Rational::from_integer(3.into()) * fact_q(d - 2));
        let mut s = Symbolic::default();
        for i in 0..d {
            let mut e = ones(d);
            e[i] -= 2;
            s.add_term(e, pre.clone());
        }
        s
    }

    /// `c_{d-4}`, needs `d >= 4`.
    pub fn c_d_minus_4(d: usize) -> Symbolic {
        let pre = Rational::from_integer(BigInt::one() << (d - 4)) / (Rational::from_integer(9.into()) * fact_q(d - 4));
        let mut s = Symbolic::default();
        for i in 0..d {
            for j in i + 1..d {
                let mut e = ones(d);
                e[i] -= 2;
                e[j] -= 2;
                s.add_term(e, pre.clone());
            }
            let mut e = ones(d);
            e[i] -= 4;
            s.add_term(e, -&pre / Rational::from_integer(5.into()));
        }
        s
    }

    pub fn e_d(d: usize) -> Symbolic {
        Symbolic::monomial(ones(d), Rational::one() / fact_q(d))
    }

    pub fn e_d_minus_1(d: usize) -> Symbolic {
        let pre = Rational::one() / (Rational::from_integer(2.into()) * fact_q(d - 1));
        let mut s = Symbolic::default();
        for i in 0..d {
            let mut e = ones(d);
            e[i] -= 1;
            s.add_term(e, pre.clone());
        }
        s
    }

    /// Needs `d >= 2`.
    pub fn e_d_minus_2(d: usize) -> Symbolic {
        let pre = Rational::one() / (Rational::from_integer(4.into()) * fact_q(d - 2));
        let third = Rational::new(1.into(), 3.into());
        let mut s = Symbolic::default();
        for i in 0..d {
            let mut e = ones(d);
            e[i] -= 2;
            s.add_term(e, &pre * &third);
            for j in i + 1..d {
                let mut e = ones(d);
                e[i] -= 1;
                e[j] -= 1;
                s.add_term(e, pre.clone());
            }
        }
        s
    }

    /// Needs `d >= 3`.
    pub fn e_d_minus_3(d: usize) -> Symbolic {
        let pre = Rational::one() / (Rational::from_integer(8.into()) * fact_q(d - 3));
        let third = Rational::new(1.into(), 3.into());
        let mut s = Symbolic::default();
        for i in 0..d {
            for j in i + 1..d {
                for (di, dj) in [(1, 2), (2, 1)] {
                    let mut e = ones(d);
                    e[i] -= di;
                    e[j] -= dj;
                    s.add_term(e, &pre * &third);
                }
                for k in j + 1..d {
                    let mut e = ones(d);
                    e[i] -= 1;
                    e[j] -= 1;
                    e[k] -= 1;
                    s.add_term(e, pre.clone());
                }
            }
        }
        s
    }
}

/// Which of the published identities hold for dimension `d`; each entry is
/// `(name, holds)`.
pub fn identity_report(d: usize) -> Vec<(String, bool)> {
    use closed_forms::*;
    let idx: Vec<usize> = (0..d).collect();
    let p = p_symbolic(d, &idx);
    let mut q = vec![Symbolic::default(); d + 1];
    for mask in 0u32..(1 << d) {
        let sub: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
        for (k, c) in p_symbolic(d, &sub).into_iter().enumerate() {
            q[k].add(&c);
        }
    }
    let inv = Rational::new(BigInt::one(), BigInt::one() << d);
    q.iter_mut().for_each(|c| c.scale(&inv));
    let mut out = Vec::new();
    let parity = (0..=d).filter(|k| (d - k) % 2 == 1).all(|k| p[k].is_zero());
    out.push((format!("d={d} parity"), parity));
    let lead = p[d] == Symbolic::monomial(vec![1; d], Rational::new(BigInt::one() << d, factorial(d)));
    out.push((format!("d={d} c_d"), lead));
    if d >= 2 {
        out.push((format!("d={d} c_(d-2)"), p[d - 2] == c_d_minus_2(d)));
    }
    if d >= 4 {
        out.push((format!("d={d} c_(d-4)"), p[d - 4] == c_d_minus_4(d)));
    }
    out.push((format!("d={d} e_d"), q[d] == e_d(d)));
    out.push((format!("d={d} e_(d-1)"), q[d - 1] == e_d_minus_1(d)));
    if d >= 2 {
        out.push((format!("d={d} e_(d-2)"), q[d - 2] == e_d_minus_2(d)));
    }
    if d >= 3 {
        out.push((format!("d={d} e_(d-3)"), q[d - 3] == e_d_minus_3(d)));
    }
    out
}

/// Coefficients of `p` with every entry a plain `(exponents, value)` pair,
/// the exponent of `a_j` written as `1 - i_j`.
pub fn even_exponent_view(s: &Symbolic) -> Vec<(Vec<i32>, Rational)> {
    s.0.iter()
        .map(|(e, c)| (e.iter().map(|x| 1 - x).collect(), c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn axes(v: &[&str]) -> AxisLengths {
        AxisLengths::parse_list(v).unwrap()
    }

    #[test]
    fn bernoulli_and_zeta() {
        let b = bernoulli(8);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[8], rat(-1, 30));
        assert_eq!(zeta_even(2).ratio, rat(1, 6));
        assert_eq!(zeta_even(4).ratio, rat(1, 90));
        assert_eq!(zeta_even(8).ratio, rat(1, 9450));
    }

    #[test]
    fn small_polynomials() {
        let p = build_p(&axes(&["1"]));
        assert_eq!(p.numeric[0].as_rational(), Some(rat(0, 1)));
        assert_eq!(p.numeric[1].as_rational(), Some(rat(2, 1)));
        let v = p.evaluate(&"3.5".parse().unwrap(), 64).unwrap();
        assert_eq!(v.value.as_rational(), Some(rat(7, 1)));

        let p = build_p(&axes(&["1", "1"]));
        assert_eq!(p.numeric[0].as_rational(), Some(rat(2, 3)));
        assert_eq!(p.numeric[1].as_rational(), Some(rat(0, 1)));
        assert_eq!(p.numeric[2].as_rational(), Some(rat(2, 1)));

        let q = build_q(&axes(&["1", "1"]));
        assert_eq!(q.numeric[0].as_rational(), Some(rat(5, 12)));
        assert_eq!(q.numeric[1].as_rational(), Some(rat(1, 1)));
        assert_eq!(q.numeric[2].as_rational(), Some(rat(1, 2)));
    }

    #[test]
    fn q_in_two_dimensions_matches_expansion() {
        let (a1, a2) = (rat(3, 2), rat(5, 7));
        let q = build_q(&axes(&["3/2", "5/7"]));
        let a = [a1.clone(), a2.clone()];
        assert_eq!(q.symbolic[2].eval_rational(&a), &a1 * &a2 / rat(2, 1));
        assert_eq!(q.symbolic[1].eval_rational(&a), (&a1 + &a2) / rat(2, 1));
        assert_eq!(
            q.symbolic[0].eval_rational(&a),
            rat(1, 4) + (&a1 / &a2 + &a2 / &a1) / rat(12, 1)
        );
    }

    #[test]
    fn identities_through_dimension_eight() {
        for d in 1..=8 {
            for (name, ok) in identity_report(d) {
                assert!(ok, "{name}");
            }
        }
    }

    #[test]
    fn functional_equation() {
        let p = build_p(&axes(&["sqrt(2)", "3/2", "sqrt(5)"]));
        let t = AlgExpr::from_rational(rat(17, 3));
        assert!(p.value(&t).add(&p.value(&t.neg())).is_zero());
    }
}
