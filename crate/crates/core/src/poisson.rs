//! Cesàro means of the formal Poisson series of a cross-polytope, the simple
//! pole error series and the sums of residues at the origin.
//!
//! Averaging rectangular partial sums over `M in [0, N-1]^d` gives every
//! frequency `m` the weight `prod (N - |m_k|) / N`, so all sums here run once
//! over the open box `(-N, N)^d`. The literal double sums are kept for small
//! `N` as a check on that identity.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::CornerKernel;
use crate::numeric::Neumaier;
use crate::polytope::{AxisLengths, CrossPolytope};
use crate::scalar::{AlgebraicScalar, Rational};

/// Largest `N` accepted by the literal double-sum evaluators.
pub const LITERAL_MAX_N: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FejerWeight {
    n: u64,
}

impl FejerWeight {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("N must exceed 1, got {n}")));
        }
        Ok(FejerWeight { n })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn weight(&self, m: &[i64]) -> f64 {
        let n = self.n as f64;
        m.iter().map(|&x| (1.0 - x.unsigned_abs() as f64 / n).max(0.0)).product()
    }

    pub fn weight_exact(&self, m: &[i64]) -> Rational {
        let n = self.n as i64;
        m.iter()
            .map(|&x| Rational::new((n - x.abs()).max(0).into(), n.into()))
            .product()
    }
}

/// A Fejér-weighted sum at one `(t, N)`. The series are real in exact
/// arithmetic; `imag_residual` is what rounding left in the imaginary part.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesValue {
    pub n: u64,
    pub t: f64,
    pub value: f64,
    pub imag_residual: f64,
    pub terms_used: u64,
}

pub type ErrorSeriesValue = SeriesValue;

fn for_each_in_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64]) -> Result<()>) -> Result<()> {
    let d = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Ok(());
    }
    let mut m = lo.to_vec();
    loop {
        f(&m)?;
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if m[i] < hi[i] {
                m[i] += 1;
                break;
            }
            m[i] = lo[i];
        }
    }
}

#[derive(Clone, Copy, Default)]
struct CSum {
    re: Neumaier,
    im: Neumaier,
    count: u64,
}

impl CSum {
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.count += 1;
    }

    fn merge(&mut self, o: &CSum) {
        self.re.merge(&o.re);
        self.im.merge(&o.im);
        self.count += o.count;
    }
}

/// Sums `f(m)` over `(-n, n)^d` in rows of the first coordinate. Rows run in
/// parallel and are merged in index order, so the result does not depend on
/// scheduling. `f` returns `None` for skipped frequencies.
fn open_box_sum<F>(d: usize, n: u64, f: F) -> Result<CSum>
where
    F: Fn(&[i64]) -> Result<Option<Complex64>> + Sync,
{
    let n = n as i64;
    let rows: Vec<Result<CSum>> = (-(n - 1)..n)
        .into_par_iter()
        .map(|m0| {
            let mut acc = CSum::default();
            let mut lo = vec![-(n - 1); d];
            let mut hi = vec![n - 1; d];
            lo[0] = m0;
            hi[0] = m0;
            for_each_in_box(&lo, &hi, |m| {
                if let Some(z) = f(m)? {
                    acc.add(z);
                }
                Ok(())
            })?;
            Ok(acc)
        })
        .collect();
    let mut total = CSum::default();
    for r in rows {
        total.merge(&r?);
    }
    Ok(total)
}

fn series_value(n: u64, t: f64, s: CSum) -> SeriesValue {
    SeriesValue { n, t, value: s.re.value(), imag_residual: s.im.value().abs(), terms_used: s.count }
}

fn pow2(d: usize) -> f64 {
    (1u64 << d) as f64
}

/// `Ces(tC, N)`, through the corner simplex: the sign orthants contribute
/// equally after summing over the symmetric box.
pub fn cesaro_mean(p: &CrossPolytope, t: &AlgebraicScalar, n: u64) -> Result<SeriesValue> {
    let w = FejerWeight::new(n)?;
    let d = p.axes.dim();
    let kernel = CornerKernel::new(&p.axes);
    let tf = t.to_f64();
    let s = open_box_sum(d, n, |m| Ok(Some(kernel.eval(m, tf) * (pow2(d) * w.weight(m)))))?;
    Ok(series_value(n, tf, s))
}

/// Exact zero tests for `m_j a_j / a_k - m_k`, plus the ratios in floating
/// point.
struct Ratios {
    exact: Vec<Vec<Option<Rational>>>,
    approx: Vec<Vec<f64>>,
    a: Vec<f64>,
}

impl Ratios {
    fn new(axes: &AxisLengths) -> Self {
        let d = axes.dim();
        let mut exact = vec![vec![None; d]; d];
        let mut approx = vec![vec![1.0; d]; d];
        for j in 0..d {
            for k in 0..d {
                let r = axes.a_expr(j).mul(&axes.inv_expr(k));
                approx[j][k] = r.to_f64();
                exact[j][k] = r.as_rational();
            }
        }
        Ratios { exact, approx, a: axes.to_f64() }
    }

    /// The simple-pole term for index `j` at `m`, without the `i^d / pi^d`
    /// prefactor.
    fn term(&self, m: &[i64], j: usize, t: f64) -> Result<Complex64> {
        let mut den = m[j] as f64;
        for k in 0..m.len() {
            if k == j {
                continue;
            }
            if let Some(r) = &self.exact[j][k] {
                if r * Rational::from_integer(m[j].into()) == Rational::from_integer(m[k].into()) {
                    return Err(Error::DenominatorZero { m: m.to_vec(), j, k });
                }
            }
            den *= m[j] as f64 * self.approx[j][k] - m[k] as f64;
        }
        Ok(Complex64::new(0.0, -2.0 * PI * m[j] as f64 * self.a[j] * t).exp() / den)
    }
}

fn error_prefactor(d: usize) -> Complex64 {
    Complex64::new(0.0, 1.0).powi(d as i32) / PI.powi(d as i32)
}

/// `E_N(t)`: the residues at the simple poles `z = m_j a_j`, Fejér-weighted.
pub fn error_series(axes: &AxisLengths, t: &AlgebraicScalar, n: u64) -> Result<ErrorSeriesValue> {
    let w = FejerWeight::new(n)?;
    let d = axes.dim();
    let r = Ratios::new(axes);
    let tf = t.to_f64();
    let pre = error_prefactor(d);
    let s = open_box_sum(d, n, |m| {
        let mut z = Complex64::zero();
        let mut any = false;
        for j in 0..d {
            if m[j] != 0 {
                z += r.term(m, j, tf)?;
                any = true;
            }
        }
        Ok(any.then(|| z * pre * w.weight(m)))
    })?;
    Ok(series_value(n, tf, s))
}

/// Residue at `z = 0` of the cross-polytope integrand at frequency `m`,
/// including the constant `(-1)^d 2^d prod a / (2 pi i)^d`.
fn origin_residue(a: &[f64], m: &[i64], t: f64, pre: Complex64) -> Complex64 {
    let d = a.len();
    let c = Complex64::new(0.0, -2.0 * PI * t);
    let mut ser = Vec::with_capacity(d + 1);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..=d {
        ser.push(term);
        term = term * c / (k + 1) as f64;
    }
    for (j, &mj) in m.iter().enumerate() {
        if mj == 0 {
            continue;
        }
        // z / (z - p) = -sum_{i >= 1} (z / p)^i
        let inv = 1.0 / (mj as f64 * a[j]);
        let mut out = vec![Complex64::zero(); d + 1];
        for (s, x) in ser.iter().enumerate() {
            let mut f = -inv;
            for slot in out.iter_mut().skip(s + 1) {
                *slot += x * f;
                f *= inv;
            }
        }
        ser = out;
    }
    pre * ser[d]
}

fn origin_prefactor(a: &[f64]) -> Complex64 {
    let d = a.len();
    let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * pow2(d) * a.iter().product::<f64>() / Complex64::new(0.0, 2.0 * PI).powi(d as i32)
}

/// `B_M`: origin residues summed over the box `[-M_1, M_1] x ... x [-M_d, M_d]`.
pub fn residue_origin_sum(axes: &AxisLengths, t: &AlgebraicScalar, bounds: &[u64]) -> Result<f64> {
    if bounds.len() != axes.dim() {
        return Err(Error::InvalidInput("box bounds and axes differ in length".into()));
    }
    let a = axes.to_f64();
    let pre = origin_prefactor(&a);
    let tf = t.to_f64();
    let hi: Vec<i64> = bounds.iter().map(|&b| b as i64).collect();
    let lo: Vec<i64> = hi.iter().map(|b| -b).collect();
    let mut acc = CSum::default();
    for_each_in_box(&lo, &hi, |m| {
        acc.add(origin_residue(&a, m, tf, pre));
        Ok(())
    })?;
    Ok(acc.re.value())
}

/// `N^{-d} sum_M B_M` over `M in [0, N-1]^d`.
pub fn residue_origin_average(axes: &AxisLengths, t: &AlgebraicScalar, n: u64) -> Result<SeriesValue> {
    let w = FejerWeight::new(n)?;
    let a = axes.to_f64();
    let pre = origin_prefactor(&a);
    let tf = t.to_f64();
    let s = open_box_sum(a.len(), n, |m| Ok(Some(origin_residue(&a, m, tf, pre) * w.weight(m))))?;
    Ok(series_value(n, tf, s))
}

/// Weight of each frequency in the literal average of rectangular partial
/// sums, obtained by enumerating every `M` and every `m` in its box.
pub fn literal_weights(d: usize, n: u64) -> Result<BTreeMap<Vec<i64>, Rational>> {
    check_literal(n)?;
    let mut counts: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    let zero = vec![0i64; d];
    let top = vec![n as i64 - 1; d];
    for_each_in_box(&zero, &top, |big_m| {
        let lo: Vec<i64> = big_m.iter().map(|x| -x).collect();
        for_each_in_box(&lo, big_m, |m| {
            *counts.entry(m.to_vec()).or_insert(0) += 1;
            Ok(())
        })
    })?;
    let nd = Rational::from_integer((n as i64).pow(d as u32).into());
    Ok(counts.into_iter().map(|(m, c)| (m, Rational::from_integer(c.into()) / &nd)).collect())
}

/// The same map from the product formula.
pub fn fejer_weights(d: usize, n: u64) -> Result<BTreeMap<Vec<i64>, Rational>> {
    let w = FejerWeight::new(n)?;
    let lim = n as i64 - 1;
    let mut out = BTreeMap::new();
    for_each_in_box(&vec![-lim; d], &vec![lim; d], |m| {
        out.insert(m.to_vec(), w.weight_exact(m));
        Ok(())
    })?;
    Ok(out)
}

fn check_literal(n: u64) -> Result<()> {
    if !(2..=LITERAL_MAX_N).contains(&n) {
        return Err(Error::InvalidInput(format!("literal double sums need 2 <= N <= {LITERAL_MAX_N}")));
    }
    Ok(())
}

fn literal_sum(d: usize, n: u64, f: impl Fn(&[i64]) -> Result<Complex64>) -> Result<Complex64> {
    check_literal(n)?;
    let mut acc = CSum::default();
    let zero = vec![0i64; d];
    let top = vec![n as i64 - 1; d];
    for_each_in_box(&zero, &top, |big_m| {
        let lo: Vec<i64> = big_m.iter().map(|x| -x).collect();
        let mut inner = CSum::default();
        for_each_in_box(&lo, big_m, |m| {
            inner.add(f(m)?);
            Ok(())
        })?;
        acc.merge(&inner);
        Ok(())
    })?;
    let nd = (n as f64).powi(d as i32);
    Ok(Complex64::new(acc.re.value(), acc.im.value()) / nd)
}

/// `Ces(tC, N)` straight from its definition as an average of rectangular
/// partial sums of transforms of `tC`.
pub fn literal_cesaro(p: &CrossPolytope, t: &AlgebraicScalar, n: u64) -> Result<f64> {
    let d = p.axes.dim();
    let kernel = CornerKernel::new(&p.axes);
    let tf = t.to_f64();
    let signs: Vec<Vec<i64>> = (0..1u32 << d)
        .map(|b| (0..d).map(|i| if b >> i & 1 == 1 { -1 } else { 1 }).collect())
        .collect();
    let v = literal_sum(d, n, |m| {
        // transform of tC at m as the sum over its corner simplices
        let mut z = Complex64::zero();
        for s in &signs {
            let ms: Vec<i64> = m.iter().zip(s).map(|(x, y)| x * y).collect();
            z += kernel.eval(&ms, tf);
        }
        Ok(z)
    })?;
    Ok(v.re)
}

/// `E_N(t)` straight from its definition.
pub fn literal_error_series(axes: &AxisLengths, t: &AlgebraicScalar, n: u64) -> Result<f64> {
    let d = axes.dim();
    let r = Ratios::new(axes);
    let tf = t.to_f64();
    let pre = error_prefactor(d);
    let v = literal_sum(d, n, |m| {
        let mut z = Complex64::zero();
        for j in 0..d {
            if m[j] != 0 {
                z += r.term(m, j, tf)?;
            }
        }
        Ok(z * pre)
    })?;
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mainterm::build_p;

    fn axes(v: &[&str]) -> AxisLengths {
        AxisLengths::parse_list(v).unwrap()
    }

    fn t(s: &str) -> AlgebraicScalar {
        s.parse().unwrap()
    }

    #[test]
    fn weights_collapse_exactly() {
        for d in 1..=3 {
            for n in 2..=4 {
                assert_eq!(literal_weights(d, n).unwrap(), fejer_weights(d, n).unwrap(), "d={d} N={n}");
            }
        }
    }

    #[test]
    fn collapsed_sums_match_literal() {
        let ax = axes(&["1/sqrt(2)", "1/sqrt(3)"]);
        let p = CrossPolytope::new(ax.clone());
        let tt = t("3.3");
        for n in 2..=4 {
            let a = cesaro_mean(&p, &tt, n).unwrap().value;
            let b = literal_cesaro(&p, &tt, n).unwrap();
            assert!((a - b).abs() < 1e-11 * a.abs().max(1.0), "{a} vs {b}");
            let e = error_series(&ax, &tt, n).unwrap().value;
            let f = literal_error_series(&ax, &tt, n).unwrap();
            assert!((e - f).abs() < 1e-11 * e.abs().max(1.0), "{e} vs {f}");
        }
    }

    #[test]
    fn one_dimensional_sawtooth() {
        let ax = axes(&["1"]);
        // a t in Z + 1/2: every sine vanishes
        let v = error_series(&ax, &t("2.5"), 50).unwrap();
        assert!(v.value.abs() < 1e-12);
        // elsewhere the Fejér means approach 1 - 2 {a t}
        let v = error_series(&ax, &t("2.3"), 2000).unwrap();
        assert!((v.value - (1.0 - 2.0 * 0.3)).abs() < 5e-3, "{}", v.value);
    }

    #[test]
    fn one_dimensional_origin_sum_is_linear() {
        let ax = axes(&["sqrt(2)"]);
        for m in [0, 1, 5] {
            let b = residue_origin_sum(&ax, &t("1.7"), &[m]).unwrap();
            assert!((b - 2.0 * 2f64.sqrt() * 1.7).abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_into_origin_and_simple_poles() {
        for v in [&["1/sqrt(2)", "1/sqrt(3)"][..], &["sqrt(2)", "1", "sqrt(3)"][..]] {
            let ax = axes(v);
            let p = CrossPolytope::new(ax.clone());
            let tt = t("2.7");
            for n in [2, 3, 5] {
                let c = cesaro_mean(&p, &tt, n).unwrap();
                let b = residue_origin_average(&ax, &tt, n).unwrap();
                let e = error_series(&ax, &tt, n).unwrap();
                assert!((c.value - b.value - e.value).abs() < 1e-9, "{} vs {} + {}", c.value, b.value, e.value);
            }
        }
    }

    #[test]
    fn series_are_real() {
        let ax = axes(&["1/sqrt(2)", "1/sqrt(3)"]);
        let p = CrossPolytope::new(ax.clone());
        let c = cesaro_mean(&p, &t("7"), 64).unwrap();
        let e = error_series(&ax, &t("7"), 64).unwrap();
        assert!(c.imag_residual < 1e-10 && e.imag_residual < 1e-10);
    }

    #[test]
    fn origin_term_and_one_dimensional_cesaro() {
        let ax = axes(&["1"]);
        let p = CrossPolytope::new(ax.clone());
        let c = cesaro_mean(&p, &t("2.5"), 64).unwrap().value;
        assert!((c - 5.0).abs() < 1.0);
        let b = residue_origin_sum(&axes(&["sqrt(2)", "sqrt(3)"]), &t("2"), &[0, 0]).unwrap();
        assert!((b - 4.0 * 6f64.sqrt() / 2.0 * 4.0).abs() < 1e-12);
    }

    #[test]
    fn origin_average_approaches_main_term() {
        let ax = axes(&["1/sqrt(2)", "1/sqrt(3)"]);
        let tt = t("4.1");
        let p = build_p(&ax).evaluate_f64(4.1);
        let b = residue_origin_average(&ax, &tt, 400).unwrap().value;
        assert!((b - p).abs() < 0.05, "{b} vs {p}");
    }

    #[test]
    fn rational_ratio_is_rejected() {
        let err = error_series(&axes(&["1", "2"]), &t("1.5"), 3).unwrap_err();
        assert!(matches!(err, Error::DenominatorZero { .. }));
    }
}
