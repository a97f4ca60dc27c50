//! Fourier transforms of characteristic functions of dilated simplices.
//!
//! Three routes are offered: residues of the meromorphic representation
//! (with exact pole grouping), trapezoid quadrature on a circle enclosing all
//! poles, and direct quadrature over the simplex as an independent oracle.

mod contour;
mod oracle;

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

pub use contour::{contour_nodes_hint, ft_contour, ft_contour_with_radius};
pub use oracle::ft_direct_oracle;

use crate::error::{Error, Result};
use crate::polytope::{AxisLengths, GeneralSimplex};
use crate::scalar::{AlgExpr, AlgebraicScalar, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Residues,
    Contour,
    DirectOracle,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" => Ok(Method::ClosedForm),
            "residues" => Ok(Method::Residues),
            "contour" => Ok(Method::Contour),
            "direct-oracle" => Ok(Method::DirectOracle),
            _ => Err(Error::Parse(format!("unknown method '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierEvaluation {
    pub re: f64,
    pub im: f64,
    pub method: Method,
    pub error_bound: f64,
    pub frequency: Vec<f64>,
    pub dilation: f64,
}

impl FourierEvaluation {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn new(v: Complex64, method: Method, error_bound: f64, y: &[Rational], t: &AlgebraicScalar) -> Self {
        FourierEvaluation {
            re: v.re,
            im: v.im,
            method,
            error_bound,
            frequency: y.iter().map(crate::scalar::expr::rational_to_f64).collect(),
            dilation: t.to_f64(),
        }
    }
}

/// Set of equal poles: approximate location and multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleGroup {
    pub value: f64,
    pub multiplicity: usize,
    pub members: Vec<usize>,
}

/// The poles `<v_j, y>` of a simplex at a frequency, grouped by exact
/// equality.
#[derive(Clone, Debug)]
pub struct PoleConfiguration {
    pub poles: Vec<AlgExpr>,
    pub groups: Vec<PoleGroup>,
}

impl PoleConfiguration {
    pub fn new(s: &GeneralSimplex, y: &[Rational]) -> Result<Self> {
        if y.len() != s.dim() {
            return Err(Error::InvalidInput(format!("frequency has {} coordinates, expected {}", y.len(), s.dim())));
        }
        let poles: Vec<AlgExpr> = s
            .vertices()
            .iter()
            .map(|v| {
                v.iter().zip(y).fold(AlgExpr::zero(), |acc, (vi, yi)| acc.add(&vi.to_expr().scale(yi)))
            })
            .collect();
        let mut groups: Vec<PoleGroup> = Vec::new();
        for (j, p) in poles.iter().enumerate() {
            let mut placed = false;
            for g in groups.iter_mut() {
                if poles[g.members[0]].cmp_expr(p)? == Ordering::Equal {
                    g.multiplicity += 1;
                    g.members.push(j);
                    placed = true;
                    break;
                }
            }
            if !placed {
                groups.push(PoleGroup { value: p.to_f64(), multiplicity: 1, members: vec![j] });
            }
        }
        Ok(PoleConfiguration { poles, groups })
    }

    pub fn all_distinct(&self) -> bool {
        self.groups.iter().all(|g| g.multiplicity == 1)
    }

    pub fn max_abs(&self) -> f64 {
        self.groups.iter().map(|g| g.value.abs()).fold(0.0, f64::max)
    }
}

/// Highest pole order handled by the fixed-size series buffers.
const MAX_ORDER: usize = 24;

type Series = [Complex64; MAX_ORDER];
type SeriesAbs = [f64; MAX_ORDER];

/// Truncated power series product in place, keeping coefficients up to `order`.
fn series_mul(a: &mut Series, b: &Series, order: usize) {
    for k in (0..=order).rev() {
        let mut acc = Complex64::zero();
        for i in 0..=k {
            acc += a[i] * b[k - i];
        }
        a[k] = acc;
    }
}

fn series_mul_abs(a: &mut SeriesAbs, b: &SeriesAbs, order: usize) {
    for k in (0..=order).rev() {
        let mut acc = 0.0;
        for i in 0..=k {
            acc += a[i] * b[k - i];
        }
        a[k] = acc;
    }
}

/// Sum of residues of `e^{-2 pi i z t} / prod (z - p)^mult` over all pole
/// groups, plus a magnitude scale of the terms for rounding bounds.
pub(crate) fn residue_sum(groups: &[(f64, usize)], t: f64) -> (Complex64, f64) {
    let mut total = Complex64::zero();
    let mut mag = 0.0;
    let c = Complex64::new(0.0, -2.0 * PI * t);
    for (s, &(q, mu)) in groups.iter().enumerate() {
        let base = (c * q).exp();
        if mu == 1 {
            // simple pole: the residue is a plain quotient
            let mut den = 1.0;
            for (r, &(qr, mr)) in groups.iter().enumerate() {
                if r != s {
                    den *= (q - qr).powi(mr as i32);
                }
            }
            total += base / den;
            mag += 1.0 / den.abs();
            continue;
        }
        let order = mu - 1;
        assert!(order < MAX_ORDER, "pole order {mu} too high");
        // e^{-2 pi i t (q + w)} expanded in w
        let mut ser = [Complex64::zero(); MAX_ORDER];
        let mut ser_abs = [0.0; MAX_ORDER];
        let mut term = base;
        let mut term_abs = 1.0;
        for k in 0..=order {
            ser[k] = term;
            ser_abs[k] = term_abs;
            term = term * c / (k + 1) as f64;
            term_abs *= 2.0 * PI * t.abs() / (k + 1) as f64;
        }
        for (r, &(qr, mr)) in groups.iter().enumerate() {
            if r == s {
                continue;
            }
            // (w + delta)^{-m} = delta^{-m} sum_n C(m+n-1, n) (-w/delta)^n
            let delta = q - qr;
            let inv = 1.0 / delta;
            let mut f = [Complex64::zero(); MAX_ORDER];
            let mut f_abs = [0.0; MAX_ORDER];
            let mut coef = inv.powi(mr as i32);
            for n in 0..=order {
                f[n] = Complex64::new(coef, 0.0);
                f_abs[n] = coef.abs();
                coef *= -inv * (mr + n) as f64 / (n + 1) as f64;
            }
            series_mul(&mut ser, &f, order);
            series_mul_abs(&mut ser_abs, &f_abs, order);
        }
        total += ser[order];
        mag += ser_abs[order];
    }
    (total, mag)
}

/// `(-1)^d d! / (2 pi i)^d`, the factor in front of the residue sum once
/// the contour integral is replaced by `2 pi i` times residues.
fn residue_prefactor(d: usize) -> Complex64 {
    let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    sign * fact / Complex64::new(0.0, 2.0 * PI).powi(d as i32)
}

fn rounding_bound(mag: f64, scale: f64, d: usize, t: f64, pmax: f64, min_gap: f64) -> f64 {
    let cond = 16.0 * (d + 2) as f64 + 2.0 * PI * t.abs() * pmax + if min_gap > 0.0 { pmax / min_gap } else { 0.0 };
    scale * mag * f64::EPSILON * cond + f64::MIN_POSITIVE
}

fn min_gap(groups: &[(f64, usize)]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            g = g.min((groups[i].0 - groups[j].0).abs());
        }
    }
    if g.is_finite() {
        g
    } else {
        0.0
    }
}

/// Residue evaluation for any frequency; coinciding poles are merged exactly
/// and handled as higher-order poles.
pub fn ft_residues(s: &GeneralSimplex, y: &[Rational], t: &AlgebraicScalar) -> Result<FourierEvaluation> {
    let cfg = PoleConfiguration::new(s, y)?;
    let d = s.dim();
    let lambda = s.volume()?.to_f64();
    let tf = t.to_f64();
    let groups: Vec<(f64, usize)> = cfg.groups.iter().map(|g| (g.value, g.multiplicity)).collect();
    if groups.len() == 1 {
        // every pole coincides at some q: the transform is lambda t^d e^{-2 pi i q t}
        let v = Complex64::new(0.0, -2.0 * PI * groups[0].0 * tf).exp() * lambda * tf.powi(d as i32);
        let err = v.norm() * f64::EPSILON * (8.0 + 2.0 * PI * (groups[0].0 * tf).abs());
        return Ok(FourierEvaluation::new(v, Method::Residues, err, y, t));
    }
    let (sum, mag) = residue_sum(&groups, tf);
    let pre = residue_prefactor(d) * lambda;
    let v = pre * sum;
    let err = rounding_bound(mag, pre.norm(), d, tf, cfg.max_abs(), min_gap(&groups));
    Ok(FourierEvaluation::new(v, Method::Residues, err, y, t))
}

/// Closed form for the standard simplex `conv(0, e_1, ..., e_d)`; needs all
/// `y_j` nonzero and pairwise distinct.
pub fn ft_standard_simplex(y: &[Rational], t: &AlgebraicScalar) -> Result<FourierEvaluation> {
    for (j, yj) in y.iter().enumerate() {
        if yj.is_zero() {
            return Err(Error::PoleCollision(format!("y_{} = 0", j + 1)));
        }
        for (k, yk) in y.iter().enumerate().skip(j + 1) {
            if yj == yk {
                return Err(Error::PoleCollision(format!("y_{} = y_{}", j + 1, k + 1)));
            }
        }
    }
    let yf: Vec<f64> = y.iter().map(crate::scalar::expr::rational_to_f64).collect();
    let (v, err) = standard_closed_form(&yf, t.to_f64());
    Ok(FourierEvaluation::new(v, Method::ClosedForm, err, y, t))
}

fn standard_closed_form(y: &[f64], t: f64) -> (Complex64, f64) {
    let d = y.len();
    let mut sum = Complex64::zero();
    let mut mag = 0.0;
    for j in 0..d {
        let mut den = y[j];
        for k in 0..d {
            if k != j {
                den *= y[j] - y[k];
            }
        }
        let num = Complex64::new(1.0, 0.0) - Complex64::new(0.0, -2.0 * PI * y[j] * t).exp();
        sum += num / den;
        mag += 2.0 / den.abs();
    }
    let sign = if d % 2 == 1 { 1.0 } else { -1.0 };
    let pre = sign / Complex64::new(0.0, 2.0 * PI).powi(d as i32);
    let pmax = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut groups: Vec<(f64, usize)> = y.iter().map(|v| (*v, 1)).collect();
    groups.push((0.0, 1));
    let err = rounding_bound(mag, pre.norm(), d, t, pmax, min_gap(&groups));
    (pre * sum, err)
}

/// Closed form for an arbitrary simplex through the affine map onto the
/// standard simplex; needs pairwise distinct poles.
pub fn ft_closed_form(s: &GeneralSimplex, y: &[Rational], t: &AlgebraicScalar) -> Result<FourierEvaluation> {
    let cfg = PoleConfiguration::new(s, y)?;
    if !cfg.all_distinct() {
        return Err(Error::PoleCollision("poles coincide; use residues or contour".into()));
    }
    let d = s.dim();
    let tf = t.to_f64();
    let last = cfg.poles[d].clone();
    // the shifted poles <v_j - v_{d+1}, y> are exact, so rounding happens once
    let w: Vec<f64> = cfg.poles[..d].iter().map(|p| p.sub(&last).to_f64()).collect();
    let (inner, err) = standard_closed_form(&w, tf);
    let lambda = s.volume()?.to_f64();
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    let phase = Complex64::new(0.0, -2.0 * PI * last.to_f64() * tf).exp();
    let scale = fact * lambda;
    let v = phase * inner * scale;
    let err = err * scale + v.norm() * f64::EPSILON * (4.0 + 2.0 * PI * (last.to_f64() * tf).abs());
    Ok(FourierEvaluation::new(v, Method::ClosedForm, err, y, t))
}

/// Fast transform of the corner simplex `conv(0, a_1 e_1, ..., a_d e_d)` at
/// integer frequencies, used for Cesàro sums. Pole coincidences are decided
/// from the integer frequency and the exact axis ratios, never by tolerance.
#[derive(Clone, Debug)]
pub struct CornerKernel {
    a: Vec<f64>,
    /// `ratio[j][k] = a_j / a_k` when rational.
    ratio: Vec<Vec<Option<Rational>>>,
    prefactor: Complex64,
    volume: f64,
}

impl CornerKernel {
    pub fn new(axes: &AxisLengths) -> Self {
        let d = axes.dim();
        assert!(d < MAX_ORDER, "dimension {d} too high for the kernel");
        let ratio = (0..d)
            .map(|j| (0..d).map(|k| axes.a_expr(j).mul(&axes.inv_expr(k)).as_rational()).collect())
            .collect();
        let volume = axes.product_expr().to_f64() / (1..=d).map(|k| k as f64).product::<f64>();
        CornerKernel { a: axes.to_f64(), ratio, prefactor: residue_prefactor(d) * volume, volume }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn has_rational_ratio(&self) -> bool {
        let d = self.dim();
        (0..d).any(|j| (0..d).any(|k| j != k && self.ratio[j][k].is_some()))
    }

    /// Transform of `t S` at the lattice point `m`.
    pub fn eval(&self, m: &[i64], t: f64) -> Complex64 {
        let d = self.dim();
        let mut groups = [(0.0, 0usize); MAX_ORDER];
        let mut rep = [0usize; MAX_ORDER];
        let mut ng = 0;
        let mut zero_mult = 1;
        for j in 0..d {
            if m[j] == 0 {
                zero_mult += 1;
                continue;
            }
            let mut merged = false;
            for gi in 0..ng {
                let k = rep[gi];
                // m_j a_j = m_k a_k  iff  m_j (a_j / a_k) = m_k
                if let Some(r) = &self.ratio[j][k] {
                    if r * Rational::from_integer(m[j].into()) == Rational::from_integer(m[k].into()) {
                        groups[gi].1 += 1;
                        merged = true;
                        break;
                    }
                }
            }
            if !merged {
                rep[ng] = j;
                groups[ng] = (m[j] as f64 * self.a[j], 1);
                ng += 1;
            }
        }
        if zero_mult == d + 1 {
            return Complex64::new(self.volume * t.powi(d as i32), 0.0);
        }
        groups[ng] = (0.0, zero_mult);
        self.prefactor * residue_sum(&groups[..=ng], t).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn std_simplex(d: usize) -> GeneralSimplex {
        let mut v = Vec::new();
        for i in 0..d {
            let mut p = vec![rat(0, 1); d];
            p[i] = rat(1, 1);
            v.push(p);
        }
        v.push(vec![rat(0, 1); d]);
        GeneralSimplex::from_rational(&v).unwrap()
    }

    fn one() -> AlgebraicScalar {
        AlgebraicScalar::from_int(1)
    }

    #[test]
    fn one_dimensional_closed_form() {
        let y = [rat(1, 2)];
        let v = ft_standard_simplex(&y, &one()).unwrap().value();
        // 2 / (pi i)
        let expect = Complex64::new(0.0, -2.0 / PI);
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn residues_match_closed_form() {
        let s = std_simplex(2);
        let y = [rat(1, 1), rat(2, 1)];
        let a = ft_residues(&s, &y, &one()).unwrap();
        let b = ft_standard_simplex(&y, &one()).unwrap();
        assert!((a.value() - b.value()).norm() < 1e-12);
        let c = ft_closed_form(&s, &y, &one()).unwrap();
        assert!((c.value() - b.value()).norm() < 1e-12);
    }

    #[test]
    fn origin_gives_volume() {
        let s = std_simplex(3);
        let t: AlgebraicScalar = "3/2".parse().unwrap();
        let v = ft_residues(&s, &[rat(0, 1), rat(0, 1), rat(0, 1)], &t).unwrap();
        assert!((v.re - 3.375 / 6.0).abs() < 1e-14 && v.im.abs() < 1e-14);
    }

    #[test]
    fn coinciding_poles_are_continuous() {
        // y = (1, 1) against y = (1, 1 + h): the residue value is the limit
        let s = std_simplex(2);
        let t: AlgebraicScalar = "0.7".parse().unwrap();
        let v = ft_residues(&s, &[rat(1, 1), rat(1, 1)], &t).unwrap().value();
        let w = ft_residues(&s, &[rat(1, 1), rat(1_000_001, 1_000_000)], &t).unwrap().value();
        assert!((v - w).norm() < 1e-5);
    }

    #[test]
    fn corner_kernel_matches_general_residues() {
        let axes = AxisLengths::parse_list(&["sqrt(2)", "3/2"]).unwrap();
        let k = CornerKernel::new(&axes);
        let g = crate::polytope::CornerSimplex::standard(axes).to_general();
        let t: AlgebraicScalar = "2.5".parse().unwrap();
        for m in [[0i64, 0], [1, 0], [0, -3], [2, 5], [-4, 1]] {
            let y: Vec<Rational> = m.iter().map(|&x| rat(x, 1)).collect();
            let a = k.eval(&m, 2.5);
            let b = ft_residues(&g, &y, &t).unwrap().value();
            assert!((a - b).norm() < 1e-12, "{m:?}: {a} vs {b}");
        }
    }

    fn skew_triangle() -> GeneralSimplex {
        GeneralSimplex::from_rational(&[
            vec![rat(1, 2), rat(-1, 3)],
            vec![rat(2, 1), rat(1, 4)],
            vec![rat(-1, 5), rat(3, 2)],
        ])
        .unwrap()
    }

    #[test]
    fn contour_agrees_with_residues() {
        let s = skew_triangle();
        let t: AlgebraicScalar = "1.7".parse().unwrap();
        let y = [rat(3, 4), rat(-5, 4)];
        let r = ft_residues(&s, &y, &t).unwrap().value();
        let c = ft_contour(&s, &y, &t, 64, 1e-13).unwrap().value();
        assert!((r - c).norm() < 1e-11, "{r} vs {c}");
    }

    #[test]
    fn contour_radius_does_not_matter() {
        let s = skew_triangle();
        let t: AlgebraicScalar = "2.2".parse().unwrap();
        let y = [rat(1, 1), rat(1, 1)];
        let r0 = 2.0 * PoleConfiguration::new(&s, &y).unwrap().max_abs().max(1.0);
        let a = ft_contour_with_radius(&s, &y, &t, 64, 1e-13, Some(r0)).unwrap().value();
        let b = ft_contour_with_radius(&s, &y, &t, 64, 1e-13, Some(1.5 * r0)).unwrap().value();
        assert!((a - b).norm() < 1e-11);
    }

    #[test]
    fn oracle_agrees_in_three_dimensions() {
        let s = GeneralSimplex::from_rational(&[
            vec![rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 2), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 3)],
            vec![rat(1, 4), rat(0, 1), rat(1, 1)],
        ])
        .unwrap();
        let t: AlgebraicScalar = "1.3".parse().unwrap();
        let y = [rat(1, 2), rat(-1, 1), rat(2, 3)];
        let r = ft_residues(&s, &y, &t).unwrap().value();
        let o = ft_direct_oracle(&s, &y, &t, 1e-11).unwrap().value();
        assert!((r - o).norm() < 1e-10, "{r} vs {o}");
    }
}
