//! Trapezoid quadrature of the contour representation on a circle.
//!
//! On `|z| = R` the factor `e^{-2 pi i z t}` reaches `e^{2 pi t R}` while the
//! integral is of order one, so the node sum is carried in multiprecision
//! floats with enough guard bits to absorb that cancellation.

use std::f64::consts::{E, LOG2_E, PI};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_complex::Complex64;

use super::{FourierEvaluation, Method, PoleConfiguration};
use crate::error::{Error, Result};
use crate::polytope::GeneralSimplex;
use crate::scalar::interval::ldexp;
use crate::scalar::{AlgebraicScalar, Rational};

const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let mut y = x.clone();
    if y.set_precision(64, RM).is_err() {
        return f64::NAN;
    }
    match y.as_raw_parts() {
        Some((m, _, s, e, _)) => {
            let top = *m.last().expect("nonempty mantissa");
            let v = ldexp(top as f64, e as i64 - 64);
            if s == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

#[derive(Clone)]
struct Cx {
    re: BigFloat,
    im: BigFloat,
}

impl Cx {
    fn zero(p: usize) -> Self {
        Cx { re: BigFloat::from_f64(0.0, p), im: BigFloat::from_f64(0.0, p) }
    }

    fn add(&self, o: &Cx, p: usize) -> Cx {
        Cx { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }

    fn mul(&self, o: &Cx, p: usize) -> Cx {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Cx { re, im }
    }

    fn div(&self, o: &Cx, p: usize) -> Cx {
        let n = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let conj = Cx { re: o.re.clone(), im: o.im.neg() };
        let q = self.mul(&conj, p);
        Cx { re: q.re.div(&n, p, RM), im: q.im.div(&n, p, RM) }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(bf_to_f64(&self.re), bf_to_f64(&self.im))
    }
}

/// Power-of-two node count at which the trapezoid rule is comfortably past
/// the oscillation of `e^{-2 pi i z t}` on a circle of radius `r`.
pub fn contour_nodes_hint(r: f64, t: f64) -> usize {
    let need = (E * 2.0 * PI * t.abs() * r).ceil() as usize + 32;
    need.next_power_of_two().max(16)
}

struct Integrand<'a> {
    poles: Vec<BigFloat>,
    r: f64,
    t2pi: BigFloat,
    prec: usize,
    cc: &'a mut Consts,
}

impl Integrand<'_> {
    /// `f(z) * i z` at `z = R e^{2 pi i k / n}`.
    fn node(&mut self, k: usize, n: usize) -> Cx {
        let p = self.prec;
        let pi = self.cc.pi(p, RM);
        let theta = pi
            .mul(&BigFloat::from_f64(2.0 * k as f64, p), p, RM)
            .div(&BigFloat::from_f64(n as f64, p), p, RM);
        let r = BigFloat::from_f64(self.r, p);
        let x = theta.cos(p, RM, self.cc).mul(&r, p, RM);
        let y = theta.sin(p, RM, self.cc).mul(&r, p, RM);
        // e^{-2 pi i t (x + i y)} = e^{2 pi t y} (cos(2 pi t x) - i sin(2 pi t x))
        let mag = self.t2pi.mul(&y, p, RM).exp(p, RM, self.cc);
        let ph = self.t2pi.mul(&x, p, RM);
        let num = Cx { re: ph.cos(p, RM, self.cc).mul(&mag, p, RM), im: ph.sin(p, RM, self.cc).mul(&mag, p, RM).neg() };
        let z = Cx { re: x, im: y };
        let mut den = Cx { re: BigFloat::from_f64(1.0, p), im: BigFloat::from_f64(0.0, p) };
        for q in &self.poles {
            den = den.mul(&Cx { re: z.re.sub(q, p, RM), im: z.im.clone() }, p);
        }
        let iz = Cx { re: z.im.neg(), im: z.re.clone() };
        num.div(&den, p).mul(&iz, p)
    }

    /// Sum over the nodes `k * step` for `k` odd (or all when `odd` is false)
    /// of an `n`-point rule.
    fn partial(&mut self, n: usize, odd: bool) -> Cx {
        let mut s = Cx::zero(self.prec);
        let (start, step) = if odd { (1, 2) } else { (0, 1) };
        let mut k = start;
        while k < n {
            let v = self.node(k, n);
            s = s.add(&v, self.prec);
            k += step;
        }
        s
    }
}

pub fn ft_contour(
    s: &GeneralSimplex,
    y: &[Rational],
    t: &AlgebraicScalar,
    nodes: usize,
    tol: f64,
) -> Result<FourierEvaluation> {
    ft_contour_with_radius(s, y, t, nodes, tol, None)
}

/// As [`ft_contour`], with an explicit radius; `None` picks
/// `2 max(1, max |<v_j, y>|)`.
pub fn ft_contour_with_radius(
    s: &GeneralSimplex,
    y: &[Rational],
    t: &AlgebraicScalar,
    nodes: usize,
    tol: f64,
    radius: Option<f64>,
) -> Result<FourierEvaluation> {
    if nodes < 16 {
        return Err(Error::InvalidInput(format!("need at least 16 nodes, got {nodes}")));
    }
    let cfg = PoleConfiguration::new(s, y)?;
    let d = s.dim();
    let pmax = cfg.max_abs();
    let r = radius.unwrap_or(2.0 * pmax.max(1.0));
    if r <= pmax * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!("radius {r} does not enclose every pole (max |pole| = {pmax})")));
    }
    let tf = t.to_f64();
    let growth_bits = (2.0 * PI * tf.abs() * r * LOG2_E).ceil() as usize;
    let prec = (64 + growth_bits + 32 + 8 * usize::BITS as usize).div_ceil(64) * 64;
    let mut cc = Consts::new().map_err(|e| Error::NotConverged(format!("multiprecision constants: {e:?}")))?;
    let t2pi = cc.pi(prec, RM).mul(&BigFloat::from_f64(2.0 * tf, prec), prec, RM);
    let poles = cfg.poles.iter().map(|p| BigFloat::from_f64(p.to_f64(), prec)).collect();
    let mut f = Integrand { poles, r, t2pi, prec, cc: &mut cc };

    let lambda = s.volume()?.to_f64();
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre = sign * fact * lambda / Complex64::new(0.0, 2.0 * PI).powi(d as i32 + 1);

    // fewer nodes than the oscillation count cannot converge, so the hint is a floor
    let mut n = nodes.max(contour_nodes_hint(r, tf));
    let mut sum = f.partial(n, false);
    let mut prev = pre * sum.to_c64() * (2.0 * PI / n as f64);
    for _ in 0..3 {
        let odd = f.partial(2 * n, true);
        sum = sum.add(&odd, prec);
        n *= 2;
        let cur = pre * sum.to_c64() * (2.0 * PI / n as f64);
        let diff = (cur - prev).norm();
        // pole locations are rounded to f64; the transform moves by about
        // |value| * (2 pi t + d / gap) per unit of pole displacement
        let pole_err = f64::EPSILON * pmax.max(1.0) * (2.0 * PI * tf.abs() + d as f64) * cur.norm().max(lambda * tf.abs().powi(d as i32));
        let err = diff + pole_err + 8.0 * f64::EPSILON * cur.norm();
        if diff <= tol {
            let mut ev = FourierEvaluation::new(cur, Method::Contour, err, y, t);
            ev.error_bound = err;
            return Ok(ev);
        }
        prev = cur;
    }
    Err(Error::NotConverged(format!("contour sum with {n} nodes still moves by more than {tol:e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigfloat_conversion() {
        for v in [1.0, -3.5, 0.75, 1e-20, 123456.789, -2.0f64.powi(70)] {
            assert_eq!(bf_to_f64(&BigFloat::from_f64(v, 128)), v);
        }
        let mut cc = Consts::new().unwrap();
        assert!((bf_to_f64(&cc.pi(256, RM)) - PI).abs() < 1e-15);
    }
}
