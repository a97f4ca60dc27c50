//! Direct quadrature of `int_{tS} e^{-2 pi i <x, y>} dx` in collapsed
//! coordinates, used to check the other methods.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use super::{FourierEvaluation, Method, PoleConfiguration};
use crate::error::{Error, Result};
use crate::polytope::GeneralSimplex;
use crate::scalar::{AlgebraicScalar, Rational};

/// Gauss-Legendre nodes and weights mapped to `[0, 1]`.
fn unit_rule(n: usize) -> Vec<(f64, f64)> {
    let g = GaussLegendre::new(NonZeroUsize::new(n).expect("positive degree"));
    g.as_node_weight_pairs().iter().map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect()
}

/// `int_{S_0} e^{-2 pi i <u, w>} du` with `u_j = r_j s_j`, `r_{j+1} = r_j (1 - s_j)`.
fn standard_integral(rule: &[(f64, f64)], w: &[f64]) -> Complex64 {
    fn rec(rule: &[(f64, f64)], w: &[f64], level: usize, r: f64, phase: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(s, wt) in rule {
            let u = r * s;
            let ph = phase + u * w[level];
            let v = if level + 1 == w.len() {
                Complex64::new(0.0, -2.0 * PI * ph).exp()
            } else {
                rec(rule, w, level + 1, r * (1.0 - s), ph)
            };
            acc += v * (wt * r);
        }
        acc
    }
    rec(rule, w, 0, 1.0, 0.0)
}

pub fn ft_direct_oracle(s: &GeneralSimplex, y: &[Rational], t: &AlgebraicScalar, tol: f64) -> Result<FourierEvaluation> {
    let d = s.dim();
    if d > 3 {
        return Err(Error::InvalidInput("the direct oracle handles d <= 3".into()));
    }
    if tol < 1e-12 {
        return Err(Error::InvalidInput(format!("tolerance {tol:e} below 1e-12")));
    }
    let cfg = PoleConfiguration::new(s, y)?;
    let tf = t.to_f64();
    let last = cfg.poles[d].clone();
    let w: Vec<f64> = cfg.poles[..d].iter().map(|p| p.sub(&last).to_f64() * tf).collect();
    let lambda = s.volume()?.to_f64();
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    let scale = Complex64::new(0.0, -2.0 * PI * last.to_f64() * tf).exp() * fact * lambda * tf.powi(d as i32);
    let max_n = match d {
        1 => 1024,
        2 => 512,
        _ => 160,
    };
    let mut n = 16;
    let mut prev = scale * standard_integral(&unit_rule(n), &w);
    while n < max_n {
        n = (n * 2).min(max_n);
        let cur = scale * standard_integral(&unit_rule(n), &w);
        let diff = (cur - prev).norm();
        if diff <= tol {
            let err = diff + 64.0 * f64::EPSILON * scale.norm();
            return Ok(FourierEvaluation::new(cur, Method::DirectOracle, err, y, t));
        }
        prev = cur;
    }
    Err(Error::NotConverged(format!("direct quadrature did not reach {tol:e} with {n} nodes per axis")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn unit_interval_half_frequency() {
        let s = GeneralSimplex::from_rational(&[vec![rat(1, 1)], vec![rat(0, 1)]]).unwrap();
        let v = ft_direct_oracle(&s, &[rat(1, 2)], &AlgebraicScalar::from_int(1), 1e-12).unwrap();
        assert!((v.value() - Complex64::new(0.0, -2.0 / PI)).norm() < 1e-12);
    }

    #[test]
    fn zero_frequency_is_volume() {
        let s = GeneralSimplex::from_rational(&[
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(2, 1), rat(0, 1)],
            vec![rat(0, 1), rat(3, 1)],
        ])
        .unwrap();
        let t: AlgebraicScalar = "1.5".parse().unwrap();
        let v = ft_direct_oracle(&s, &[rat(0, 1), rat(0, 1)], &t, 1e-12).unwrap();
        assert!((v.re - 3.0 * 2.25).abs() < 1e-11 && v.im.abs() < 1e-11);
    }
}
