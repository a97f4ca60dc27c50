//! Distances to the nearest integer, reciprocal product sums
//! `S(M) = sum_{m <= M} 1 / prod_k ||m alpha_k||`, the minima `L_M`, and
//! empirical checks of their growth.
//!
//! Fractional parts of `m alpha` come from a 128-bit fixed-point image of
//! `alpha mod 1`. Multiplication by `m` wraps exactly, so the only error is
//! `m` times the initial rounding, which is tracked; distances too close to
//! that bound are recomputed exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{fit_line, LineFit, Neumaier};
use crate::scalar::{rat, AlgExpr, AlgebraicScalar, Rational};

const TWO_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// `||x||`, from an exact floor of `x + 1/2`.
pub fn dist_nearest_integer(x: &AlgebraicScalar) -> Result<f64> {
    dist_expr(&x.to_expr())
}

fn dist_expr(e: &AlgExpr) -> Result<f64> {
    let n = e.add_rational(&rat(1, 2)).floor()?;
    Ok(e.sub(&AlgExpr::from_rational(Rational::from_integer(n))).to_f64().abs())
}

/// `alpha mod 1` as a 128-bit fraction with an error bound in units of
/// `2^-128`.
#[derive(Clone, Debug)]
struct FixedFrac {
    frac: u128,
    err: u128,
    expr: AlgExpr,
}

impl FixedFrac {
    fn new(x: &AlgebraicScalar) -> Self {
        let expr = x.to_expr();
        let iv = expr.interval_at(192);
        let lo = iv.lo_units() >> 64usize;
        let width = (iv.hi_units() - iv.lo_units()) >> 64usize;
        let modulus = BigInt::one() << 128usize;
        let mut r = lo % &modulus;
        if r.is_negative() {
            r += &modulus;
        }
        let frac = r.to_u128().expect("reduced below 2^128");
        let err = width.to_u128().unwrap_or(u128::MAX / 4) + 2;
        FixedFrac { frac, err, expr }
    }

    /// Signed offset of `m alpha` from its nearest integer, in `[-1/2, 1/2)`.
    fn offset(&self, m: u64) -> Result<f64> {
        let x = self.frac.wrapping_mul(m as u128);
        let (units, neg) = if x >> 127 == 0 { (x, false) } else { (x.wrapping_neg(), true) };
        let bound = self.err.saturating_mul(m as u128);
        if units <= bound.saturating_mul(4) {
            let e = self.expr.scale(&Rational::from_integer(m.into()));
            let n = e.add_rational(&rat(1, 2)).floor()?;
            return Ok(e.sub(&AlgExpr::from_rational(Rational::from_integer(n))).to_f64());
        }
        let v = units as f64 / TWO_128;
        Ok(if neg { -v } else { v })
    }

    fn dist(&self, m: u64) -> Result<f64> {
        Ok(self.offset(m)?.abs())
    }
}

fn prepare(alphas: &[AlgebraicScalar]) -> Result<Vec<FixedFrac>> {
    if alphas.is_empty() {
        return Err(Error::InvalidInput("need at least one alpha".into()));
    }
    for (i, a) in alphas.iter().enumerate() {
        if a.as_rational().is_some() || a.to_expr().as_rational().is_some() {
            return Err(Error::RationalAlpha(i));
        }
    }
    Ok(alphas.iter().map(FixedFrac::new).collect())
}

fn product(fr: &[FixedFrac], m: u64) -> Result<f64> {
    fr.iter().try_fold(1.0, |p, f| Ok(p * f.dist(m)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductSumRow {
    pub m: u64,
    pub s: f64,
    pub l_m: f64,
    /// Largest single term `1 / prod ||m alpha_k||` up to `m`.
    pub max_term: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductSumTable {
    pub alphas: Vec<String>,
    pub rows: Vec<ProductSumRow>,
    /// Slope of `log S(M)` against `log M` over the upper half of the rows.
    pub fit: LineFit,
    /// `min_M max_term(M) / M` over the rows.
    pub dirichlet_constant: f64,
}

impl ProductSumTable {
    pub fn fitted_gamma(&self) -> f64 {
        self.fit.slope
    }
}

#[derive(Clone, Copy)]
struct Segment {
    sum: Neumaier,
    min: f64,
    max_term: f64,
}

fn scan(fr: &[FixedFrac], lo: u64, hi: u64) -> Result<Segment> {
    let mut seg = Segment { sum: Neumaier::new(), min: f64::INFINITY, max_term: 0.0 };
    for m in lo..=hi {
        let p = product(fr, m)?;
        seg.sum.add(1.0 / p);
        seg.min = seg.min.min(p);
        seg.max_term = seg.max_term.max(1.0 / p);
    }
    Ok(seg)
}

/// Roughly log-spaced integers in `[lo, hi]`, deduplicated.
pub fn log_checkpoints(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    let (l, h) = ((lo.max(1)) as f64, hi.max(lo.max(1)) as f64);
    let mut v: Vec<u64> = (0..count.max(2))
        .map(|i| (l * (h / l).powf(i as f64 / (count.max(2) - 1) as f64)).round() as u64)
        .collect();
    v.dedup();
    v
}

pub fn product_sum_table(alphas: &[AlgebraicScalar], m_max: u64, checkpoints: &[u64]) -> Result<ProductSumTable> {
    let fr = prepare(alphas)?;
    let mut cps: Vec<u64> = checkpoints.iter().copied().filter(|&m| m >= 1 && m <= m_max).collect();
    cps.sort_unstable();
    cps.dedup();
    if cps.len() < 2 {
        return Err(Error::InsufficientData("need at least two checkpoints within 1..=M_max".into()));
    }
    // segments between checkpoints, scanned in parallel and merged in order
    let bounds: Vec<(u64, u64)> =
        cps.iter().enumerate().map(|(i, &m)| (if i == 0 { 1 } else { cps[i - 1] + 1 }, m)).collect();
    let segs: Vec<Result<Segment>> = bounds.par_iter().map(|&(lo, hi)| scan(&fr, lo, hi)).collect();
    let mut rows = Vec::with_capacity(cps.len());
    let mut sum = Neumaier::new();
    let mut min = f64::INFINITY;
    let mut max_term: f64 = 0.0;
    for (seg, &m) in segs.into_iter().zip(&cps) {
        let seg = seg?;
        sum.merge(&seg.sum);
        min = min.min(seg.min);
        max_term = max_term.max(seg.max_term);
        rows.push(ProductSumRow { m, s: sum.value(), l_m: min, max_term });
    }
    let upper = &rows[rows.len() / 2..];
    let x: Vec<f64> = upper.iter().map(|r| (r.m as f64).ln()).collect();
    let y: Vec<f64> = upper.iter().map(|r| r.s.ln()).collect();
    let fit = fit_line(&x, &y).ok_or_else(|| Error::InsufficientData("too few distinct checkpoints to fit".into()))?;
    let dirichlet_constant = rows.iter().map(|r| r.max_term / r.m as f64).fold(f64::INFINITY, f64::min);
    Ok(ProductSumTable { alphas: alphas.iter().map(|a| a.to_string()).collect(), rows, fit, dirichlet_constant })
}

#[derive(Clone, Debug, Serialize)]
pub struct SchmidtRow {
    pub eps: f64,
    /// `(M, min_{m <= M} m^{1+eps} prod ||m alpha_k||)` on a log grid.
    pub running_min: Vec<(u64, f64)>,
    pub argmin: u64,
    /// Ratio of the final running minimum to the one at `sqrt(M_max)`.
    pub late_drop: f64,
    pub decaying: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchmidtReport {
    pub m_max: u64,
    pub rows: Vec<SchmidtRow>,
    pub flagged: bool,
}

pub const SCHMIDT_EPS: [f64; 3] = [0.05, 0.1, 0.2];

/// A running minimum that falls by more than this factor over the second
/// half (in log scale) of the scan counts as decaying.
pub const DECAY_FACTOR: f64 = 1e-3;

pub fn schmidt_check(alphas: &[AlgebraicScalar], m_max: u64) -> Result<SchmidtReport> {
    let fr = prepare(alphas)?;
    if m_max < 4 {
        return Err(Error::InvalidInput("schmidt scan needs M_max >= 4".into()));
    }
    let grid = log_checkpoints(1, m_max, 41);
    let half = (m_max as f64).sqrt() as u64;
    let mut rows = Vec::new();
    let products: Vec<f64> = (1..=m_max).into_par_iter().map(|m| product(&fr, m)).collect::<Result<_>>()?;
    for eps in SCHMIDT_EPS {
        let mut min = f64::INFINITY;
        let mut argmin = 1;
        let mut running = Vec::new();
        let mut at_half = f64::INFINITY;
        let mut gi = 0;
        for (i, p) in products.iter().enumerate() {
            let m = i as u64 + 1;
            let v = (m as f64).powf(1.0 + eps) * p;
            if v < min {
                min = v;
                argmin = m;
            }
            if m == half {
                at_half = min;
            }
            while gi < grid.len() && grid[gi] == m {
                running.push((m, min));
                gi += 1;
            }
        }
        let late_drop = min / at_half;
        rows.push(SchmidtRow { eps, running_min: running, argmin, late_drop, decaying: late_drop < DECAY_FACTOR });
    }
    let flagged = rows.iter().any(|r| r.decaying);
    Ok(SchmidtReport { m_max, rows, flagged })
}

/// `sum_{k=1}^{4} 10^{-k!} + 10^{-30} sqrt(2)`: irrational, but with rational
/// approximations far better than any algebraic number admits in the range
/// a desk scan reaches.
pub fn liouville_control() -> AlgebraicScalar {
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(0.into());
    for k in [1u32, 2, 6, 24] {
        r += Rational::new(BigInt::one(), ten.pow(k));
    }
    AlgebraicScalar::quadratic(r, Rational::new(BigInt::one(), ten.pow(30)), 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct PigeonholeReport {
    pub m: u64,
    pub l_m: f64,
    pub cells_per_axis: u64,
    pub side: f64,
    /// Number of `m <= M` with `prod ||m alpha_k|| < 2 L_M`.
    pub a2_size: usize,
    /// Histogram `occupancy -> number of cells`, nonempty cells only.
    pub occupancy: BTreeMap<usize, usize>,
    pub max_occupancy: usize,
}

/// Partitions `[-1/2, 1/2)^d` into cubes of side `1/n` inside
/// `(L_M^{1/d} / 2, L_M^{1/d})` and records how the offsets of `m alpha` for
/// `m` in `A_2` fall into them.
pub fn pigeonhole_bound_demo(alphas: &[AlgebraicScalar], m: u64) -> Result<PigeonholeReport> {
    let fr = prepare(alphas)?;
    if m == 0 {
        return Err(Error::InvalidInput("M must be positive".into()));
    }
    let d = fr.len();
    let products: Vec<f64> = (1..=m).map(|k| product(&fr, k)).collect::<Result<_>>()?;
    let l_m = products.iter().copied().fold(f64::INFINITY, f64::min);
    let root = l_m.powf(1.0 / d as f64);
    let n = (1.0 / root).floor() as u64 + 1;
    let mut cells: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    let mut a2 = 0;
    for (i, p) in products.iter().enumerate() {
        if *p >= 2.0 * l_m {
            continue;
        }
        a2 += 1;
        let k = i as u64 + 1;
        let key = fr
            .iter()
            .map(|f| Ok((((f.offset(k)? + 0.5) * n as f64).floor() as u64).min(n - 1)))
            .collect::<Result<Vec<u64>>>()?;
        *cells.entry(key).or_insert(0) += 1;
    }
    let mut occupancy = BTreeMap::new();
    for c in cells.values() {
        *occupancy.entry(*c).or_insert(0) += 1;
    }
    let max_occupancy = occupancy.keys().copied().max().unwrap_or(0);
    Ok(PigeonholeReport { m, l_m, cells_per_axis: n, side: 1.0 / n as f64, a2_size: a2, occupancy, max_occupancy })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> AlgebraicScalar {
        x.parse().unwrap()
    }

    #[test]
    fn nearest_integer_distances() {
        assert!((dist_nearest_integer(&s("sqrt(2)")).unwrap() - 0.414_213_562_373_095).abs() < 1e-15);
        assert_eq!(dist_nearest_integer(&s("5/2")).unwrap(), 0.5);
        assert!((dist_nearest_integer(&s("3*sqrt(2)")).unwrap() - 0.242_640_687_119_285).abs() < 1e-14);
    }

    #[test]
    fn fixed_point_agrees_with_exact() {
        let a = s("sqrt(3)");
        let f = FixedFrac::new(&a);
        for m in [1u64, 7, 1000, 123_457, 10_000_019] {
            let exact = dist_expr(&a.to_expr().scale(&Rational::from_integer(m.into()))).unwrap();
            assert!((f.dist(m).unwrap() - exact).abs() < 1e-15);
        }
    }

    #[test]
    fn small_table_for_sqrt2() {
        let t = product_sum_table(&[s("sqrt(2)")], 3, &[1, 2, 3]).unwrap();
        let last = t.rows.last().unwrap();
        let expect = 1.0 / 0.414_213_562_373_095 + 1.0 / 0.171_572_875_253_810 + 1.0 / 0.242_640_687_119_285;
        assert!((last.s - expect).abs() < 1e-9);
        assert!((last.l_m - 0.171_572_875_253_81).abs() < 1e-12);
    }

    #[test]
    fn rational_alpha_is_rejected() {
        assert!(matches!(product_sum_table(&[s("sqrt(2)"), s("3/7")], 10, &[5, 10]), Err(Error::RationalAlpha(1))));
    }

    #[test]
    fn liouville_like_control_is_flagged() {
        let r = schmidt_check(&[liouville_control()], 2_000_000).unwrap();
        assert!(r.flagged);
        let r = schmidt_check(&[s("sqrt(2)")], 100_000).unwrap();
        assert!(!r.flagged);
    }

    #[test]
    fn pigeonhole_cells_hold_one_point() {
        let r = pigeonhole_bound_demo(&[s("(1+sqrt(5))/2")], 100).unwrap();
        assert_eq!(r.max_occupancy, 1);
        let r = pigeonhole_bound_demo(&[s("sqrt(2)"), s("sqrt(3)")], 5000).unwrap();
        assert!(r.max_occupancy <= 1);
        let r = pigeonhole_bound_demo(&[s("sqrt(7)")], 1).unwrap();
        assert_eq!((r.a2_size, r.max_occupancy), (1, 1));
    }
}
