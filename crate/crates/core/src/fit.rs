//! Exponent fits for sup-type growth bounds on the lattice discrepancy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{fit_line, LineFit};

/// One sample of `Δ(t) = count - main term`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    /// Dilation, a decimal with at most six fractional digits.
    pub t: f64,
    pub count: u128,
    pub main_term: f64,
    pub delta: f64,
    pub certified: bool,
}

pub const MIN_RECORDS: usize = 20;

/// Maximum of `|Δ|` over dyadic blocks `[2^k t_0, 2^{k+1} t_0)`, paired with
/// the largest `t` of each block.
pub fn dyadic_envelope(records: &[DiscrepancyRecord]) -> Vec<(f64, f64)> {
    let Some(t0) = records.iter().map(|r| r.t).reduce(f64::min) else {
        return Vec::new();
    };
    let mut blocks: Vec<(i64, f64, f64)> = Vec::new();
    for r in records {
        let k = (r.t / t0).log2().floor() as i64;
        match blocks.iter_mut().find(|b| b.0 == k) {
            Some(b) => {
                b.1 = b.1.max(r.t);
                b.2 = b.2.max(r.delta.abs());
            }
            None => blocks.push((k, r.t, r.delta.abs())),
        }
    }
    blocks.sort_by_key(|b| b.0);
    blocks.into_iter().map(|(_, t, e)| (t, e)).collect()
}

/// Least squares of `log envelope` against `log t`. `window` keeps the upper
/// fraction of the `log t` range (1 keeps everything).
pub fn fit_exponent(records: &[DiscrepancyRecord], window: f64) -> Result<LineFit> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::InvalidInput(format!("window must lie in (0, 1], got {window}")));
    }
    let nonzero = records.iter().filter(|r| r.delta != 0.0 && r.t > 0.0).count();
    if nonzero < MIN_RECORDS {
        return Err(Error::InsufficientData(format!("{nonzero} records with nonzero discrepancy, need {MIN_RECORDS}")));
    }
    let lo = records.iter().map(|r| r.t).fold(f64::INFINITY, f64::min).ln();
    let hi = records.iter().map(|r| r.t).fold(0.0, f64::max).ln();
    let cut = lo + (1.0 - window) * (hi - lo);
    let kept: Vec<DiscrepancyRecord> = records.iter().filter(|r| r.t.ln() >= cut - 1e-12).cloned().collect();
    let env: Vec<(f64, f64)> = dyadic_envelope(&kept).into_iter().filter(|&(_, e)| e > 0.0).collect();
    let x: Vec<f64> = env.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = env.iter().map(|p| p.1.ln()).collect();
    fit_line(&x, &y).ok_or_else(|| Error::InsufficientData(format!("{} dyadic blocks, need at least 2", env.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64) -> Vec<DiscrepancyRecord> {
        (0..400)
            .map(|i| {
                let t = 10f64.powf(4.0 * i as f64 / 399.0);
                DiscrepancyRecord { t, count: 0, main_term: 0.0, delta: f(t), certified: true }
            })
            .collect()
    }

    #[test]
    fn planted_square_root() {
        let f = fit_exponent(&synthetic(|t| t.sqrt()), 1.0).unwrap();
        assert!((f.slope - 0.5).abs() < 0.02, "{f:?}");
    }

    #[test]
    fn logarithm_flattens() {
        let short = fit_exponent(&synthetic(|t| 1.0 + t.ln()), 1.0).unwrap().slope;
        let late = fit_exponent(&synthetic(|t| 1.0 + t.ln()), 0.5).unwrap().slope;
        assert!(late < short && late < 0.3);
    }

    #[test]
    fn too_few_records() {
        let r = synthetic(|t| t)[..10].to_vec();
        assert!(matches!(fit_exponent(&r, 1.0), Err(Error::InsufficientData(_))));
    }
}
