//! Discrepancy sweeps over a grid of dilations.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{count_cross_with, count_simplex_with, Mode};
use crate::error::{Error, Result};
use crate::fit::DiscrepancyRecord;
use crate::mainterm::{build_p, build_q, MainTermPolynomial};
use crate::numeric::Neumaier;
use crate::polytope::{CrossPolytope, Polytope};
use crate::scalar::{AlgExpr, AlgebraicScalar, DEFAULT_PRECISION_BITS, PRECISION_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: String,
    pub stop: String,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Polytope in the textual syntax; cross-polytopes and corner simplices.
    pub polytope: String,
    pub grid: Grid,
    pub cesaro_n: Option<u64>,
    pub output: Option<PathBuf>,
    pub precision_bits: Option<u32>,
    pub seed: Option<u64>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("sweep config: {e}")))
    }

    pub fn bits(&self) -> u32 {
        self.precision_bits.unwrap_or(DEFAULT_PRECISION_BITS)
    }

    pub fn parsed_polytope(&self) -> Result<Polytope> {
        self.polytope.parse()
    }

    /// Grid points as exact decimals with six fractional digits.
    pub fn points(&self) -> Result<Vec<String>> {
        let g = &self.grid;
        let start = g.start.parse::<AlgebraicScalar>()?.to_f64();
        let stop = g.stop.parse::<AlgebraicScalar>()?.to_f64();
        if g.count == 0 {
            return Err(Error::InvalidInput("grid needs at least one point".into()));
        }
        if start.is_nan() || stop.is_nan() || start < 1.0 || stop < start {
            return Err(Error::InvalidInput(format!("grid needs 1 <= start <= stop, got {start}..{stop}")));
        }
        let n = g.count;
        let mut out: Vec<String> = (0..n)
            .map(|i| {
                let f = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                let t = match g.spacing {
                    Spacing::Linear => start + f * (stop - start),
                    Spacing::Log => start * (stop / start).powf(f),
                };
                format!("{t:.6}")
            })
            .collect();
        out.dedup();
        Ok(out)
    }
}

/// The polytope's main term: `p` for cross-polytopes, `q` for corner
/// simplices.
pub fn main_term_for(p: &Polytope) -> Result<MainTermPolynomial> {
    match p {
        Polytope::Cross(c) => Ok(build_p(&c.axes)),
        Polytope::Simplex(s) => Ok(build_q(&s.axes)),
        _ => Err(Error::InvalidInput("sweeps need a cross-polytope or a corner simplex".into())),
    }
}

/// One record; precision trouble marks it uncertified instead of failing.
pub fn discrepancy_at(p: &Polytope, poly: &MainTermPolynomial, t_text: &str, bits: u32) -> Result<DiscrepancyRecord> {
    let t: AlgebraicScalar = t_text.parse()?;
    let c = match p {
        Polytope::Cross(c) => count_cross_with(c, &t, Mode::Lenient)?,
        Polytope::Simplex(s) => count_simplex_with(s, &t, Mode::Lenient)?,
        _ => return Err(Error::InvalidInput("sweeps need a cross-polytope or a corner simplex".into())),
    };
    let count = c.count_u128().ok_or_else(|| Error::InvalidInput("count exceeds 128 bits".into()))?;
    let tf = t.to_f64();
    let (main_term, delta, ok) = match poly.evaluate(&t, bits.min(PRECISION_CAP)) {
        Ok(v) => {
            let d = AlgExpr::from_rational(crate::scalar::Rational::from_integer(count.into())).sub(&v.value);
            (v.mid(), d.to_f64(), true)
        }
        Err(Error::PrecisionExhausted { .. }) => {
            let m = poly.evaluate_f64(tf);
            (m, count as f64 - m, false)
        }
        Err(e) => return Err(e),
    };
    Ok(DiscrepancyRecord { t: tf, count, main_term, delta, certified: c.certified && ok })
}

/// Records for every grid point, in increasing `t`.
pub fn scan_discrepancy(cfg: &SweepConfig) -> Result<Vec<DiscrepancyRecord>> {
    let p = cfg.parsed_polytope()?;
    let poly = main_term_for(&p)?;
    let bits = cfg.bits();
    scan_points(&p, &poly, &cfg.points()?, bits)
}

pub fn scan_points(p: &Polytope, poly: &MainTermPolynomial, points: &[String], bits: u32) -> Result<Vec<DiscrepancyRecord>> {
    let mut recs: Vec<DiscrepancyRecord> =
        points.par_iter().map(|t| discrepancy_at(p, poly, t, bits)).collect::<Result<_>>()?;
    recs.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(recs)
}

/// Exact average of the cross-polytope discrepancy over `[t1, t2]`, in f64.
///
/// The count is a step function of `t`: the point `m` is inside from
/// `t = |m|_C` on, so its share of the integral is `t2 - max(t1, |m|_C)`.
/// That share is continuous in the norm, so rounding near the boundary
/// only perturbs the result at the ulp level.
pub fn window_mean(c: &CrossPolytope, t1: f64, t2: f64) -> Result<f64> {
    if !(1.0..).contains(&t1) || t2 <= t1 || !t2.is_finite() {
        return Err(Error::InvalidInput(format!("bad window [{t1}, {t2}]")));
    }
    let inv: Vec<f64> = c.axes.inv().iter().map(|x| x.to_f64()).collect();
    let top = (t2 / inv[0]).floor() as i64;
    let parts: Vec<Neumaier> = (0..=top)
        .into_par_iter()
        .map(|m0| {
            let mut acc = Neumaier::new();
            let mult = if m0 == 0 { 1.0 } else { 2.0 };
            window_points(&inv[1..], m0 as f64 * inv[0], mult, t1, t2, &mut acc);
            acc
        })
        .collect();
    let mut total = Neumaier::new();
    for p in &parts {
        total.merge(p);
    }
    let poly = build_p(&c.axes);
    let mut main = Neumaier::new();
    for (k, ck) in poly.numeric.iter().enumerate() {
        let e = k as i32 + 1;
        main.add(ck.to_f64() * (t2.powi(e) - t1.powi(e)) / e as f64);
    }
    Ok((total.value() - main.value()) / (t2 - t1))
}

fn window_points(inv: &[f64], norm: f64, mult: f64, t1: f64, t2: f64, acc: &mut Neumaier) {
    let Some((&first, rest)) = inv.split_first() else {
        if norm <= t2 {
            acc.add(mult * (t2 - norm.max(t1)));
        }
        return;
    };
    let mut m = 0i64;
    loop {
        let s = norm + m as f64 * first;
        if s > t2 {
            break;
        }
        window_points(rest, s, if m == 0 { mult } else { 2.0 * mult }, t1, t2, acc);
        m += 1;
    }
}

pub fn write_csv<W: std::io::Write>(records: &[DiscrepancyRecord], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<DiscrepancyRecord>> {
    let mut rd = csv::Reader::from_reader(r);
    rd.deserialize().map(|x| x.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: &str = r#"
polytope = "cross d=2 a=[1, 1/sqrt(2)]"
precision_bits = 128

[grid]
start = "1"
stop = "50"
count = 30
spacing = "log"
"#;

    #[test]
    fn config_parses_and_rejects_unknown_keys() {
        let c = SweepConfig::from_toml(CFG).unwrap();
        assert_eq!(c.grid.count, 30);
        assert!(SweepConfig::from_toml(&format!("{CFG}\nbogus = 1")).is_err());
    }

    #[test]
    fn csv_round_trip_and_determinism() {
        let c = SweepConfig::from_toml(CFG).unwrap();
        let a = scan_discrepancy(&c).unwrap();
        let b = scan_discrepancy(&c).unwrap();
        let (mut x, mut y) = (Vec::new(), Vec::new());
        write_csv(&a, &mut x).unwrap();
        write_csv(&b, &mut y).unwrap();
        assert_eq!(x, y);
        assert_eq!(read_csv(&x[..]).unwrap(), a);
        assert!(String::from_utf8(x).unwrap().starts_with("t,count,main_term,delta,certified\n"));
    }

    #[test]
    fn grid_is_validated() {
        let mut c = SweepConfig::from_toml(CFG).unwrap();
        c.grid.start = "0.5".into();
        assert!(c.points().is_err());
        c.grid.start = "2".into();
        c.grid.spacing = Spacing::Linear;
        let p = c.points().unwrap();
        assert_eq!((p[0].as_str(), p.last().unwrap().as_str()), ("2.000000", "50.000000"));
    }

    /// Integrates the count step function between sorted breakpoints.
    fn window_mean_oracle(inv: &[f64], t1: f64, t2: f64, main: impl Fn(f64) -> f64) -> f64 {
        let d = inv.len();
        let r = (t2 / inv.iter().cloned().fold(f64::INFINITY, f64::min)).ceil() as i64;
        let mut norms = Vec::new();
        let side = (2 * r + 1) as usize;
        for idx in 0..side.pow(d as u32) {
            let mut k = idx;
            let mut n = 0.0;
            for w in inv {
                n += ((k % side) as i64 - r).abs() as f64 * w;
                k /= side;
            }
            norms.push(n);
        }
        norms.sort_by(f64::total_cmp);
        let mut steps: Vec<f64> = norms.iter().cloned().filter(|&n| n > t1 && n < t2).collect();
        steps.insert(0, t1);
        steps.push(t2);
        let mut area = 0.0;
        for w in steps.windows(2) {
            let count = norms.iter().filter(|&&n| n <= w[0]).count() as f64;
            area += count * (w[1] - w[0]);
        }
        // Simpson on each piece is exact for the cubic main term.
        let mut integral = 0.0;
        for w in steps.windows(2) {
            let (a, b) = (w[0], w[1]);
            integral += (b - a) / 6.0 * (main(a) + 4.0 * main((a + b) / 2.0) + main(b));
        }
        (area - integral) / (t2 - t1)
    }

    #[test]
    fn window_mean_matches_step_integration() {
        for (poly, t1, t2) in [("cross d=2 a=[1, 1/sqrt(2)]", 3.0, 6.0), ("cross d=3 a=[1, 1/sqrt(2), 1/sqrt(3)]", 2.0, 4.0)] {
            let Polytope::Cross(c) = poly.parse::<Polytope>().unwrap() else { panic!() };
            let inv: Vec<f64> = c.axes.inv().iter().map(|x| x.to_f64()).collect();
            let p = build_p(&c.axes);
            let want = window_mean_oracle(&inv, t1, t2, |t| p.evaluate_f64(t));
            let got = window_mean(&c, t1, t2).unwrap();
            assert!((got - want).abs() < 1e-9, "{poly}: {got} vs {want}");
        }
    }
}
