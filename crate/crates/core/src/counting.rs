//! Exact lattice-point counts in real dilates.
//!
//! Counts recurse over the outer `d - 1` coordinates and close the innermost
//! one with a floor. Each floor is first taken in f64 with a rigorous error
//! bound; only when an integer falls inside that bound is the value compared
//! exactly against the candidate integer.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polytope::{AxisLengths, CornerSimplex, CrossPolytope, FacePolytope, Location, Polytope};
use crate::scalar::{AlgExpr, AlgebraicScalar, Rational};

/// Lattice points of a closed dilate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "ser_big")]
    pub count: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub boundary_hits: BigUint,
    pub certified: bool,
}

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u128() {
        Some(x) => s.serialize_u128(x),
        None => s.serialize_str(&v.to_string()),
    }
}

impl CountResult {
    fn single_point(on_boundary: bool) -> Self {
        CountResult {
            count: BigUint::from(1u8),
            boundary_hits: BigUint::from(on_boundary as u8),
            certified: true,
        }
    }

    pub fn count_u128(&self) -> Option<u128> {
        self.count.to_u128()
    }
}

/// What to do when a floor cannot be decided at the precision cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Propagate `PrecisionExhausted`.
    #[default]
    Strict,
    /// Use the f64 guess and clear the `certified` flag.
    Lenient,
}

const MAX_FAST: f64 = 4_503_599_627_370_496.0; // 2^52

/// Values `a_j t - sum_{i<j} k_i a_j / a_i` for every level `j`, in f64 with
/// error radii and as exact expressions.
struct Levels {
    tau: Vec<(f64, f64)>,
    g: Vec<Vec<(f64, f64)>>,
    tau_e: Vec<AlgExpr>,
    g_e: Vec<Vec<AlgExpr>>,
    mode: Mode,
}

struct Floor {
    value: i64,
    is_int: bool,
    certified: bool,
}

impl Levels {
    fn new(axes: &AxisLengths, t: &AlgebraicScalar, mode: Mode) -> Self {
        let d = axes.dim();
        let te = t.to_expr();
        let tau_e: Vec<AlgExpr> = (0..d).map(|j| axes.a_expr(j).mul(&te)).collect();
        let g_e: Vec<Vec<AlgExpr>> = (0..d)
            .map(|j| (0..j).map(|i| axes.a_expr(j).mul(&axes.inv_expr(i))).collect())
            .collect();
        Levels {
            tau: tau_e.iter().map(AlgExpr::approx).collect(),
            g: g_e.iter().map(|row| row.iter().map(AlgExpr::approx).collect()).collect(),
            tau_e,
            g_e,
            mode,
        }
    }

    fn exact(&self, j: usize, k: &[i64]) -> AlgExpr {
        let mut v = self.tau_e[j].clone();
        for (i, &ki) in k.iter().enumerate().take(j) {
            if ki != 0 {
                v = v.sub(&self.g_e[j][i].scale(&Rational::from_integer(ki.into())));
            }
        }
        v
    }

    /// Floor of the level-`j` value given the prefix `k[..j]`.
    fn floor(&self, j: usize, k: &[i64]) -> Result<Floor> {
        let (mut s, mut e) = self.tau[j];
        let mut mag = s.abs();
        for i in 0..j {
            let ki = k[i] as f64;
            let (g, ge) = self.g[j][i];
            s -= ki * g;
            mag += ki * g.abs();
            e += ki * ge;
        }
        let err = e * (1.0 + 1e-9) + (2 * j + 4) as f64 * f64::EPSILON * mag;
        let lo = s - err;
        let hi = s + err;
        if !(hi.abs() < MAX_FAST && lo.abs() < MAX_FAST) {
            return Err(Error::InvalidInput(format!("dilate too large to enumerate (level value ~{s:e})")));
        }
        let fl = lo.floor();
        if fl == hi.floor() && lo != fl {
            return Ok(Floor { value: fl as i64, is_int: false, certified: true });
        }
        if hi - lo > 0.5 {
            let v = self.exact(j, k);
            let f = v.floor()?;
            let is_int = v.add_rational(&Rational::from_integer(-f.clone())).sign()? == Ordering::Equal;
            let value = f.to_i64().ok_or_else(|| Error::InvalidInput("dilate too large to enumerate".into()))?;
            return Ok(Floor { value, is_int, certified: true });
        }
        // exactly one candidate integer sits in [lo, hi]
        let n = lo.ceil();
        let v = self.exact(j, k).add_rational(&Rational::from_integer(BigInt::from(-(n as i64))));
        match v.sign() {
            Ok(Ordering::Greater) => Ok(Floor { value: n as i64, is_int: false, certified: true }),
            Ok(Ordering::Equal) => Ok(Floor { value: n as i64, is_int: true, certified: true }),
            Ok(Ordering::Less) => Ok(Floor { value: n as i64 - 1, is_int: false, certified: true }),
            Err(err @ Error::PrecisionExhausted { .. }) => match self.mode {
                Mode::Strict => Err(err),
                Mode::Lenient => Ok(Floor { value: s.floor() as i64, is_int: false, certified: false }),
            },
            Err(other) => Err(other),
        }
    }
}

#[derive(Default)]
struct Acc {
    count: u128,
    boundary: u128,
    certified: bool,
}

impl Acc {
    fn finish(self) -> CountResult {
        CountResult {
            count: BigUint::from(self.count),
            boundary_hits: BigUint::from(self.boundary),
            certified: self.certified,
        }
    }
}

fn check_t(t: &AlgebraicScalar) -> Result<()> {
    if t.sign()? != Ordering::Greater {
        return Err(Error::InvalidInput(format!("dilation t = {t} must be positive")));
    }
    Ok(())
}

/// `floor(a t)` exactly, for the one-dimensional bodies where no enumeration
/// happens and values may be arbitrarily large.
fn floor_1d(a: &AlgebraicScalar, t: &AlgebraicScalar, mode: Mode) -> Result<(BigInt, bool, bool)> {
    let v = a.to_expr().mul(&t.to_expr());
    match v.floor() {
        Ok(f) => {
            let is_int = v.add_rational(&Rational::from_integer(-f.clone())).sign()? == Ordering::Equal;
            Ok((f, is_int, true))
        }
        Err(Error::PrecisionExhausted { .. }) if mode == Mode::Lenient => {
            Ok((BigInt::from(v.to_f64().floor() as i64), false, false))
        }
        Err(e) => Err(e),
    }
}

pub fn count_cross(p: &CrossPolytope, t: &AlgebraicScalar) -> Result<CountResult> {
    count_cross_with(p, t, Mode::Strict)
}

pub fn count_cross_with(p: &CrossPolytope, t: &AlgebraicScalar, mode: Mode) -> Result<CountResult> {
    check_t(t)?;
    let d = p.dim();
    if d == 1 {
        let (f, is_int, certified) = floor_1d(&p.axes.a()[0], t, mode)?;
        let f = f.to_biguint().unwrap_or_default();
        let boundary = if is_int { if f.is_zero() { 1u8 } else { 2 } } else { 0 };
        return Ok(CountResult {
            count: f * 2u8 + 1u8,
            boundary_hits: BigUint::from(boundary),
            certified,
        });
    }
    let lv = Levels::new(&p.axes, t, mode);
    let mut acc = Acc { certified: true, ..Acc::default() };
    let mut k = vec![0i64; d];
    cross_rec(&lv, 0, 1, &mut k, &mut acc)?;
    Ok(acc.finish())
}

fn cross_rec(lv: &Levels, j: usize, mult: u128, k: &mut [i64], acc: &mut Acc) -> Result<()> {
    let d = k.len();
    let f = lv.floor(j, k)?;
    acc.certified &= f.certified;
    if f.value < 0 {
        return Ok(());
    }
    let n = f.value as u128;
    if j == d - 1 {
        acc.count += mult * (2 * n + 1);
        if f.is_int {
            acc.boundary += mult * if n == 0 { 1 } else { 2 };
        }
        return Ok(());
    }
    for kj in 0..=f.value {
        let m = if kj == 0 { mult } else { 2 * mult };
        if f.is_int && kj == f.value {
            // the remaining coordinates are forced to zero
            acc.count += m;
            acc.boundary += m;
            continue;
        }
        k[j] = kj;
        cross_rec(lv, j + 1, m, k, acc)?;
    }
    k[j] = 0;
    Ok(())
}

/// Counts for a corner simplex; the count does not depend on the sign
/// pattern since `Z^d` is symmetric under coordinate reflections.
pub fn count_simplex(p: &CornerSimplex, t: &AlgebraicScalar) -> Result<CountResult> {
    count_simplex_with(p, t, Mode::Strict)
}

pub fn count_simplex_with(p: &CornerSimplex, t: &AlgebraicScalar, mode: Mode) -> Result<CountResult> {
    check_t(t)?;
    let d = p.dim();
    if d == 1 {
        let (f, is_int, certified) = floor_1d(&p.axes.a()[0], t, mode)?;
        let f = f.to_biguint().unwrap_or_default();
        let boundary = if is_int && !f.is_zero() { 2u8 } else { 1 };
        return Ok(CountResult { count: f + 1u8, boundary_hits: BigUint::from(boundary), certified });
    }
    let lv = Levels::new(&p.axes, t, mode);
    let mut acc = Acc { certified: true, ..Acc::default() };
    let mut k = vec![0i64; d];
    simplex_rec(&lv, 0, false, &mut k, &mut acc)?;
    Ok(acc.finish())
}

fn simplex_rec(lv: &Levels, j: usize, on_wall: bool, k: &mut [i64], acc: &mut Acc) -> Result<()> {
    let d = k.len();
    let f = lv.floor(j, k)?;
    acc.certified &= f.certified;
    if f.value < 0 {
        return Ok(());
    }
    let n = f.value as u128;
    if j == d - 1 {
        acc.count += n + 1;
        acc.boundary += if on_wall {
            n + 1
        } else {
            1 + (f.is_int && n > 0) as u128
        };
        return Ok(());
    }
    for kj in 0..=f.value {
        if f.is_int && kj == f.value {
            acc.count += 1;
            acc.boundary += 1;
            continue;
        }
        k[j] = kj;
        simplex_rec(lv, j + 1, on_wall || kj == 0, k, acc)?;
    }
    k[j] = 0;
    Ok(())
}

/// Counts `t C_I` inside its support subspace. The empty face is the origin,
/// which is its own relative interior.
pub fn count_face(p: &FacePolytope, t: &AlgebraicScalar) -> Result<CountResult> {
    count_face_with(p, t, Mode::Strict)
}

pub fn count_face_with(p: &FacePolytope, t: &AlgebraicScalar, mode: Mode) -> Result<CountResult> {
    check_t(t)?;
    match p.reduced() {
        Some(c) => count_cross_with(&c, t, mode),
        None => Ok(CountResult::single_point(false)),
    }
}

/// Dispatch over every polytope family; general simplices are enumerated.
pub fn count(p: &Polytope, t: &AlgebraicScalar) -> Result<CountResult> {
    count_with(p, t, Mode::Strict)
}

pub fn count_with(p: &Polytope, t: &AlgebraicScalar, mode: Mode) -> Result<CountResult> {
    match p {
        Polytope::Cross(c) => count_cross_with(c, t, mode),
        Polytope::Simplex(s) => count_simplex_with(s, t, mode),
        Polytope::Face(f) => count_face_with(f, t, mode),
        Polytope::General(_) => brute_force(p, t),
    }
}

/// Point-by-point enumeration over the bounding box. Independent of the
/// recursive counter: every box point is classified on its own.
pub fn brute_force(p: &Polytope, t: &AlgebraicScalar) -> Result<CountResult> {
    check_t(t)?;
    let d = p.dim();
    let tf = t.to_f64();
    let (lo, hi): (Vec<i64>, Vec<i64>) = match p {
        Polytope::General(g) => {
            let v = g.vertices_f64();
            (0..d)
                .map(|i| {
                    let mn = v.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min) * tf;
                    let mx = v.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max) * tf;
                    ((mn - 1.0).floor() as i64, (mx + 1.0).ceil() as i64)
                })
                .unzip()
        }
        _ => {
            let axes = p.axes().expect("axis-based polytope");
            let r: Vec<i64> = axes.to_f64().iter().map(|a| (a * tf + 1.0).ceil() as i64).collect();
            (r.iter().map(|x| -x).collect(), r)
        }
    };
    let total: f64 = lo.iter().zip(&hi).map(|(l, h)| (h - l + 1) as f64).product();
    if total > 5e8 {
        return Err(Error::InvalidInput(format!("bounding box of {total:e} points is too large to enumerate")));
    }
    let filter = FastFilter::new(p, t);
    let mut x = lo.clone();
    let mut count = 0u128;
    let mut boundary = 0u128;
    loop {
        let loc = match filter.as_ref().and_then(|f| f.classify(&x)) {
            Some(l) => l,
            None => {
                let q: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(v.into())).collect();
                p.contains(&q, t)?
            }
        };
        match loc {
            Location::Interior => count += 1,
            Location::Boundary => {
                count += 1;
                boundary += 1;
            }
            Location::Outside => {}
        }
        // odometer
        let mut i = 0;
        loop {
            if i == d {
                return Ok(CountResult {
                    count: BigUint::from(count),
                    boundary_hits: BigUint::from(boundary),
                    certified: true,
                });
            }
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
    }
}

/// f64 prefilter for axis-based bodies: decides points whose weighted sum is
/// clearly away from `t` and leaves the rest to the exact classifier.
struct FastFilter {
    inv: Vec<(f64, f64)>,
    t: (f64, f64),
    sign: Option<Vec<i8>>,
    support: Option<Vec<bool>>,
}

impl FastFilter {
    fn new(p: &Polytope, t: &AlgebraicScalar) -> Option<Self> {
        let axes = p.axes()?;
        let inv = (0..axes.dim()).map(|i| axes.inv_expr(i).approx()).collect();
        let (sign, support) = match p {
            Polytope::Simplex(s) => (Some(s.sign.clone()), None),
            Polytope::Face(f) => {
                let mut m = vec![false; axes.dim()];
                for &i in &f.support {
                    m[i] = true;
                }
                (None, Some(m))
            }
            _ => (None, None),
        };
        Some(FastFilter { inv, t: t.to_expr().approx(), sign, support })
    }

    fn classify(&self, x: &[i64]) -> Option<Location> {
        if let Some(sup) = &self.support {
            if x.iter().zip(sup).any(|(v, s)| !s && *v != 0) {
                return Some(Location::Outside);
            }
            if !sup.iter().any(|s| *s) {
                return None;
            }
        }
        let mut wall = false;
        if let Some(sg) = &self.sign {
            for (v, s) in x.iter().zip(sg) {
                let w = v * *s as i64;
                if w < 0 {
                    return Some(Location::Outside);
                }
                wall |= w == 0;
            }
        }
        let (mut s, mut e, mut mag) = (0.0f64, self.t.1, self.t.0.abs());
        for (v, (inv, ie)) in x.iter().zip(&self.inv) {
            let a = v.unsigned_abs() as f64;
            s += a * inv;
            e += a * ie;
            mag += a * inv;
        }
        let err = e * (1.0 + 1e-9) + (2 * x.len() + 4) as f64 * f64::EPSILON * mag;
        let diff = self.t.0 - s;
        if diff > err {
            Some(if wall { Location::Boundary } else { Location::Interior })
        } else if diff < -err {
            Some(Location::Outside)
        } else {
            None
        }
    }
}

/// Checks `2^d |tS ∩ Z^d| = sum_I |tC_I ∩ Z^d|` in exact integers.
pub fn verify_decomposition(axes: &AxisLengths, t: &AlgebraicScalar) -> Result<bool> {
    let (lhs, rhs) = decomposition_sides(axes, t)?;
    Ok(lhs == rhs)
}

/// Both sides of the decomposition identity, the simplex side already
/// multiplied by `2^d`.
pub fn decomposition_sides(axes: &AxisLengths, t: &AlgebraicScalar) -> Result<(BigUint, BigUint)> {
    let d = axes.dim();
    let s = count_simplex(&CornerSimplex::standard(axes.clone()), t)?;
    let lhs = s.count << d;
    let mut rhs = BigUint::zero();
    for mask in 0u32..(1 << d) {
        let support: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
        rhs += count_face(&FacePolytope::new(axes.clone(), support)?, t)?.count;
    }
    Ok((lhs, rhs))
}

/// Ball of radius `radius` around a rational center, cut by the slab
/// `offset <= <n/|n|, m> <= offset + width`.
#[derive(Clone, Debug)]
pub struct SlabQuery {
    pub center: Vec<Rational>,
    pub radius: AlgebraicScalar,
    pub normal: Vec<AlgebraicScalar>,
    pub offset: AlgebraicScalar,
    pub width: AlgebraicScalar,
}

/// Brute-force slab count. `<n, n>` must be rational so that `|n|` is a
/// single square root and every comparison stays exact.
pub fn count_slab(q: &SlabQuery) -> Result<BigUint> {
    let d = q.center.len();
    if q.normal.len() != d || d == 0 {
        return Err(Error::InvalidInput("normal and center dimensions differ".into()));
    }
    if q.radius.cmp_value(&AlgebraicScalar::from_int(1))? != Ordering::Greater {
        return Err(Error::InvalidInput("slab radius must exceed 1".into()));
    }
    if q.width.sign()? != Ordering::Greater {
        return Err(Error::InvalidInput("slab width must be positive".into()));
    }
    let ne: Vec<AlgExpr> = q.normal.iter().map(|x| x.to_expr()).collect();
    let nn = ne.iter().fold(AlgExpr::zero(), |acc, x| acc.add(&x.mul(x)));
    let nn = nn
        .as_rational()
        .ok_or_else(|| Error::InvalidInput("the squared norm of the normal must be rational".into()))?;
    if nn.is_zero() {
        return Err(Error::InvalidInput("normal vector is zero".into()));
    }
    // |n| = sqrt(p q) / q for nn = p / q
    let norm = AlgExpr::sqrt_scaled(Rational::new(1.into(), nn.denom().clone()), (nn.numer() * nn.denom()).to_u64().ok_or_else(|| Error::InvalidInput("normal too large".into()))?);
    let lo_e = q.offset.to_expr().mul(&norm);
    let hi_e = q.offset.to_expr().add(&q.width.to_expr()).mul(&norm);
    let r2 = q.radius.to_expr().mul(&q.radius.to_expr());
    let (lo_f, lo_r) = lo_e.approx();
    let (hi_f, hi_r) = hi_e.approx();
    let (r2_f, r2_r) = r2.approx();
    let nf: Vec<(f64, f64)> = ne.iter().map(AlgExpr::approx).collect();
    let cf: Vec<f64> = q.center.iter().map(crate::scalar::expr::rational_to_f64).collect();
    let rf = q.radius.to_f64();
    let lo_box: Vec<i64> = cf.iter().map(|c| (c - rf - 1.0).floor() as i64).collect();
    let hi_box: Vec<i64> = cf.iter().map(|c| (c + rf + 1.0).ceil() as i64).collect();
    let mut x = lo_box.clone();
    let mut count = 0u64;
    loop {
        // ball membership in exact rationals (cheap) then slab with a filter
        let dist2: Rational = x
            .iter()
            .zip(&q.center)
            .map(|(&m, c)| {
                let v = Rational::from_integer(m.into()) - c;
                &v * &v
            })
            .sum();
        let d2f = crate::scalar::expr::rational_to_f64(&dist2);
        let in_ball = if d2f < r2_f - r2_r - 1e-9 * r2_f.abs() {
            true
        } else if d2f > r2_f + r2_r + 1e-9 * r2_f.abs() {
            false
        } else {
            AlgExpr::from_rational(dist2).cmp_expr(&r2)? != Ordering::Greater
        };
        if in_ball {
            let mut s = 0.0;
            let mut err = 0.0;
            let mut mag = 0.0;
            for (m, (n, ne)) in x.iter().zip(&nf) {
                let mf = *m as f64;
                s += mf * n;
                err += mf.abs() * ne;
                mag += (mf * n).abs();
            }
            let err = err * (1.0 + 1e-9) + (2 * d + 4) as f64 * f64::EPSILON * (mag + lo_f.abs() + hi_f.abs());
            let above_lo = if s - lo_f > err + lo_r {
                Some(true)
            } else if lo_f - s > err + lo_r {
                Some(false)
            } else {
                None
            };
            let below_hi = if hi_f - s > err + hi_r {
                Some(true)
            } else if s - hi_f > err + hi_r {
                Some(false)
            } else {
                None
            };
            let dot = || {
                x.iter().zip(&ne).fold(AlgExpr::zero(), |acc, (m, n)| {
                    acc.add(&n.scale(&Rational::from_integer((*m).into())))
                })
            };
            let a = match above_lo {
                Some(b) => b,
                None => dot().cmp_expr(&lo_e)? != Ordering::Less,
            };
            let b = a
                && match below_hi {
                    Some(b) => b,
                    None => dot().cmp_expr(&hi_e)? != Ordering::Greater,
                };
            if a && b {
                count += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == d {
                return Ok(BigUint::from(count));
            }
            if x[i] < hi_box[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo_box[i];
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn axes(v: &[&str]) -> AxisLengths {
        AxisLengths::parse_list(v).unwrap()
    }

    fn t(s: &str) -> AlgebraicScalar {
        s.parse().unwrap()
    }

    fn n(r: &CountResult) -> u128 {
        r.count_u128().unwrap()
    }

    #[test]
    fn small_cases() {
        let c = CrossPolytope::new(axes(&["1"]));
        assert_eq!(n(&count_cross(&c, &t("5/2")).unwrap()), 5);
        let c = CrossPolytope::new(axes(&["1", "1"]));
        let r = count_cross(&c, &t("1")).unwrap();
        assert_eq!((n(&r), r.boundary_hits.to_u64().unwrap()), (5, 4));
        let s = CornerSimplex::standard(axes(&["1", "1"]));
        assert_eq!(n(&count_simplex(&s, &t("2")).unwrap()), 6);
        let s = CornerSimplex::standard(axes(&["sqrt(2)"]));
        assert_eq!(n(&count_simplex(&s, &t("10")).unwrap()), 15);
        let f = FacePolytope::new(axes(&["1", "2"]), vec![]).unwrap();
        assert_eq!(n(&count_face(&f, &t("100")).unwrap()), 1);
    }

    #[test]
    fn matches_brute_force() {
        for (spec, tv) in [
            ("cross d=2 a=[sqrt(2), sqrt(3)]", "10"),
            ("cross d=3 a=[1, sqrt(2), 3/2]", "4.1"),
            ("simplex d=3 a=[1, 2, 3] sign=[1, -1, 1]", "2"),
            ("face d=3 a=[sqrt(5), 1, 2] support=[1, 3]", "3.3"),
            ("cross d=2 a=[root(1, 0, 0, -2; 1, 2), 1]", "7"),
        ] {
            let p: Polytope = spec.parse().unwrap();
            let tv = t(tv);
            assert_eq!(count(&p, &tv).unwrap(), brute_force(&p, &tv).unwrap(), "{spec}");
        }
    }

    #[test]
    fn boundary_hits_on_rational_axes() {
        let c = CrossPolytope::new(axes(&["1", "1", "1"]));
        // octahedron |x|+|y|+|z| <= 2: 25 points, 18 of them with sum exactly 2
        let r = count_cross(&c, &t("2")).unwrap();
        assert_eq!((n(&r), r.boundary_hits.to_u64().unwrap()), (25, 18));
        let p = Polytope::Cross(c);
        assert_eq!(brute_force(&p, &t("2")).unwrap(), r);
    }

    #[test]
    fn decomposition_small() {
        assert!(verify_decomposition(&axes(&["sqrt(2)"]), &t("3.7")).unwrap());
        assert!(verify_decomposition(&axes(&["sqrt(2)", "sqrt(3)"]), &t("7.3")).unwrap());
        assert!(verify_decomposition(&axes(&["1", "sqrt(2)", "sqrt(3)"]), &t("4.1")).unwrap());
        assert!(verify_decomposition(&axes(&["1", "1", "1"]), &t("3")).unwrap());
    }

    #[test]
    fn huge_one_dimensional_dilate() {
        let c = CrossPolytope::new(axes(&["sqrt(2)"]));
        let r = count_cross(&c, &t("1e30")).unwrap();
        // floor(sqrt(2) * 10^30) = 1414213562373095048801688724209
        assert_eq!(r.count.to_string(), "2828427124746190097603377448419");
    }

    #[test]
    fn slab_on_axis() {
        let q = SlabQuery {
            center: vec![rat(0, 1), rat(0, 1)],
            radius: t("10"),
            normal: vec![t("0"), t("1")],
            offset: t("0"),
            width: t("1e-9"),
        };
        assert_eq!(count_slab(&q).unwrap(), BigUint::from(21u8));
    }
}
