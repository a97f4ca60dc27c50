//! Cross-polytopes, corner simplices, coordinate faces and general simplices.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::parse::split_top_level;
use crate::scalar::{detect_rational_dependence, AlgExpr, AlgebraicScalar, Rational};

/// Positive semi-axes `a_1, ..., a_d` with cached reciprocals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisLengths {
    a: Vec<AlgebraicScalar>,
    inv: Vec<AlgebraicScalar>,
}

impl AxisLengths {
    pub fn new(a: Vec<AlgebraicScalar>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInput("at least one axis is required".into()));
        }
        for (i, x) in a.iter().enumerate() {
            if x.sign()? != Ordering::Greater {
                return Err(Error::InvalidInput(format!("axis {} = {x} is not positive", i + 1)));
            }
        }
        let inv = a.iter().map(|x| x.recip()).collect::<Result<Vec<_>>>()?;
        Ok(AxisLengths { a, inv })
    }

    /// Axes given by their reciprocals `1/a_i`, the form the growth theorems
    /// are stated in.
    pub fn from_reciprocals(inv: Vec<AlgebraicScalar>) -> Result<Self> {
        let a = inv.iter().map(|x| x.recip()).collect::<Result<Vec<_>>>()?;
        Self::new(a)
    }

    pub fn parse_list(items: &[&str]) -> Result<Self> {
        Self::new(items.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[AlgebraicScalar] {
        &self.a
    }

    pub fn inv(&self) -> &[AlgebraicScalar] {
        &self.inv
    }

    pub fn a_expr(&self, i: usize) -> AlgExpr {
        self.a[i].to_expr()
    }

    pub fn inv_expr(&self, i: usize) -> AlgExpr {
        self.inv[i].to_expr()
    }

    pub fn product_expr(&self) -> AlgExpr {
        (0..self.dim()).fold(AlgExpr::from_int(1), |acc, i| acc.mul(&self.a_expr(i)))
    }

    /// Axes restricted to the 0-based indices in `idx`; `None` if empty.
    pub fn restrict(&self, idx: &[usize]) -> Option<AxisLengths> {
        if idx.is_empty() {
            return None;
        }
        Some(AxisLengths {
            a: idx.iter().map(|&i| self.a[i].clone()).collect(),
            inv: idx.iter().map(|&i| self.inv[i].clone()).collect(),
        })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.a.iter().map(|x| x.to_f64()).collect()
    }

    /// Advisory check that `1, 1/a_1, ..., 1/a_d` admit no small integer
    /// relation. A returned vector is a relation among those values.
    pub fn independence_advisory(&self, bits: u32) -> Result<Option<Vec<BigInt>>> {
        let mut xs = vec![AlgebraicScalar::from_int(1)];
        xs.extend(self.inv.iter().cloned());
        detect_rational_dependence(&xs, bits)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Where a point sits relative to a closed body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossPolytope {
    pub axes: AxisLengths,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerSimplex {
    pub axes: AxisLengths,
    pub sign: Vec<i8>,
}

/// The face `C_I`: the cross-polytope in the coordinates of `support`, zero
/// elsewhere. `support` is sorted and 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePolytope {
    pub axes: AxisLengths,
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralSimplex {
    vertices: Vec<Vec<AlgebraicScalar>>,
}

impl CrossPolytope {
    pub fn new(axes: AxisLengths) -> Self {
        CrossPolytope { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.dim()
    }

    pub fn volume(&self) -> AlgExpr {
        let d = self.dim();
        self.axes
            .product_expr()
            .scale(&Rational::new(BigInt::one() << d, factorial(d)))
    }

    pub fn contains(&self, x: &[Rational], t: &AlgebraicScalar) -> Result<Location> {
        check_dim(x.len(), self.dim())?;
        let s = weighted_abs_sum(&self.axes, (0..self.dim()).zip(x.iter()));
        Ok(match t.to_expr().cmp_expr(&s)? {
            Ordering::Greater => Location::Interior,
            Ordering::Equal => Location::Boundary,
            Ordering::Less => Location::Outside,
        })
    }

    /// All `2^d` orthant simplices, signs in lexicographic order with `+1`
    /// before `-1`.
    pub fn triangulate(&self) -> Vec<CornerSimplex> {
        let d = self.dim();
        (0..1usize << d)
            .map(|bits| CornerSimplex {
                axes: self.axes.clone(),
                sign: (0..d).map(|i| if bits >> (d - 1 - i) & 1 == 1 { -1 } else { 1 }).collect(),
            })
            .collect()
    }
}

fn check_dim(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::InvalidInput(format!("point has {got} coordinates, expected {want}")));
    }
    Ok(())
}

fn weighted_abs_sum<'a>(
    axes: &AxisLengths,
    coords: impl Iterator<Item = (usize, &'a Rational)>,
) -> AlgExpr {
    coords.fold(AlgExpr::zero(), |acc, (i, xi)| {
        acc.add(&axes.inv_expr(i).scale(&num_traits::Signed::abs(xi)))
    })
}

impl CornerSimplex {
    pub fn new(axes: AxisLengths, sign: Vec<i8>) -> Result<Self> {
        if sign.len() != axes.dim() || sign.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidInput(format!("sign vector {sign:?} must have {} entries in {{1, -1}}", axes.dim())));
        }
        Ok(CornerSimplex { axes, sign })
    }

    pub fn standard(axes: AxisLengths) -> Self {
        let d = axes.dim();
        CornerSimplex { axes, sign: vec![1; d] }
    }

    pub fn dim(&self) -> usize {
        self.axes.dim()
    }

    pub fn volume(&self) -> AlgExpr {
        self.axes
            .product_expr()
            .scale(&Rational::new(BigInt::one(), factorial(self.dim())))
    }

    pub fn contains(&self, x: &[Rational], t: &AlgebraicScalar) -> Result<Location> {
        check_dim(x.len(), self.dim())?;
        let mut on_wall = false;
        for (xi, s) in x.iter().zip(&self.sign) {
            let v = if *s == 1 { xi.clone() } else { -xi };
            match v.cmp(&Rational::zero()) {
                Ordering::Less => return Ok(Location::Outside),
                Ordering::Equal => on_wall = true,
                Ordering::Greater => {}
            }
        }
        let s = weighted_abs_sum(&self.axes, (0..self.dim()).zip(x.iter()));
        Ok(match t.to_expr().cmp_expr(&s)? {
            Ordering::Less => Location::Outside,
            Ordering::Equal => Location::Boundary,
            Ordering::Greater if on_wall => Location::Boundary,
            Ordering::Greater => Location::Interior,
        })
    }

    /// Vertices `0, sign_1 a_1 e_1, ..., sign_d a_d e_d`, origin last.
    pub fn to_general(&self) -> GeneralSimplex {
        let d = self.dim();
        let mut v = Vec::with_capacity(d + 1);
        for i in 0..d {
            let mut p = vec![AlgebraicScalar::from_int(0); d];
            p[i] = if self.sign[i] == 1 { self.axes.a()[i].clone() } else { self.axes.a()[i].neg() };
            v.push(p);
        }
        v.push(vec![AlgebraicScalar::from_int(0); d]);
        GeneralSimplex { vertices: v }
    }
}

impl FacePolytope {
    pub fn new(axes: AxisLengths, mut support: Vec<usize>) -> Result<Self> {
        support.sort_unstable();
        support.dedup();
        if support.iter().any(|&i| i >= axes.dim()) {
            return Err(Error::InvalidInput(format!("support {support:?} exceeds dimension {}", axes.dim())));
        }
        Ok(FacePolytope { axes, support })
    }

    pub fn ambient_dim(&self) -> usize {
        self.axes.dim()
    }

    /// The cross-polytope in the support coordinates, or `None` for the
    /// singleton face.
    pub fn reduced(&self) -> Option<CrossPolytope> {
        self.axes.restrict(&self.support).map(CrossPolytope::new)
    }

    /// `|I|`-dimensional volume.
    pub fn volume(&self) -> AlgExpr {
        match self.reduced() {
            Some(c) => c.volume(),
            None => AlgExpr::from_int(1),
        }
    }

    /// Classification relative to the support subspace: points with a nonzero
    /// coordinate off the support are outside.
    pub fn contains(&self, x: &[Rational], t: &AlgebraicScalar) -> Result<Location> {
        check_dim(x.len(), self.ambient_dim())?;
        for (i, xi) in x.iter().enumerate() {
            if !self.support.contains(&i) && !xi.is_zero() {
                return Ok(Location::Outside);
            }
        }
        match self.reduced() {
            Some(c) => {
                let sub: Vec<Rational> = self.support.iter().map(|&i| x[i].clone()).collect();
                c.contains(&sub, t)
            }
            None => Ok(Location::Interior),
        }
    }
}

impl GeneralSimplex {
    pub fn new(vertices: Vec<Vec<AlgebraicScalar>>) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::InvalidInput("a simplex needs at least two vertices".into()));
        }
        let d = n - 1;
        if vertices.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidInput(format!("each of the {n} vertices needs {d} coordinates")));
        }
        let s = GeneralSimplex { vertices };
        if s.edge_det().sign()? == Ordering::Equal {
            return Err(Error::DegenerateSimplex);
        }
        Ok(s)
    }

    pub fn from_rational(vertices: &[Vec<Rational>]) -> Result<Self> {
        Self::new(
            vertices
                .iter()
                .map(|v| v.iter().map(|q| AlgebraicScalar::rational(q.clone())).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<AlgebraicScalar>] {
        &self.vertices
    }

    pub fn vertices_f64(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.iter().map(|x| x.to_f64()).collect()).collect()
    }

    /// Columns `v_j - v_{d+1}`.
    fn edge_matrix(&self) -> Vec<Vec<AlgExpr>> {
        let d = self.dim();
        let last: Vec<AlgExpr> = self.vertices[d].iter().map(|x| x.to_expr()).collect();
        // row r, column c
        (0..d)
            .map(|r| (0..d).map(|c| self.vertices[c][r].to_expr().sub(&last[r])).collect())
            .collect()
    }

    pub fn edge_det(&self) -> AlgExpr {
        det(&self.edge_matrix())
    }

    pub fn volume(&self) -> Result<AlgExpr> {
        let det = self.edge_det();
        let s = det.sign()?;
        if s == Ordering::Equal {
            return Err(Error::DegenerateSimplex);
        }
        let inv_fact = Rational::new(BigInt::one(), factorial(self.dim()));
        Ok(if s == Ordering::Less { det.neg().scale(&inv_fact) } else { det.scale(&inv_fact) })
    }

    /// Barycentric classification of `x` against `t S` using Cramer's rule,
    /// with no division.
    pub fn contains(&self, x: &[Rational], t: &AlgebraicScalar) -> Result<Location> {
        let d = self.dim();
        check_dim(x.len(), d)?;
        let te = t.to_expr();
        let m: Vec<Vec<AlgExpr>> = self.edge_matrix().into_iter().map(|row| row.into_iter().map(|e| e.mul(&te)).collect()).collect();
        let base = det(&m);
        let sb = base.sign()?;
        let rhs: Vec<AlgExpr> = (0..d)
            .map(|r| AlgExpr::from_rational(x[r].clone()).sub(&self.vertices[d][r].to_expr().mul(&te)))
            .collect();
        let mut rest = base.clone();
        let mut on_face = false;
        for j in 0..d {
            let mut mj = m.clone();
            for r in 0..d {
                mj[r][j] = rhs[r].clone();
            }
            let dj = det(&mj);
            rest = rest.sub(&dj);
            match dj.sign()? {
                Ordering::Equal => on_face = true,
                s if s != sb => return Ok(Location::Outside),
                _ => {}
            }
        }
        match rest.sign()? {
            Ordering::Equal => on_face = true,
            s if s != sb => return Ok(Location::Outside),
            _ => {}
        }
        Ok(if on_face { Location::Boundary } else { Location::Interior })
    }
}

/// Laplace expansion along the first row; fine for the small sizes used here.
fn det(m: &[Vec<AlgExpr>]) -> AlgExpr {
    let n = m.len();
    match n {
        0 => AlgExpr::from_int(1),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = AlgExpr::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<AlgExpr>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, e)| e.clone()).collect())
                    .collect();
                let term = m[0][c].mul(&det(&minor));
                acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Any body the counting and Fourier layers accept, with a textual form
/// such as `cross d=3 a=[sqrt(2), 1, 3/2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Polytope {
    Cross(CrossPolytope),
    Simplex(CornerSimplex),
    Face(FacePolytope),
    General(GeneralSimplex),
}

impl Polytope {
    pub fn dim(&self) -> usize {
        match self {
            Polytope::Cross(c) => c.dim(),
            Polytope::Simplex(s) => s.dim(),
            Polytope::Face(f) => f.ambient_dim(),
            Polytope::General(g) => g.dim(),
        }
    }

    pub fn axes(&self) -> Option<&AxisLengths> {
        match self {
            Polytope::Cross(c) => Some(&c.axes),
            Polytope::Simplex(s) => Some(&s.axes),
            Polytope::Face(f) => Some(&f.axes),
            Polytope::General(_) => None,
        }
    }

    pub fn volume(&self) -> Result<AlgExpr> {
        match self {
            Polytope::Cross(c) => Ok(c.volume()),
            Polytope::Simplex(s) => Ok(s.volume()),
            Polytope::Face(f) => Ok(f.volume()),
            Polytope::General(g) => g.volume(),
        }
    }

    pub fn contains(&self, x: &[Rational], t: &AlgebraicScalar) -> Result<Location> {
        match self {
            Polytope::Cross(c) => c.contains(x, t),
            Polytope::Simplex(s) => s.contains(x, t),
            Polytope::Face(f) => f.contains(x, t),
            Polytope::General(g) => g.contains(x, t),
        }
    }
}

fn fmt_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polytope::Cross(c) => {
                write!(f, "cross d={} a=", c.dim())?;
                fmt_list(f, c.axes.a())
            }
            Polytope::Simplex(s) => {
                write!(f, "simplex d={} a=", s.dim())?;
                fmt_list(f, s.axes.a())?;
                if s.sign.iter().any(|x| *x != 1) {
                    write!(f, " sign=")?;
                    fmt_list(f, &s.sign)?;
                }
                Ok(())
            }
            Polytope::Face(p) => {
                write!(f, "face d={} a=", p.ambient_dim())?;
                fmt_list(f, p.axes.a())?;
                write!(f, " support=")?;
                let one_based: Vec<usize> = p.support.iter().map(|i| i + 1).collect();
                fmt_list(f, &one_based)
            }
            Polytope::General(g) => {
                write!(f, "general d={} v=[", g.dim())?;
                for (i, v) in g.vertices.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    fmt_list(f, v)?;
                }
                write!(f, "]")
            }
        }
    }
}

/// `key=value` pairs where a value is either a bracketed list or a bare word.
fn key_values(s: &str) -> Result<Vec<(String, String)>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= b.len() {
            break;
        }
        let ks = i;
        while i < b.len() && b[i] != b'=' {
            i += 1;
        }
        if i >= b.len() {
            return Err(Error::Parse(format!("expected key=value in '{s}'")));
        }
        let key = s[ks..i].trim().to_string();
        i += 1;
        let vs = i;
        if b.get(i) == Some(&b'[') {
            let mut depth = 0;
            while i < b.len() {
                match b[i] {
                    b'[' => depth += 1,
                    b']' => {
                        depth -= 1;
                        if depth == 0 {
                            i += 1;
                            break;
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            if depth != 0 {
                return Err(Error::Parse(format!("unbalanced brackets in '{s}'")));
            }
        } else {
            while i < b.len() && !b[i].is_ascii_whitespace() {
                i += 1;
            }
        }
        out.push((key, s[vs..i].to_string()));
    }
    Ok(out)
}

fn list_items(v: &str) -> Result<Vec<&str>> {
    let inner = v
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected a bracketed list, got '{v}'")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(split_top_level(inner, ',').into_iter().map(str::trim).collect())
}

impl FromStr for Polytope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let kv = key_values(rest)?;
        let get = |k: &str| kv.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
        for (k, _) in &kv {
            if !["d", "a", "sign", "support", "v"].contains(&k.as_str()) {
                return Err(Error::Parse(format!("unknown key '{k}' in polytope description")));
            }
        }
        let d: Option<usize> = get("d")
            .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad dimension '{x}'"))))
            .transpose()?;
        let axes = || -> Result<AxisLengths> {
            let a = get("a").ok_or_else(|| Error::Parse("missing a=[...]".into()))?;
            let ax = AxisLengths::parse_list(&list_items(a)?)?;
            if let Some(d) = d {
                if ax.dim() != d {
                    return Err(Error::Parse(format!("d={d} but {} axes given", ax.dim())));
                }
            }
            Ok(ax)
        };
        let ints = |v: &str| -> Result<Vec<i64>> {
            list_items(v)?
                .into_iter()
                .map(|x| x.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer '{x}'"))))
                .collect()
        };
        match kind {
            "cross" => Ok(Polytope::Cross(CrossPolytope::new(axes()?))),
            "simplex" => {
                let ax = axes()?;
                let sign = match get("sign") {
                    Some(v) => ints(v)?.into_iter().map(|x| x as i8).collect(),
                    None => vec![1; ax.dim()],
                };
                Ok(Polytope::Simplex(CornerSimplex::new(ax, sign)?))
            }
            "face" => {
                let ax = axes()?;
                let sup = ints(get("support").unwrap_or("[]"))?;
                if sup.iter().any(|&i| i < 1) {
                    return Err(Error::Parse("support indices are 1-based".into()));
                }
                Ok(Polytope::Face(FacePolytope::new(ax, sup.iter().map(|&i| i as usize - 1).collect())?))
            }
            "general" => {
                let v = get("v").ok_or_else(|| Error::Parse("missing v=[[...], ...]".into()))?;
                let verts = list_items(v)?
                    .into_iter()
                    .map(|p| list_items(p)?.into_iter().map(|x| x.parse()).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let g = GeneralSimplex::new(verts)?;
                if let Some(d) = d {
                    if g.dim() != d {
                        return Err(Error::Parse(format!("d={d} but {} vertices given", g.dim() + 1)));
                    }
                }
                Ok(Polytope::General(g))
            }
            other => Err(Error::Parse(format!("unknown polytope kind '{other}'"))),
        }
    }
}

impl Serialize for Polytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn axes(v: &[&str]) -> AxisLengths {
        AxisLengths::parse_list(v).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn volumes() {
        let c = CrossPolytope::new(axes(&["1", "1"]));
        assert_eq!(c.volume().as_rational(), Some(rat(2, 1)));
        let s = CornerSimplex::standard(axes(&["1", "1", "1"]));
        assert_eq!(s.volume().as_rational(), Some(rat(1, 6)));
        let g = GeneralSimplex::from_rational(&[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 3])]).unwrap();
        assert_eq!(g.volume().unwrap().as_rational(), Some(rat(3, 1)));
        assert_eq!(
            GeneralSimplex::from_rational(&[pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 2])]),
            Err(Error::DegenerateSimplex)
        );
    }

    #[test]
    fn triangulation_volumes_add_up() {
        let c = CrossPolytope::new(axes(&["sqrt(2)", "3/2", "root(1, 0, 0, -2; 1, 2)"]));
        let parts = c.triangulate();
        assert_eq!(parts.len(), 8);
        assert_eq!(parts[0].sign, vec![1, 1, 1]);
        assert_eq!(parts[1].sign, vec![1, 1, -1]);
        let total = parts.iter().fold(AlgExpr::zero(), |acc, s| acc.add(&s.volume()));
        assert!(total.sub(&c.volume()).is_zero());
        let seg = CrossPolytope::new(axes(&["5"])).triangulate();
        assert_eq!(seg.iter().map(|s| s.sign[0]).collect::<Vec<_>>(), vec![1, -1]);
    }

    #[test]
    fn membership() {
        let one = AlgebraicScalar::from_int(1);
        let c = CrossPolytope::new(axes(&["1", "1"]));
        assert_eq!(c.contains(&pt(&[1, 0]), &one).unwrap(), Location::Boundary);
        let c = CrossPolytope::new(axes(&["sqrt(2)", "sqrt(3)"]));
        assert_eq!(c.contains(&pt(&[1, 1]), &one).unwrap(), Location::Outside);
        let s = CornerSimplex::standard(axes(&["1", "1"]));
        assert_eq!(s.contains(&pt(&[0, 0]), &AlgebraicScalar::from_int(7)).unwrap(), Location::Boundary);
        let g = s.to_general();
        assert_eq!(g.contains(&pt(&[0, 0]), &one).unwrap(), Location::Boundary);
        assert_eq!(g.contains(&[rat(1, 4), rat(1, 4)], &one).unwrap(), Location::Interior);
        assert_eq!(g.contains(&[rat(3, 4), rat(1, 2)], &one).unwrap(), Location::Outside);
    }

    #[test]
    fn spec_round_trip() {
        for s in [
            "cross d=3 a=[sqrt(2), 1, 3/2]",
            "simplex d=2 a=[1/2*sqrt(2), 1] sign=[1, -1]",
            "face d=3 a=[1, 2, 3] support=[1, 3]",
            "face d=2 a=[1, 2] support=[]",
            "general d=2 v=[[0, 0], [1, 0], [0, 1]]",
        ] {
            let p: Polytope = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
            let back: Polytope = p.to_string().parse().unwrap();
            assert_eq!(p, back);
        }
        assert!("cross d=2 a=[1]".parse::<Polytope>().is_err());
        assert!("cross d=1 a=[-1]".parse::<Polytope>().is_err());
        assert!("blob d=1 a=[1]".parse::<Polytope>().is_err());
    }
}
