//! Max-plus arithmetic and linear algebra on the tropical projective torus
//! `R^e / R·1`.
//!
//! Points are stored in canonical form: the representative whose first
//! coordinate is zero. Two raw vectors describe the same point when their
//! difference is a constant vector.

pub mod assignment;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when comparing canonical representatives.
pub const EQ_TOL: f64 = 1e-9;

/// A point of the tropical projective torus, kept in canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TropicalPoint(Vec<f64>);

impl TropicalPoint {
    /// Canonicalizes `coords` by subtracting the first coordinate.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_raw(&coords)?;
        let mut coords = coords;
        canonicalize(&mut coords);
        Ok(TropicalPoint(coords))
    }

    /// Canonicalizes a raw vector that is known to be finite and long enough.
    pub(crate) fn from_raw_unchecked(mut coords: Vec<f64>) -> Self {
        canonicalize(&mut coords);
        TropicalPoint(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn distance(&self, other: &TropicalPoint) -> Result<f64> {
        trop_distance(self, other)
    }

    /// Equality of classes within `tol` in the tropical metric.
    pub fn approx_eq(&self, other: &TropicalPoint, tol: f64) -> bool {
        self.dim() == other.dim() && raw_distance(&self.0, &other.0) <= tol
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        check_dim(expected, self.dim())
    }
}

impl TryFrom<Vec<f64>> for TropicalPoint {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        TropicalPoint::new(value)
    }
}

impl From<TropicalPoint> for Vec<f64> {
    fn from(p: TropicalPoint) -> Self {
        p.0
    }
}

impl AsRef<[f64]> for TropicalPoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Ordered generators of a tropical polytope. The hull itself is implicit;
/// redundant generators are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalPolytope {
    generators: Vec<TropicalPoint>,
}

impl TropicalPolytope {
    pub fn new(generators: Vec<TropicalPoint>) -> Result<Self> {
        let first = generators.first().ok_or(Error::Empty)?;
        let dim = first.dim();
        for (row, g) in generators.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::RaggedRows {
                    row,
                    expected: dim,
                    found: g.dim(),
                });
            }
        }
        Ok(TropicalPolytope { generators })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        normalize_matrix(rows)
    }

    pub fn generators(&self) -> &[TropicalPoint] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.generators.iter().map(|g| g.0.clone()).collect()
    }

    /// Largest pairwise tropical distance between generators.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                best = best.max(raw_distance(&a.0, &b.0));
            }
        }
        best
    }

    pub fn project(&self, x: &TropicalPoint) -> Result<TropicalPoint> {
        project_onto_polytope(self, x)
    }

    /// Tropical distance from `x` to its projection onto the hull, without
    /// allocating. `scratch` must have length `dim()`.
    pub(crate) fn distance_to_hull(&self, x: &[f64], scratch: &mut [f64]) -> f64 {
        project_raw(&self.generators, x, scratch);
        raw_distance(x, scratch)
    }
}

/// Max- or min-plus convention for hyperplanes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Max,
    Min,
}

/// Tropical hyperplane with normal vector `normal`; its apex is `-normal`.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalHyperplane {
    pub normal: TropicalPoint,
    pub algebra: Algebra,
}

impl TropicalHyperplane {
    pub fn new(normal: TropicalPoint, algebra: Algebra) -> Self {
        TropicalHyperplane { normal, algebra }
    }

    /// Hyperplane whose apex is `apex`.
    pub fn with_apex(apex: &TropicalPoint, algebra: Algebra) -> Self {
        let normal = apex.0.iter().map(|a| -a).collect();
        TropicalHyperplane {
            normal: TropicalPoint::from_raw_unchecked(normal),
            algebra,
        }
    }

    pub fn apex(&self) -> TropicalPoint {
        TropicalPoint::from_raw_unchecked(self.normal.0.iter().map(|w| -w).collect())
    }

    pub fn distance(&self, v: &TropicalPoint) -> Result<f64> {
        hyperplane_distance(self, v)
    }
}

/// Bend points of a tropical line segment, ordered from source to target.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalSegment {
    bends: Vec<TropicalPoint>,
}

impl TropicalSegment {
    pub fn bends(&self) -> &[TropicalPoint] {
        &self.bends
    }

    pub fn source(&self) -> &TropicalPoint {
        &self.bends[0]
    }

    pub fn target(&self) -> &TropicalPoint {
        self.bends.last().expect("segment has at least one bend")
    }

    pub fn is_degenerate(&self) -> bool {
        self.bends.len() == 1
    }

    pub fn reversed(&self) -> TropicalSegment {
        let mut bends = self.bends.clone();
        bends.reverse();
        TropicalSegment { bends }
    }

    /// Euclidean lengths of the legs between consecutive canonical bends.
    pub fn leg_lengths(&self) -> Vec<f64> {
        self.bends
            .windows(2)
            .map(|w| euclidean(&w[0].0, &w[1].0))
            .collect()
    }

    /// Tropical lengths of the legs. They add up to the source-target distance.
    pub fn leg_tropical_lengths(&self) -> Vec<f64> {
        self.bends
            .windows(2)
            .map(|w| raw_distance(&w[0].0, &w[1].0))
            .collect()
    }

    pub fn euclidean_length(&self) -> f64 {
        self.leg_lengths().iter().sum()
    }

    pub fn tropical_length(&self) -> f64 {
        raw_distance(&self.source().0, &self.target().0)
    }

    /// Point at Euclidean arc length `s` from the source (clamped).
    pub fn point_at(&self, s: f64) -> TropicalPoint {
        let mut rest = s.max(0.0);
        for w in self.bends.windows(2) {
            let len = euclidean(&w[0].0, &w[1].0);
            if rest <= len && len > 0.0 {
                return lerp(&w[0], &w[1], rest / len);
            }
            rest -= len;
        }
        self.target().clone()
    }
}

pub(crate) fn lerp(a: &TropicalPoint, b: &TropicalPoint, t: f64) -> TropicalPoint {
    let coords = a
        .0
        .iter()
        .zip(&b.0)
        .map(|(x, y)| x + t * (y - x))
        .collect();
    TropicalPoint::from_raw_unchecked(coords)
}

fn check_raw(v: &[f64]) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::TooShort { len: v.len() });
    }
    if let Some(index) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn canonicalize(v: &mut [f64]) {
    let shift = v[0];
    for x in v.iter_mut() {
        *x -= shift;
    }
    // avoid -0.0 in output
    v[0] = 0.0;
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Tropical metric on raw vectors of equal length.
pub fn raw_distance(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for (a, b) in u.iter().zip(v) {
        let d = a - b;
        hi = hi.max(d);
        lo = lo.min(d);
    }
    hi - lo
}

/// Returns `v - v[0]·1`.
pub fn normalize_point(v: &[f64]) -> Result<TropicalPoint> {
    TropicalPoint::new(v.to_vec())
}

/// Canonicalizes every row independently, preserving row order.
pub fn normalize_matrix<R: AsRef<[f64]>>(rows: &[R]) -> Result<TropicalPolytope> {
    let first = rows.first().ok_or(Error::Empty)?.as_ref().len();
    let mut generators = Vec::with_capacity(rows.len());
    for (row, r) in rows.iter().enumerate() {
        let r = r.as_ref();
        if r.len() != first {
            return Err(Error::RaggedRows {
                row,
                expected: first,
                found: r.len(),
            });
        }
        generators.push(TropicalPoint::new(r.to_vec())?);
    }
    TropicalPolytope::new(generators)
}

/// `max_i(u_i - v_i) - min_i(u_i - v_i)`.
pub fn trop_distance(u: &TropicalPoint, v: &TropicalPoint) -> Result<f64> {
    check_dim(u.dim(), v.dim())?;
    Ok(raw_distance(&u.0, &v.0))
}

/// Coordinatewise `max_l(coeffs[l] + points[l])`, canonicalized.
pub fn trop_linear_combination(coeffs: &[f64], points: &[TropicalPoint]) -> Result<TropicalPoint> {
    let first = points.first().ok_or(Error::Empty)?;
    check_dim(points.len(), coeffs.len())?;
    let mut out = vec![f64::NEG_INFINITY; first.dim()];
    for (c, p) in coeffs.iter().zip(points) {
        p.check_dim(first.dim())?;
        for (o, x) in out.iter_mut().zip(&p.0) {
            *o = o.max(c + x);
        }
    }
    TropicalPoint::new(out)
}

/// Tropical determinant of a square matrix together with the optimal
/// assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Determinant {
    pub value: f64,
    /// `permutation[i]` is the row whose entry in column `i` enters the optimum.
    pub permutation: Vec<usize>,
    /// Rows reordered so that the optimal entries sit on the diagonal.
    pub reordered: Vec<Vec<f64>>,
}

/// Largest assignment size solved by exhaustive enumeration.
pub const EXHAUSTIVE_DET_LIMIT: usize = 8;

/// `max_σ Σ_i m[σ(i)][i]`. Ties resolve to the lexicographically smallest
/// permutation when the matrix is small enough for exhaustive search.
pub fn trop_det<R: AsRef<[f64]>>(m: &[R]) -> Result<Determinant> {
    let w = m.len();
    if w == 0 {
        return Err(Error::Empty);
    }
    for r in m {
        let r = r.as_ref();
        if r.len() != w {
            return Err(Error::NotSquare {
                rows: w,
                cols: r.len(),
            });
        }
        if let Some(index) = r.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
    }
    let rows: Vec<Vec<f64>> = m.iter().map(|r| r.as_ref().to_vec()).collect();
    let (value, permutation) = if w <= EXHAUSTIVE_DET_LIMIT {
        assignment::max_assignment_exhaustive(&rows)
    } else {
        assignment::max_assignment_hungarian(&rows)
    };
    let reordered = permutation.iter().map(|&r| rows[r].clone()).collect();
    Ok(Determinant {
        value,
        permutation,
        reordered,
    })
}

/// Tropical line segment between `u` and `v`, with bends ordered from `v`
/// (source) to `u` (target). Consecutive duplicate bends are dropped.
pub fn trop_segment(u: &TropicalPoint, v: &TropicalPoint) -> Result<TropicalSegment> {
    check_dim(u.dim(), v.dim())?;
    let mut levels: Vec<f64> = v.0.iter().zip(&u.0).map(|(a, b)| a - b).collect();
    levels.sort_by(f64::total_cmp);
    let mut bends: Vec<TropicalPoint> = Vec::with_capacity(levels.len());
    for c in levels {
        let raw: Vec<f64> = u.0.iter().zip(&v.0).map(|(a, b)| (c + a).max(*b)).collect();
        let p = TropicalPoint::from_raw_unchecked(raw);
        if bends.last().is_some_and(|q| q.approx_eq(&p, EQ_TOL)) {
            continue;
        }
        bends.push(p);
    }
    // pin the endpoints exactly
    bends[0] = v.clone();
    if bends.len() == 1 {
        if !u.approx_eq(v, EQ_TOL) {
            bends.push(u.clone());
        }
    } else {
        let last = bends.len() - 1;
        bends[last] = u.clone();
    }
    Ok(TropicalSegment { bends })
}

/// Writes `⊕_l λ_l ⊙ g_l` with `λ_l = min(x - g_l)` into `out` (not
/// canonicalized).
pub(crate) fn project_raw(generators: &[TropicalPoint], x: &[f64], out: &mut [f64]) {
    out.fill(f64::NEG_INFINITY);
    for g in generators {
        let lambda = x
            .iter()
            .zip(&g.0)
            .map(|(a, b)| a - b)
            .fold(f64::INFINITY, f64::min);
        for (o, gj) in out.iter_mut().zip(&g.0) {
            *o = o.max(lambda + gj);
        }
    }
}

/// Projection of `x` onto the tropical hull of `p`; a nearest hull point in
/// the tropical metric.
pub fn project_onto_polytope(p: &TropicalPolytope, x: &TropicalPoint) -> Result<TropicalPoint> {
    x.check_dim(p.dim())?;
    let mut out = vec![0.0; x.dim()];
    project_raw(&p.generators, &x.0, &mut out);
    Ok(TropicalPoint::from_raw_unchecked(out))
}

/// Distance from `v` to the hyperplane: the gap between the two largest
/// (max) or two smallest (min) entries of `v + normal`.
pub fn hyperplane_distance(h: &TropicalHyperplane, v: &TropicalPoint) -> Result<f64> {
    check_dim(h.normal.dim(), v.dim())?;
    let w: Vec<f64> = v.0.iter().zip(&h.normal.0).map(|(a, b)| a + b).collect();
    Ok(match h.algebra {
        Algebra::Max => {
            let (first, second) = top_two(w.iter().copied());
            first - second
        }
        Algebra::Min => {
            let (first, second) = top_two(w.iter().map(|x| -x));
            first - second
        }
    })
}

/// Largest and second-largest values (with multiplicity).
fn top_two(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut first = f64::NEG_INFINITY;
    let mut second = f64::NEG_INFINITY;
    for x in values {
        if x > first {
            second = first;
            first = x;
        } else if x > second {
            second = x;
        }
    }
    (first, second)
}
