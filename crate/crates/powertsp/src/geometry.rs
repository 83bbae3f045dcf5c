//! Points, powered distances, and the angle quantities the tour analysis is
//! phrased in.
//!
//! All coordinates and weights are double-precision floats. Inverse-cosine
//! inputs are clamped to `[-1, 1]` so that near-collinear configurations do
//! not produce NaN.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used by bound assertions throughout the crate,
/// consistent with double rounding over sums of up to ~10^6 terms.
pub const REL_TOL: f64 = 1e-9;

/// A point in `R^d`, `d >= 1`, with finite coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(coords));
        }
        Ok(Self { coords })
    }

    /// Convenience constructor for points in the plane.
    pub fn xy(x: f64, y: f64) -> Self {
        Self::new(vec![x, y]).expect("finite planar point")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Squared Euclidean distance. Panics on dimension mismatch; the public
    /// entry points check dimensions up front.
    pub(crate) fn sq_dist(&self, other: &Point) -> f64 {
        assert_eq!(self.dim(), other.dim(), "mixed-dimension points");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// The distance exponent: travel cost between `p` and `q` is `|pq|^alpha`.
///
/// Must be finite and positive. For `alpha > 1` the resulting cost function
/// is not a metric; it satisfies the relaxed triangle inequality with factor
/// `2^(alpha-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidAlpha(value));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Squared Euclidean distances, the headline case.
    pub const TWO: Alpha = Alpha(2.0);
}

impl TryFrom<f64> for Alpha {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

/// The smaller angle between two segments sharing an endpoint, together with
/// its supplement `psi = pi - angle`. Both lie in `[0, pi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnglePair {
    pub angle: f64,
    pub psi: f64,
}

/// An immutable problem instance: distinct points of equal dimension plus
/// the distance exponent.
#[derive(Clone, Debug)]
pub struct PointSet {
    dim: usize,
    alpha: Alpha,
    points: Vec<Point>,
}

impl PointSet {
    /// Validates dimensions and rejects coincident points: zero-length edges
    /// break the spanning-tree angle structure the tour builder relies on.
    pub fn new(points: Vec<Point>, alpha: Alpha) -> Result<Self> {
        let dim = match points.first() {
            Some(p) => p.dim(),
            None => return Err(Error::EmptyPointSet),
        };
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            points[a]
                .coords()
                .partial_cmp(points[b].coords())
                .expect("finite coordinates")
        });
        for w in order.windows(2) {
            if points[w[0]].coords() == points[w[1]].coords() {
                return Err(Error::DuplicatePoint(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(Self { dim, alpha, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Same points, different exponent.
    pub fn with_alpha(&self, alpha: Alpha) -> PointSet {
        PointSet {
            dim: self.dim,
            alpha,
            points: self.points.clone(),
        }
    }

    /// Powered distance between two points of this instance.
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.points[i].sq_dist(&self.points[j]).sqrt().powf(self.alpha.value())
    }

    /// Euclidean distance between two points of this instance.
    pub fn euclid(&self, i: usize, j: usize) -> f64 {
        self.points[i].sq_dist(&self.points[j]).sqrt()
    }
}

/// Standard Euclidean distance `|pq|`.
pub fn euclid_dist(p: &Point, q: &Point) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(p.sq_dist(q).sqrt())
}

/// Powered distance `|pq|^alpha`. Not a metric for `alpha > 1`.
pub fn power_dist(p: &Point, q: &Point, a: Alpha) -> Result<f64> {
    Ok(euclid_dist(p, q)?.powf(a.value()))
}

/// The smaller angle between segments `shared->u` and `shared->v`, paired
/// with its supplement.
pub fn angle_between(shared: &Point, u: &Point, v: &Point) -> Result<AnglePair> {
    if shared.dim() != u.dim() || shared.dim() != v.dim() {
        return Err(Error::DimensionMismatch(shared.dim(), u.dim().max(v.dim())));
    }
    let du: Vec<f64> = u
        .coords()
        .iter()
        .zip(shared.coords())
        .map(|(a, b)| a - b)
        .collect();
    let dv: Vec<f64> = v
        .coords()
        .iter()
        .zip(shared.coords())
        .map(|(a, b)| a - b)
        .collect();
    let nu = du.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = dv.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroLengthSegment);
    }
    let dot: f64 = du.iter().zip(&dv).map(|(a, b)| a * b).sum();
    let angle = (dot / (nu * nv)).clamp(-1.0, 1.0).acos();
    Ok(AnglePair {
        angle,
        psi: std::f64::consts::PI - angle,
    })
}

/// Side test for the three-shortcut cost identity: `+1` if `a_end` and
/// `c_end` lie strictly on the same side of the line through the directed
/// segment `b_from -> b_to`, `-1` if strictly on opposite sides.
///
/// Degenerate inputs (an endpoint on the line, within tolerance) return `+1`:
/// in that limit the two cases of the identity coincide, and fixing one sign
/// keeps results deterministic.
pub fn same_side(b_from: &Point, b_to: &Point, a_end: &Point, c_end: &Point) -> Result<i8> {
    for p in [b_from, b_to, a_end, c_end] {
        if p.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                expected: 2,
                got: p.dim(),
            });
        }
    }
    let (bx, by) = (b_from.coords()[0], b_from.coords()[1]);
    let dir = (b_to.coords()[0] - bx, b_to.coords()[1] - by);
    let dir_norm = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
    if dir_norm == 0.0 {
        return Err(Error::ZeroLengthSegment);
    }
    // Normalized cross products are the sines of the angles to the line, so
    // the degeneracy cutoff is scale-free.
    let side = |p: &Point| -> f64 {
        let v = (p.coords()[0] - bx, p.coords()[1] - by);
        let norm = (v.0 * v.0 + v.1 * v.1).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        (dir.0 * v.1 - dir.1 * v.0) / (dir_norm * norm)
    };
    let sa = side(a_end);
    let sc = side(c_end);
    const DEGENERATE: f64 = 1e-12;
    if sa.abs() <= DEGENERATE || sc.abs() <= DEGENERATE {
        return Ok(1);
    }
    Ok(if sa * sc > 0.0 { 1 } else { -1 })
}
