//! Numeric counterparts of the cost inequalities behind the tour bounds:
//! the relaxed triangle inequality factor, the k-shortcut bound, the exact
//! trigonometric cost of a 3-shortcut, and per-edge cost accounting.

use crate::error::{Error, Result};
use crate::geometry::{angle_between, same_side, Alpha, Point, PointSet};
use crate::spanning::Tree;
use crate::tour::Tour;

/// The powered distance satisfies the relaxed triangle inequality
/// `d(p,r) <= tau * (d(p,q) + d(q,r))` with `tau = 2^(alpha-1)`.
pub fn relaxed_triangle_tau(a: Alpha) -> f64 {
    2f64.powf(a.value() - 1.0)
}

/// Upper bound on the powered length of a k-shortcut in terms of the tree
/// edges it uses: `k^(alpha-1) * sum(|e_i|^alpha)`. Requires `alpha >= 1`.
pub fn k_shortcut_bound(edge_lengths: &[f64], a: Alpha) -> Result<f64> {
    if a.value() < 1.0 {
        return Err(Error::AlphaOutOfScope {
            what: "k_shortcut_bound",
            alpha: a.value(),
            min: 1.0,
        });
    }
    if edge_lengths.is_empty() || edge_lengths.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
        return Err(Error::InvalidParameter(
            "k_shortcut_bound needs a nonempty list of positive lengths".into(),
        ));
    }
    let k = edge_lengths.len() as f64;
    let sum: f64 = edge_lengths.iter().map(|&l| l.powf(a.value())).sum();
    Ok(k.powf(a.value() - 1.0) * sum)
}

/// A 3-shortcut `s(a,b,c)` in the plane: three consecutive directed segments
/// with their lengths, the supplement angles at the two interior vertices,
/// and the side sign of the outer endpoints relative to the middle segment.
#[derive(Clone, Copy, Debug)]
pub struct ShortcutGeometry {
    pub len_a: f64,
    pub len_b: f64,
    pub len_c: f64,
    pub psi_ba: f64,
    pub psi_bc: f64,
    pub delta: i8,
}

impl ShortcutGeometry {
    /// Builds the geometry of the chain `p0 -> p1 -> p2 -> p3` (segments
    /// `a = p0p1`, `b = p1p2`, `c = p2p3`). Planar points only.
    pub fn from_chain(p0: &Point, p1: &Point, p2: &Point, p3: &Point) -> Result<Self> {
        for p in [p0, p1, p2, p3] {
            if p.dim() != 2 {
                return Err(Error::UnsupportedDimension {
                    expected: 2,
                    got: p.dim(),
                });
            }
        }
        let len_a = crate::geometry::euclid_dist(p0, p1)?;
        let len_b = crate::geometry::euclid_dist(p1, p2)?;
        let len_c = crate::geometry::euclid_dist(p2, p3)?;
        if len_a == 0.0 || len_b == 0.0 || len_c == 0.0 {
            return Err(Error::ZeroLengthSegment);
        }
        Ok(ShortcutGeometry {
            len_a,
            len_b,
            len_c,
            psi_ba: angle_between(p1, p0, p2)?.psi,
            psi_bc: angle_between(p2, p1, p3)?.psi,
            delta: same_side(p1, p2, p0, p3)?,
        })
    }
}

/// Exact squared length of a 3-shortcut from its edge lengths and angles:
///
/// `|a|^2 + |b|^2 + |c|^2 + 2|a||b|cos(psi_ba) + 2|b||c|cos(psi_bc)
///  + 2|a||c|cos(psi_ba + delta * psi_bc)`.
///
/// This equals the squared distance between the chain's endpoints.
pub fn three_shortcut_weight_formula(g: &ShortcutGeometry) -> f64 {
    g.len_a * g.len_a
        + g.len_b * g.len_b
        + g.len_c * g.len_c
        + 2.0 * g.len_a * g.len_b * g.psi_ba.cos()
        + 2.0 * g.len_b * g.len_c * g.psi_bc.cos()
        + 2.0 * g.len_a * g.len_c * (g.psi_ba + f64::from(g.delta) * g.psi_bc).cos()
}

/// Side-independent upper bound on the squared 3-shortcut length:
/// `2|a|^2 + |b|^2 + 2|c|^2 + 2|a||b|cos(psi_ba) + 2|b||c|cos(psi_bc)`.
pub fn three_shortcut_upper_bound(g: &ShortcutGeometry) -> f64 {
    2.0 * g.len_a * g.len_a
        + g.len_b * g.len_b
        + 2.0 * g.len_c * g.len_c
        + 2.0 * g.len_a * g.len_b * g.psi_ba.cos()
        + 2.0 * g.len_b * g.len_c * g.psi_bc.cos()
}

/// Young's inequality upper bound: `x*y <= x^2/(2*eps) + y^2*eps/2` for
/// `eps > 0`. Exposed as a support predicate for the property suites.
pub fn young_upper_bound(x: f64, y: f64, eps: f64) -> f64 {
    x * x / (2.0 * eps) + y * y * eps / 2.0
}

/// Cost share attributed to one tree edge across the legs that use it.
#[derive(Clone, Copy, Debug)]
pub struct EdgeContribution {
    pub edge: usize,
    /// Total cost share, summing to the tour cost across all edges.
    pub contrib: f64,
    /// `contrib / |edge|^alpha`.
    pub ratio: f64,
}

/// Splits every leg's cost over the tree edges it uses, proportionally to
/// the k-shortcut bound terms `k^(alpha-1) |e_i|^alpha`. Shares of one leg
/// sum to the leg's cost, so contributions sum to the tour cost, and on the
/// collinear tight cases each edge's ratio reaches the analytic per-edge
/// ceiling.
pub fn edge_contributions(points: &PointSet, tree: &Tree, tour: &Tour) -> Vec<EdgeContribution> {
    let alpha = points.alpha().value();
    let mut contrib = vec![0.0f64; tree.edges().len()];
    for leg in &tour.legs {
        let cost = points.cost(leg.from, leg.to);
        let k = leg.edges.len() as f64;
        let k_pow = k.powf(alpha - 1.0);
        let terms: Vec<f64> = leg
            .edges
            .iter()
            .map(|&e| k_pow * tree.edge(e).alpha_weight)
            .collect();
        let bound: f64 = terms.iter().sum();
        if bound <= 0.0 {
            continue;
        }
        let scale = cost / bound;
        for (&e, &term) in leg.edges.iter().zip(&terms) {
            contrib[e] += term * scale;
        }
    }
    contrib
        .into_iter()
        .enumerate()
        .map(|(edge, c)| EdgeContribution {
            edge,
            contrib: c,
            ratio: c / tree.edge(edge).alpha_weight,
        })
        .collect()
}

/// The angle envelope `(2 + cos x)^k + (2 + sin^2(x/2))^k` that caps the
/// per-edge contribution of an edge shared by two 3-shortcuts, as a function
/// of the inter-shortcut supplement angle.
pub fn angle_envelope(k: f64, x: f64) -> f64 {
    (2.0 + x.cos()).powf(k) + (2.0 + (x / 2.0).sin().powi(2)).powf(k)
}

/// Evaluates the angle envelope on a uniform grid over `[0, 2*pi]` and
/// returns `(argmax, max)`. For every `k >= 1` the maximum sits at `x = 0`,
/// which pins the closed-form constant in the planar cost bound.
pub fn angle_envelope_argmax(k: f64, resolution: usize) -> Result<(f64, f64)> {
    if k < 1.0 {
        return Err(Error::AlphaOutOfScope {
            what: "angle_envelope_argmax",
            alpha: k,
            min: 1.0,
        });
    }
    if resolution < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points".into()));
    }
    let mut best_x = 0.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..resolution {
        let x = 2.0 * std::f64::consts::PI * i as f64 / (resolution - 1) as f64;
        let v = angle_envelope(k, x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    Ok((best_x, best))
}
