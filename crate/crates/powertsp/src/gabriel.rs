//! The Gabriel graph and the two-leg replacement rule that makes it
//! sufficient for revisit-allowed tours at `alpha >= 2`.
//!
//! An edge `pq` is present iff the open disk with diameter `pq` contains no
//! other input point, i.e. every other point sees `pq` under an angle of at
//! most `pi/2`. A witness exactly on the disk boundary keeps the edge.

use crate::error::{Error, Result};
use crate::geometry::{angle_between, power_dist, Alpha, Point, PointSet, REL_TOL};
use crate::spanning::Tree;

#[derive(Clone, Debug)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Simple undirected graph with positive edge weights.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<GraphEdge>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl WeightedGraph {
    pub fn new(n: usize, edge_list: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for (u, v, weight) in edge_list {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) weight {weight} must be positive and finite"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("parallel edge ({u},{v})")));
            }
            let id = edges.len();
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
            edges.push(GraphEdge { u, v, weight });
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(WeightedGraph { n, edges, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].iter().any(|&(w, _)| w == v)
    }
}

/// Complete graph under the instance's powered distances.
pub fn complete_graph(points: &PointSet) -> WeightedGraph {
    let n = points.len();
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v, points.cost(u, v)));
        }
    }
    WeightedGraph::new(n, edges).expect("distinct points give positive weights")
}

/// Builds the Gabriel graph of a planar instance, edge weights
/// `|pq|^alpha`. Naive `O(n^3)` witness scan.
pub fn build_gabriel(points: &PointSet) -> Result<WeightedGraph> {
    if points.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            got: points.dim(),
        });
    }
    let n = points.len();
    let threshold = std::f64::consts::FRAC_PI_2 + 1e-12;
    let mut edges = Vec::new();
    for p in 0..n {
        for q in (p + 1)..n {
            let mut keep = true;
            for r in 0..n {
                if r == p || r == q {
                    continue;
                }
                let pair = angle_between(points.point(r), points.point(p), points.point(q))
                    .expect("distinct instance points");
                if pair.angle > threshold {
                    keep = false;
                    break;
                }
            }
            if keep {
                edges.push((p, q, points.cost(p, q)));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

/// Two-leg replacement predicate: whenever the angle at `r` over `pq` is at
/// least `pi/2`, routing through `r` is no more expensive, i.e.
/// `|pr|^alpha + |rq|^alpha <= |pq|^alpha`. Returns whether that implication
/// held for the given triple; requires `alpha >= 2`.
pub fn two_leg_replacement_check(p: &Point, r: &Point, q: &Point, a: Alpha) -> Result<bool> {
    if a.value() < 2.0 {
        return Err(Error::AlphaOutOfScope {
            what: "two_leg_replacement_check",
            alpha: a.value(),
            min: 2.0,
        });
    }
    let pair = angle_between(r, p, q)?;
    if pair.angle < std::f64::consts::FRAC_PI_2 {
        return Ok(true);
    }
    let direct = power_dist(p, q, a)?;
    let detour = power_dist(p, r, a)? + power_dist(r, q, a)?;
    Ok(detour <= direct + REL_TOL * direct.max(1.0))
}

/// Every MST edge is a Gabriel edge; returns the offenders.
pub fn mst_containment_violations(tree: &Tree, gabriel: &WeightedGraph) -> Vec<String> {
    tree.edges()
        .iter()
        .filter(|e| !gabriel.has_edge(e.u, e.v))
        .map(|e| format!("tree edge ({},{}) missing from the Gabriel graph", e.u, e.v))
        .collect()
}

fn orient(a: &Point, b: &Point, c: &Point) -> f64 {
    let (ax, ay) = (a.coords()[0], a.coords()[1]);
    let (bx, by) = (b.coords()[0], b.coords()[1]);
    let (cx, cy) = (c.coords()[0], c.coords()[1]);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Strict interior crossing test for two planar segments. Shared endpoints
/// and collinear touching do not count.
pub fn segments_properly_cross(p1: &Point, p2: &Point, q1: &Point, q2: &Point) -> bool {
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Planarity evidence at desk scale: the edge count respects `3n - 6` and no
/// two edges properly cross (`O(m^2)` sweep).
pub fn planarity_violations(points: &PointSet, g: &WeightedGraph) -> Vec<String> {
    let mut bad = Vec::new();
    let n = g.n();
    if n >= 3 && g.edges().len() > 3 * n - 6 {
        bad.push(format!("{} edges exceed the planar budget {}", g.edges().len(), 3 * n - 6));
    }
    let edges = g.edges();
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            let (a, b) = (&edges[i], &edges[j]);
            if a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v {
                continue;
            }
            if segments_properly_cross(
                points.point(a.u),
                points.point(a.v),
                points.point(b.u),
                points.point(b.v),
            ) {
                bad.push(format!(
                    "edges ({},{}) and ({},{}) cross",
                    a.u, a.v, b.u, b.v
                ));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Alpha, Point, PointSet};
    use crate::instances;
    use crate::spanning::build_mst;

    fn planar(points: Vec<Point>) -> PointSet {
        PointSet::new(points, Alpha::TWO).unwrap()
    }

    #[test]
    fn two_points_have_one_edge() {
        let ps = planar(vec![Point::xy(0.0, 0.0), Point::xy(3.0, 0.0)]);
        let g = build_gabriel(&ps).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].weight, 9.0);
    }

    #[test]
    fn witness_inside_disk_removes_the_edge() {
        let ps = planar(vec![
            Point::xy(0.0, 0.0),
            Point::xy(2.0, 0.0),
            Point::xy(1.0, 0.5),
        ]);
        let g = build_gabriel(&ps).unwrap();
        assert!(!g.has_edge(0, 1), "witness sits inside the diameter disk");
        assert!(g.has_edge(0, 2));
        assert!(g.has_edge(1, 2));
    }

    #[test]
    fn square_keeps_sides_and_boundary_diagonals() {
        // each diagonal sees the other two corners at exactly pi/2, and the
        // boundary convention keeps the edge
        let ps = planar(vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(1.0, 1.0),
            Point::xy(0.0, 1.0),
        ]);
        let g = build_gabriel(&ps).unwrap();
        assert_eq!(g.edges().len(), 6);
        assert!(g.has_edge(0, 2));
        assert!(g.has_edge(1, 3));
    }

    #[test]
    fn replacement_predicate_examples() {
        let r = Point::xy(0.0, 0.0);
        let p = Point::xy(1.0, 0.0);
        let q = Point::xy(0.0, 1.0);
        assert!(two_leg_replacement_check(&p, &r, &q, Alpha::TWO).unwrap());
        let a3 = Alpha::new(3.0).unwrap();
        assert!(two_leg_replacement_check(&p, &r, &q, a3).unwrap());
        assert!(matches!(
            two_leg_replacement_check(&p, &r, &q, Alpha::new(1.5).unwrap()),
            Err(Error::AlphaOutOfScope { .. })
        ));
    }

    #[test]
    fn replacement_holds_on_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100_000 {
            let pts: Vec<Point> = (0..3)
                .map(|_| Point::xy(rng.random::<f64>() * 2.0, rng.random::<f64>() * 2.0))
                .collect();
            for alpha in [2.0, 3.0] {
                let a = Alpha::new(alpha).unwrap();
                match two_leg_replacement_check(&pts[0], &pts[1], &pts[2], a) {
                    Ok(held) => assert!(held),
                    Err(_) => continue, // coincident sample
                }
            }
        }
    }

    #[test]
    fn mst_is_contained_and_graph_is_planar() {
        for seed in 0..10u64 {
            let ps = instances::gen_random(60, 2, Alpha::TWO, 2000 + seed);
            let g = build_gabriel(&ps).unwrap();
            let tree = build_mst(&ps);
            assert!(mst_containment_violations(&tree, &g).is_empty());
            assert!(planarity_violations(&ps, &g).is_empty());
        }
    }

    #[test]
    fn rejects_non_planar_input() {
        let ps = PointSet::new(
            vec![
                Point::new(vec![0.0, 0.0, 0.0]).unwrap(),
                Point::new(vec![1.0, 0.0, 0.0]).unwrap(),
            ],
            Alpha::TWO,
        )
        .unwrap();
        assert!(matches!(
            build_gabriel(&ps),
            Err(Error::UnsupportedDimension { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn crossing_test_basics() {
        let a = Point::xy(0.0, 0.0);
        let b = Point::xy(2.0, 2.0);
        let c = Point::xy(0.0, 2.0);
        let d = Point::xy(2.0, 0.0);
        assert!(segments_properly_cross(&a, &b, &c, &d));
        assert!(!segments_properly_cross(&a, &c, &b, &d));
        // shared endpoint is not a proper crossing
        assert!(!segments_properly_cross(&a, &b, &a, &d));
    }
}
