//! Euclidean minimum spanning trees.
//!
//! Because `x -> x^alpha` is monotone, the MST under `|.|^alpha` is the MST
//! under plain Euclidean lengths for every `alpha > 0`, so construction
//! always compares Euclidean lengths and only the stored edge weights depend
//! on the exponent. The total powered weight of the tree is a lower bound on
//! the optimal tour cost: removing any edge from a tour leaves a spanning
//! tree.

use crate::geometry::PointSet;

/// One tree edge with both its Euclidean length and its powered weight.
#[derive(Clone, Debug)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub euclid_len: f64,
    pub alpha_weight: f64,
}

/// A spanning tree in adjacency form. Edges are stored normalized
/// (`u < v`) and sorted lexicographically, so edge ids are stable for a
/// given instance and adjacency lists are ordered by neighbor id.
#[derive(Clone, Debug)]
pub struct Tree {
    n: usize,
    edges: Vec<TreeEdge>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Tree {
    fn from_pairs(points: &PointSet, mut pairs: Vec<(usize, usize)>) -> Tree {
        let n = points.len();
        for p in &mut pairs {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        let alpha = points.alpha().value();
        let edges: Vec<TreeEdge> = pairs
            .iter()
            .map(|&(u, v)| {
                let len = points.euclid(u, v);
                TreeEdge {
                    u,
                    v,
                    euclid_len: len,
                    alpha_weight: len.powf(alpha),
                }
            })
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Tree { n, edges, adjacency }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &TreeEdge {
        &self.edges[id]
    }

    /// `(neighbor, edge id)` pairs, sorted by neighbor id.
    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn other_endpoint(&self, edge_id: usize, v: usize) -> usize {
        let e = &self.edges[edge_id];
        if e.u == v {
            e.v
        } else {
            debug_assert_eq!(e.v, v);
            e.u
        }
    }

    /// Sum of powered edge weights.
    pub fn total_alpha_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.alpha_weight).sum()
    }

    /// Smallest angle over all pairs of edges sharing an endpoint, `pi` for
    /// trees without such a pair. For a Euclidean MST this is at least
    /// `pi/3`.
    pub fn min_adjacent_angle(&self, points: &PointSet) -> f64 {
        let mut min = std::f64::consts::PI;
        for v in 0..self.n {
            let adj = &self.adjacency[v];
            for i in 0..adj.len() {
                for j in i + 1..adj.len() {
                    let pair = crate::geometry::angle_between(
                        points.point(v),
                        points.point(adj[i].0),
                        points.point(adj[j].0),
                    )
                    .expect("distinct points");
                    min = min.min(pair.angle);
                }
            }
        }
        min
    }
}

/// Builds the MST with a dense `O(n^2)` Prim scan.
///
/// Ties between equal-length candidate edges are broken toward the smaller
/// `(min(u,v), max(u,v))` pair, which makes the tree reproducible on
/// symmetric inputs such as grids.
pub fn build_mst(points: &PointSet) -> Tree {
    let n = points.len();
    if n == 1 {
        return Tree::from_pairs(points, Vec::new());
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut from = vec![0usize; n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = points.euclid(0, v);
    }
    let mut pairs = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut pick = usize::MAX;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            if pick == usize::MAX
                || best[v] < best[pick]
                || (best[v] == best[pick] && key(from[v], v) < key(from[pick], pick))
            {
                pick = v;
            }
        }
        in_tree[pick] = true;
        pairs.push((from[pick], pick));
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let d = points.euclid(pick, v);
            if d < best[v] || (d == best[v] && key(pick, v) < key(from[v], v)) {
                best[v] = d;
                from[v] = pick;
            }
        }
    }
    Tree::from_pairs(points, pairs)
}

/// Total powered weight of the MST: a lower bound for the optimal tour.
pub fn mst_lower_bound(points: &PointSet) -> f64 {
    build_mst(points).total_alpha_weight()
}

/// Validation helper: connected, acyclic shape plus the weight consistency
/// `alpha_weight = euclid_len^alpha`. Returns violation descriptions.
pub fn check_tree_invariants(points: &PointSet, tree: &Tree) -> Vec<String> {
    let mut bad = Vec::new();
    let n = tree.n();
    if n != points.len() {
        bad.push(format!("tree has {} vertices, instance {}", n, points.len()));
        return bad;
    }
    if n >= 1 && tree.edges().len() != n - 1 {
        bad.push(format!("tree has {} edges, expected {}", tree.edges().len(), n - 1));
    }
    // connectivity by BFS
    let mut seen = vec![false; n];
    let mut queue = vec![0usize];
    seen[0] = true;
    while let Some(v) = queue.pop() {
        for &(w, _) in tree.adjacency(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        bad.push("tree is not connected".into());
    }
    let alpha = points.alpha().value();
    for (id, e) in tree.edges().iter().enumerate() {
        let len = points.euclid(e.u, e.v);
        let w = len.powf(alpha);
        if (e.alpha_weight - w).abs() > 1e-12 * w.max(1.0) {
            bad.push(format!("edge {id} weight {} != len^alpha {}", e.alpha_weight, w));
        }
    }
    bad
}

/// Checks the MST angle property: edges sharing an endpoint make an angle of
/// at least `pi/3` (up to tolerance).
pub fn check_angle_property(points: &PointSet, tree: &Tree) -> Option<String> {
    let min = tree.min_adjacent_angle(points);
    let floor = std::f64::consts::FRAC_PI_3 - 1e-9;
    if min < floor {
        Some(format!("adjacent tree edges at angle {min} < pi/3"))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Alpha, Point, PointSet};

    fn set(points: Vec<Point>) -> PointSet {
        PointSet::new(points, Alpha::TWO).unwrap()
    }

    fn collinear(n: usize) -> PointSet {
        set((0..n).map(|i| Point::xy(i as f64, 0.0)).collect())
    }

    #[test]
    fn collinear_path_mst() {
        let ps = collinear(4);
        let tree = build_mst(&ps);
        let pairs: Vec<(usize, usize)> = tree.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(tree.total_alpha_weight(), 3.0);
        assert_eq!(mst_lower_bound(&ps), 3.0);
    }

    #[test]
    fn unit_square_tie_broken_deterministically() {
        let ps = set(vec![
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(1.0, 1.0),
            Point::xy(0.0, 1.0),
        ]);
        let tree = build_mst(&ps);
        assert_eq!(tree.edges().len(), 3);
        for e in tree.edges() {
            assert!((e.euclid_len - 1.0).abs() < 1e-15, "unit edges only");
        }
        assert!((tree.total_alpha_weight() - 3.0).abs() < 1e-15);
        // Lexicographic preference among the four unit edges.
        let pairs: Vec<(usize, usize)> = tree.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 3), (1, 2)]);
    }

    #[test]
    fn single_point_has_empty_tree() {
        let ps = set(vec![Point::xy(3.0, 7.0)]);
        let tree = build_mst(&ps);
        assert_eq!(tree.n(), 1);
        assert!(tree.edges().is_empty());
        assert_eq!(mst_lower_bound(&ps), 0.0);
    }

    #[test]
    fn mst_edge_set_invariant_under_alpha() {
        let ps = crate::instances::gen_random(40, 2, Alpha::TWO, 11);
        let base: Vec<(usize, usize)> = build_mst(&ps).edges().iter().map(|e| (e.u, e.v)).collect();
        for a in [1.0, 3.0] {
            let other = ps.with_alpha(Alpha::new(a).unwrap());
            let pairs: Vec<(usize, usize)> =
                build_mst(&other).edges().iter().map(|e| (e.u, e.v)).collect();
            assert_eq!(base, pairs);
        }
    }

    #[test]
    fn tree_invariants_hold_on_random_instances() {
        for seed in 0..20 {
            let ps = crate::instances::gen_random(30, 2, Alpha::TWO, seed);
            let tree = build_mst(&ps);
            assert!(check_tree_invariants(&ps, &tree).is_empty());
            assert!(check_angle_property(&ps, &tree).is_none());
        }
    }
}
