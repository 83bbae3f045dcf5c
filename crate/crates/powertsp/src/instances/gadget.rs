//! The hardness gadget: embeds a `{1,2}`-weighted complete graph `K_n` into
//! a 3-d point set whose revisit-allowed tour cost tracks the source tour
//! cost.
//!
//! Vertex `v_i` (1-based in the coordinates below) gets a vertical *spine*
//! from `(ni, ni, n)` to `(ni, ni, nm)`. Edge `e_k = v_i v_j` (`i < j`) gets
//! two *bones* at height `z = nk`: one from `(ni, ni, nk)` to `(nj, ni, nk)`,
//! the other from `(nj, nj, nk)` down to `(nj, ni + delta_k, nk)`, where
//! `delta_k` is 1 for weight-1 edges and `sqrt(2)` for weight-2 edges. The
//! bones stop short of each other: crossing the remaining gap costs exactly
//! `delta_k^2 = w(e_k)` under squared distances. Every segment is subdivided
//! into *cities* at a configurable density; stepping between adjacent cities
//! is nearly free, so jumps across gaps dominate the tour cost.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{brute_force_cycle, DistanceMatrix};
use crate::geometry::{Alpha, Point, PointSet};

/// Guard on the total number of generated cities.
pub const MAX_GADGET_CITIES: usize = 1_000_000;

/// Parameters of the gadget: the source graph size, the `{1,2}` weight of
/// every edge in canonical order (`(i,j)` pairs with `i < j`, lexicographic),
/// and the subdivision density in cities per unit length.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GadgetSpec {
    n: usize,
    weights: Vec<u8>,
    density: f64,
}

impl GadgetSpec {
    pub fn new(n: usize, weights: Vec<u8>, density: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::SizeOutOfRange {
                what: "gadget",
                n,
                min: 3,
                max: usize::MAX,
            });
        }
        let m = n * (n - 1) / 2;
        if weights.len() != m {
            return Err(Error::InvalidParameter(format!(
                "{} edge weights for K_{n}, expected {m}",
                weights.len()
            )));
        }
        if weights.iter().any(|&w| w != 1 && w != 2) {
            return Err(Error::InvalidParameter("edge weights must be 1 or 2".into()));
        }
        if !(density.is_finite() && density >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "density must be >= 1, got {density}"
            )));
        }
        Ok(GadgetSpec { n, weights, density })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u8] {
        &self.weights
    }

    pub fn weight(&self, k: usize) -> u8 {
        self.weights[k]
    }

    /// Gap length for edge `k`: 1 for weight 1, `sqrt(2)` for weight 2, so
    /// that the squared jump cost equals the weight.
    pub fn delta(&self, k: usize) -> f64 {
        match self.weights[k] {
            1 => 1.0,
            _ => std::f64::consts::SQRT_2,
        }
    }

    /// Endpoints `(i, j)` with `i < j` of canonical edge `k` (all 0-based).
    pub fn edge_endpoints(&self, k: usize) -> (usize, usize) {
        let mut k = k;
        for i in 0..self.n {
            let row = self.n - 1 - i;
            if k < row {
                return (i, i + 1 + k);
            }
            k -= row;
        }
        panic!("edge index out of range");
    }

    /// Canonical index of the edge `(i, j)`, `i != j`.
    pub fn edge_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        let before: usize = (0..i).map(|t| self.n - 1 - t).sum();
        before + (j - i - 1)
    }
}

/// Closest city pair across the gap of one source edge.
#[derive(Clone, Copy, Debug)]
pub struct GapInfo {
    /// Canonical source edge index.
    pub edge: usize,
    /// City on the lower-vertex cluster's bone.
    pub city_a: usize,
    /// City on the higher-vertex cluster's bone.
    pub city_b: usize,
    pub delta: f64,
}

/// A generated gadget instance: cities, their source-vertex cluster labels,
/// the gap registry, and the adjacency steps between neighboring cities.
#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub points: PointSet,
    /// City index -> source vertex (0-based).
    pub cluster: Vec<usize>,
    pub gaps: Vec<GapInfo>,
    /// Total length of all generated spine and bone segments.
    pub total_length: f64,
    /// Adjacent-city steps along the segments; per-cluster these form trees.
    pub adjacency: Vec<Vec<usize>>,
}

struct Segment {
    cluster: usize,
    from: [f64; 3],
    to: [f64; 3],
}

fn vertex_coord(n: usize, i: usize) -> f64 {
    (n * (i + 1)) as f64
}

fn level_coord(n: usize, k: usize) -> f64 {
    (n * (k + 1)) as f64
}

fn seg_len(s: &Segment) -> f64 {
    s.from
        .iter()
        .zip(&s.to)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn segments(spec: &GadgetSpec) -> Vec<Segment> {
    let n = spec.n();
    let m = spec.edge_count();
    let mut segs = Vec::new();
    // spines, split at bone attachment heights so junction cities land
    // exactly on subdivision points
    for i in 0..n {
        let x = vertex_coord(n, i);
        let mut zs: Vec<f64> = vec![level_coord(n, 0), level_coord(n, m - 1)];
        for k in 0..m {
            let (a, b) = spec.edge_endpoints(k);
            if a == i || b == i {
                zs.push(level_coord(n, k));
            }
        }
        zs.sort_by(|p, q| p.partial_cmp(q).unwrap());
        zs.dedup();
        for w in zs.windows(2) {
            if w[1] > w[0] {
                segs.push(Segment {
                    cluster: i,
                    from: [x, x, w[0]],
                    to: [x, x, w[1]],
                });
            }
        }
    }
    // bones
    for k in 0..m {
        let (i, j) = spec.edge_endpoints(k);
        let (xi, xj) = (vertex_coord(n, i), vertex_coord(n, j));
        let z = level_coord(n, k);
        segs.push(Segment {
            cluster: i,
            from: [xi, xi, z],
            to: [xj, xi, z],
        });
        segs.push(Segment {
            cluster: j,
            from: [xj, xj, z],
            to: [xj, xi + spec.delta(k), z],
        });
    }
    segs
}

/// Builds the gadget instance: every segment subdivided with spacing at most
/// `1/density`, segment endpoints placed exactly, duplicate junction cities
/// merged.
pub fn build_gadget(spec: &GadgetSpec) -> Result<GadgetInstance> {
    let segs = segments(spec);
    let total_length: f64 = segs.iter().map(seg_len).sum();
    let estimated: usize = segs
        .iter()
        .map(|s| (seg_len(s) * spec.density()).ceil() as usize + 1)
        .sum();
    if estimated > MAX_GADGET_CITIES {
        return Err(Error::InvalidParameter(format!(
            "gadget would generate ~{estimated} cities, guard is {MAX_GADGET_CITIES}"
        )));
    }

    let mut index: HashMap<[u64; 3], usize> = HashMap::with_capacity(estimated);
    let mut points: Vec<Point> = Vec::with_capacity(estimated);
    let mut cluster: Vec<usize> = Vec::with_capacity(estimated);
    let mut adjacency: Vec<Vec<usize>> = Vec::with_capacity(estimated);

    let mut city_at = |coord: [f64; 3], clu: usize,
                       points: &mut Vec<Point>,
                       cluster: &mut Vec<usize>,
                       adjacency: &mut Vec<Vec<usize>>|
     -> usize {
        let key = [coord[0].to_bits(), coord[1].to_bits(), coord[2].to_bits()];
        *index.entry(key).or_insert_with(|| {
            points.push(Point::new(coord.to_vec()).expect("finite gadget coordinate"));
            cluster.push(clu);
            adjacency.push(Vec::new());
            points.len() - 1
        })
    };

    for seg in &segs {
        let len = seg_len(seg);
        let steps = ((len * spec.density()).ceil() as usize).max(1);
        let mut prev: Option<usize> = None;
        for t in 0..=steps {
            let f = t as f64 / steps as f64;
            let coord = [
                seg.from[0] * (1.0 - f) + seg.to[0] * f,
                seg.from[1] * (1.0 - f) + seg.to[1] * f,
                seg.from[2] * (1.0 - f) + seg.to[2] * f,
            ];
            let id = city_at(coord, seg.cluster, &mut points, &mut cluster, &mut adjacency);
            if let Some(p) = prev {
                if p != id {
                    adjacency[p].push(id);
                    adjacency[id].push(p);
                }
            }
            prev = Some(id);
        }
    }

    let n = spec.n();
    let mut gaps = Vec::with_capacity(spec.edge_count());
    for k in 0..spec.edge_count() {
        let (i, j) = spec.edge_endpoints(k);
        let (xi, xj) = (vertex_coord(n, i), vertex_coord(n, j));
        let z = level_coord(n, k);
        let a_key = [xj.to_bits(), xi.to_bits(), z.to_bits()];
        let b_key = [xj.to_bits(), (xi + spec.delta(k)).to_bits(), z.to_bits()];
        let city_a = *index.get(&a_key).expect("bone endpoint city");
        let city_b = *index.get(&b_key).expect("bone endpoint city");
        gaps.push(GapInfo {
            edge: k,
            city_a,
            city_b,
            delta: spec.delta(k),
        });
    }

    Ok(GadgetInstance {
        points: PointSet::new(points, Alpha::TWO)?,
        cluster,
        gaps,
        total_length,
        adjacency,
    })
}

/// Cost of stepping through every adjacent-city step twice, i.e. a full
/// doubled traversal of all clusters. Stays below `4 * total_length /
/// density` at squared distances.
pub fn double_traversal_cost(inst: &GadgetInstance) -> f64 {
    let mut cost = 0.0;
    for (a, neighbors) in inst.adjacency.iter().enumerate() {
        for &b in neighbors {
            if b > a {
                cost += inst.points.cost(a, b);
            }
        }
    }
    2.0 * cost
}

/// Walk the whole cluster starting at `entry` and ending at `exit`: a
/// doubled depth-first traversal of the cluster tree plus the direct tree
/// path from entry to exit.
fn cluster_walk_cost(inst: &GadgetInstance, cluster_id: usize, entry: usize, exit: usize) -> f64 {
    let points = &inst.points;
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut visited = 0usize;
    let mut edge_cost = 0.0;
    let mut stack = vec![entry];
    parent.insert(entry, entry);
    while let Some(v) = stack.pop() {
        visited += 1;
        for &w in &inst.adjacency[v] {
            if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(w) {
                slot.insert(v);
                edge_cost += points.cost(v, w);
                stack.push(w);
            }
        }
    }
    let cluster_size = inst.cluster.iter().filter(|&&c| c == cluster_id).count();
    assert_eq!(visited, cluster_size, "cluster {cluster_id} is connected");
    let mut path_cost = 0.0;
    let mut at = exit;
    while at != entry {
        let p = parent[&at];
        path_cost += points.cost(at, p);
        at = p;
    }
    2.0 * edge_cost + path_cost
}

/// Outcome of the cost-correspondence verification.
#[derive(Clone, Debug)]
pub struct GadgetCostReport {
    /// Cost of the constructed cluster-following walk through the gadget.
    pub gadget_tour_cost: f64,
    /// Brute-forced optimum of the source `{1,2}`-TSP: `n + ell`.
    pub source_opt: f64,
    /// Number of weight-2 edges in the optimal source tour.
    pub ell: f64,
    /// Gap-jump portion of the gadget tour.
    pub jump_cost: f64,
    /// Intra-cluster portion of the gadget tour.
    pub intra_cost: f64,
    /// `4 * total_length / density`, the allowed intra-cluster overhead.
    pub slack_budget: f64,
    pub total_length: f64,
    pub source_order: Vec<usize>,
}

/// Solves the source `{1,2}`-TSP exactly, follows the optimal source tour
/// through the gadget (full cluster walk, then jump across the gap of the
/// tour edge), and reports both costs. The constructed walk costs at most
/// `source_opt + slack_budget`.
pub fn gadget_cost_correspondence(spec: &GadgetSpec) -> Result<GadgetCostReport> {
    if spec.n() > 5 {
        return Err(Error::SizeOutOfRange {
            what: "gadget_cost_correspondence",
            n: spec.n(),
            min: 3,
            max: 5,
        });
    }
    let n = spec.n();
    let source =
        DistanceMatrix::from_fn(n, |i, j| f64::from(spec.weight(spec.edge_index(i, j))))?;
    let (source_opt, source_order) = brute_force_cycle(&source)?;
    let inst = build_gadget(spec)?;

    let gap_of = |u: usize, v: usize| &inst.gaps[spec.edge_index(u, v)];
    let side_city = |u: usize, v: usize, side: usize| {
        let gap = gap_of(u, v);
        let (i, _) = spec.edge_endpoints(gap.edge);
        if side == i {
            gap.city_a
        } else {
            gap.city_b
        }
    };

    let mut intra_cost = 0.0;
    let mut jump_cost = 0.0;
    for t in 0..n {
        let prev = source_order[(t + n - 1) % n];
        let cur = source_order[t];
        let next = source_order[(t + 1) % n];
        let entry = side_city(prev, cur, cur);
        let exit = side_city(cur, next, cur);
        intra_cost += cluster_walk_cost(&inst, cur, entry, exit);
        jump_cost += inst.points.cost(exit, side_city(cur, next, next));
    }

    Ok(GadgetCostReport {
        gadget_tour_cost: intra_cost + jump_cost,
        source_opt,
        ell: source_opt - n as f64,
        jump_cost,
        intra_cost,
        slack_budget: 4.0 * inst.total_length / spec.density(),
        total_length: inst.total_length,
        source_order,
    })
}
