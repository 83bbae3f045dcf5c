//! Exact oracles: Held–Karp dynamic programming, brute-force enumeration,
//! and exact revisit-allowed tours via metric closure.

use crate::error::{Error, Result};
use crate::gabriel::{build_gabriel, complete_graph, WeightedGraph};
use crate::geometry::PointSet;

/// Held–Karp is capped so the DP table stays below ~1 GB.
pub const HELD_KARP_MAX: usize = 22;
/// Brute force enumerates `(n-1)!/2` cycles.
pub const BRUTE_FORCE_MAX: usize = 10;

/// Symmetric nonnegative pairwise costs with a zero diagonal.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        let m = DistanceMatrix { n, d: entries };
        for i in 0..n {
            if m.get(i, i) != 0.0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let v = m.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidMatrix(format!("bad entry at ({i},{j}): {v}")));
                }
                if v != m.get(j, i) {
                    return Err(Error::InvalidMatrix(format!("asymmetry at ({i},{j})")));
                }
            }
        }
        Ok(m)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        DistanceMatrix::new(n, d)
    }

    /// Pairwise powered distances of an instance.
    pub fn from_point_set(points: &PointSet) -> DistanceMatrix {
        let n = points.len();
        DistanceMatrix::from_fn(n, |i, j| points.cost(i, j)).expect("valid by construction")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn cycle_cost(&self, order: &[usize]) -> f64 {
        let n = order.len();
        (0..n).map(|i| self.get(order[i], order[(i + 1) % n])).sum()
    }
}

/// Exact minimum Hamiltonian cycle by subset dynamic programming,
/// `O(2^n * n^2)` time. Returns the cost and one optimal order starting at
/// vertex 0, deterministic under ties (states are scanned in index order and
/// only strict improvements are kept).
pub fn held_karp(m: &DistanceMatrix) -> Result<(f64, Vec<usize>)> {
    let n = m.n();
    if !(2..=HELD_KARP_MAX).contains(&n) {
        return Err(Error::SizeOutOfRange {
            what: "held_karp",
            n,
            min: 2,
            max: HELD_KARP_MAX,
        });
    }
    let size = 1usize << n;
    let mut dp = vec![f64::INFINITY; size * n];
    let mut parent = vec![u8::MAX; size * n];
    dp[n] = 0.0; // mask {0}, at vertex 0: index 1*n + 0
    for mask in 1..size {
        if mask & 1 == 0 {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) == 0 {
                continue;
            }
            let cur = dp[mask * n + v];
            if !cur.is_finite() {
                continue;
            }
            for w in 0..n {
                if mask & (1 << w) != 0 {
                    continue;
                }
                let next = mask | (1 << w);
                let cand = cur + m.get(v, w);
                if cand < dp[next * n + w] {
                    dp[next * n + w] = cand;
                    parent[next * n + w] = v as u8;
                }
            }
        }
    }
    let full = size - 1;
    let mut best_cost = f64::INFINITY;
    let mut best_end = 1usize;
    for v in 1..n {
        let cand = dp[full * n + v] + m.get(v, 0);
        if cand < best_cost {
            best_cost = cand;
            best_end = v;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    let mut v = best_end;
    while v != 0 {
        order.push(v);
        let p = parent[mask * n + v] as usize;
        mask &= !(1 << v);
        v = p;
    }
    order.push(0);
    order.reverse();
    // canonical orientation: the cycle and its reverse cost the same
    if n > 2 && order[1] > order[n - 1] {
        order[1..].reverse();
    }
    Ok((best_cost, order))
}

fn brute_force_order(m: &DistanceMatrix) -> Result<(f64, Vec<usize>)> {
    let n = m.n();
    if !(2..=BRUTE_FORCE_MAX).contains(&n) {
        return Err(Error::SizeOutOfRange {
            what: "brute_force_permutations",
            n,
            min: 2,
            max: BRUTE_FORCE_MAX,
        });
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut order = vec![0usize];
    let mut best_cost = f64::INFINITY;
    let mut best: Vec<usize> = Vec::new();
    // lexicographic recursive enumeration; mirrored cycles are skipped by
    // requiring the successor of 0 to be smaller than its predecessor
    fn recurse(
        m: &DistanceMatrix,
        order: &mut Vec<usize>,
        rest: &mut Vec<usize>,
        best_cost: &mut f64,
        best: &mut Vec<usize>,
    ) {
        if rest.is_empty() {
            if order.len() > 2 && order[1] > order[order.len() - 1] {
                return;
            }
            let cost = m.cycle_cost(order);
            if cost < *best_cost {
                *best_cost = cost;
                *best = order.clone();
            }
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            order.push(v);
            recurse(m, order, rest, best_cost, best);
            order.pop();
            rest.insert(i, v);
        }
    }
    recurse(m, &mut order, &mut rest, &mut best_cost, &mut best);
    Ok((best_cost, best))
}

/// Exhaustive minimum over all `(n-1)!/2` distinct Hamiltonian cycles.
/// Independent of [`held_karp`], which it cross-checks.
pub fn brute_force_permutations(m: &DistanceMatrix) -> Result<f64> {
    brute_force_order(m).map(|(cost, _)| cost)
}

/// Exhaustive minimum cycle with one optimal order. Used where the witness
/// tour is needed, e.g. to drive the hardness-gadget transformation.
pub fn brute_force_cycle(m: &DistanceMatrix) -> Result<(f64, Vec<usize>)> {
    brute_force_order(m)
}

/// All-pairs shortest paths of a connected weighted graph: the metric
/// closure matrix plus per-source predecessors for path expansion.
pub fn metric_closure(g: &WeightedGraph) -> Result<(DistanceMatrix, Vec<Vec<usize>>)> {
    let n = g.n();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut prev_all: Vec<Vec<usize>> = Vec::with_capacity(n);
    for src in 0..n {
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut done = vec![false; n];
        dist[src] = 0.0;
        for _ in 0..n {
            let mut u = usize::MAX;
            for v in 0..n {
                if !done[v] && (u == usize::MAX || dist[v] < dist[u]) {
                    u = v;
                }
            }
            if dist[u].is_infinite() {
                return Err(Error::InvalidGraph("metric closure of a disconnected graph".into()));
            }
            done[u] = true;
            for &(w, eid) in g.adjacency(u) {
                let cand = dist[u] + g.edges()[eid].weight;
                if cand < dist[w] {
                    dist[w] = cand;
                    prev[w] = u;
                }
            }
        }
        rows.push(dist);
        prev_all.push(prev);
    }
    // mirror the upper triangle so the matrix is exactly symmetric
    let matrix = DistanceMatrix::from_fn(n, |i, j| rows[i.min(j)][i.max(j)])?;
    Ok((matrix, prev_all))
}

/// An exact tour with revisits: cost, the full closed walk (first vertex not
/// repeated at the end), and the vertices visited more than once.
#[derive(Clone, Debug)]
pub struct RevTspSolution {
    pub cost: f64,
    pub walk: Vec<usize>,
    pub revisited: Vec<usize>,
}

/// Exact revisit-allowed tour. For planar instances with `alpha >= 2` the
/// search runs on the metric closure of the Gabriel graph: whenever a third
/// point sits at an angle of at least `pi/2` over a hop, detouring through it
/// never costs more, so some optimal walk uses Gabriel edges only. Otherwise
/// the closure of the complete graph is used.
pub fn rev_tsp_exact(points: &PointSet) -> Result<RevTspSolution> {
    let gabriel_route = points.alpha().value() >= 2.0 && points.dim() == 2;
    let graph = if gabriel_route {
        build_gabriel(points)?
    } else {
        complete_graph(points)
    };
    rev_tsp_on_graph(points, &graph)
}

/// Exact revisit-allowed tour over the metric closure of the complete graph.
/// Valid for every `alpha`; serves as the independent oracle for the
/// Gabriel-graph route.
pub fn rev_tsp_via_complete_closure(points: &PointSet) -> Result<RevTspSolution> {
    let graph = complete_graph(points);
    rev_tsp_on_graph(points, &graph)
}

fn rev_tsp_on_graph(points: &PointSet, graph: &WeightedGraph) -> Result<RevTspSolution> {
    let n = points.len();
    if n == 1 {
        return Ok(RevTspSolution {
            cost: 0.0,
            walk: vec![0],
            revisited: Vec::new(),
        });
    }
    if n > HELD_KARP_MAX {
        return Err(Error::SizeOutOfRange {
            what: "rev_tsp_exact",
            n,
            min: 1,
            max: HELD_KARP_MAX,
        });
    }
    let (closure, prev) = metric_closure(graph)?;
    let (cost, order) = held_karp(&closure)?;
    // expand each closure leg back into the underlying graph walk
    let mut walk = Vec::with_capacity(2 * n);
    for t in 0..n {
        let s = order[t];
        let next = order[(t + 1) % n];
        walk.push(s);
        let mut interior = Vec::new();
        let mut at = next;
        loop {
            let p = prev[s][at];
            if p == usize::MAX || p == s {
                break;
            }
            interior.push(p);
            at = p;
        }
        interior.reverse();
        walk.extend(interior);
    }
    let mut counts = vec![0usize; n];
    for &v in &walk {
        counts[v] += 1;
    }
    let revisited: Vec<usize> = (0..n).filter(|&v| counts[v] > 1).collect();
    Ok(RevTspSolution {
        cost,
        walk,
        revisited,
    })
}
