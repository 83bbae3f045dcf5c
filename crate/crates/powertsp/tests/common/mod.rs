//! Shared helpers for the integration suites.
#![allow(dead_code)] // each test target compiles its own copy

use powertsp::geometry::PointSet;

/// Independent MST oracle from a different algorithmic family than the
/// library's Prim scan: Kruskal with union-find over all pairs.
pub fn kruskal_mst_weight(points: &PointSet) -> f64 {
    let n = points.len();
    if n <= 1 {
        return 0.0;
    }
    let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((points.euclid(u, v), u, v));
        }
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let alpha = points.alpha().value();
    let mut total = 0.0;
    let mut used = 0;
    for (len, u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            total += len.powf(alpha);
            used += 1;
            if used == n - 1 {
                break;
            }
        }
    }
    total
}
