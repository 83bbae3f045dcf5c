//! Instance generation and file I/O: seeded uniform points, equally spaced
//! chains, integer grids, and the 3-d hardness gadget embedding `{1,2}`-TSP
//! instances into point sets.

mod gadget;
pub mod io;

pub use gadget::{
    build_gadget, double_traversal_cost, gadget_cost_correspondence, GadgetCostReport,
    GadgetInstance, GadgetSpec, GapInfo,
};

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Alpha, Point, PointSet};

/// `n` points drawn uniformly from the unit cube `[0,1]^dim`, reproducible
/// by seed. The vanishingly unlikely exact duplicate is redrawn.
pub fn gen_random(n: usize, dim: usize, alpha: Alpha, seed: u64) -> PointSet {
    assert!(n >= 1 && dim >= 1, "gen_random needs n >= 1 and dim >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let coords: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        if seen.insert(coords.iter().map(|c| c.to_bits()).collect()) {
            points.push(Point::new(coords).expect("finite sample"));
        }
    }
    PointSet::new(points, alpha).expect("distinct by construction")
}

/// `n` equally spaced points on a line: `(i * spacing, 0)`. The adversarial
/// family for unlimited-skip shortcutting.
pub fn gen_collinear_chain(n: usize, spacing: f64, alpha: Alpha) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::SizeOutOfRange {
            what: "gen_collinear_chain",
            n,
            min: 2,
            max: usize::MAX,
        });
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "chain spacing must be positive, got {spacing}"
        )));
    }
    let points = (0..n)
        .map(|i| Point::xy(i as f64 * spacing, 0.0))
        .collect();
    PointSet::new(points, alpha)
}

/// Integer grid points `(c, r)` for `r` in `0..rows`, `c` in `0..cols`.
pub fn gen_grid(rows: usize, cols: usize, alpha: Alpha) -> Result<PointSet> {
    if rows < 1 || cols < 1 {
        return Err(Error::InvalidParameter(format!(
            "grid needs rows, cols >= 1, got {rows}x{cols}"
        )));
    }
    let mut points = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            points.push(Point::xy(c as f64, r as f64));
        }
    }
    PointSet::new(points, alpha)
}
