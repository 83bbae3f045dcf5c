//! Instance builders shared by the benchmark targets.

use powertsp::geometry::{Alpha, PointSet};
use powertsp::instances;

pub fn random_planar(n: usize, seed: u64) -> PointSet {
    instances::gen_random(n, 2, Alpha::TWO, seed)
}

pub fn chain(n: usize) -> PointSet {
    instances::gen_collinear_chain(n, 1.0, Alpha::TWO).expect("valid chain")
}
