//! Tour construction and exact solvers for the traveling salesman problem
//! under powered Euclidean distances.
//!
//! The cost of traveling between two points `p` and `q` is `|pq|^alpha` for a
//! fixed exponent `alpha > 0` (the distance-power gradient of wireless power
//! assignment). For `alpha > 1` this cost is not a metric — it only satisfies
//! a relaxed triangle inequality — so the classical shortcutting heuristics
//! need care. This crate provides:
//!
//! * spanning-tree construction and the tree-cube tour builder with pluggable
//!   edge selection ([`spanning`], [`tour`]),
//! * the trigonometric shortcut-cost identities and per-edge cost accounting
//!   used to audit the approximation guarantees ([`analysis`]),
//! * exact oracles: Held–Karp, brute-force enumeration, and exact
//!   revisit-allowed tours via metric closure of the Gabriel graph
//!   ([`exact`], [`gabriel`]),
//! * instance generators, including the hardness-gadget embedding of
//!   `{1,2}`-TSP into 3-d point sets, and file I/O ([`instances`]),
//! * a serializable run report ([`report`]).

pub mod analysis;
pub mod error;
pub mod exact;
pub mod gabriel;
pub mod geometry;
pub mod instances;
pub mod report;
pub mod spanning;
pub mod tour;

pub use error::{Error, Result};
pub use geometry::{Alpha, AnglePair, Point, PointSet};
pub use report::RunReport;
pub use spanning::Tree;
pub use tour::{SelectionPolicy, ShortcutTrace, Tour};
