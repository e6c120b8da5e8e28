//! Parity decision trees, an exhaustive optimal-depth solver for tiny `n`,
//! the hard distribution for a union of subspaces, and the corruption scan
//! that turns "no low-codimension witness" into a query lower bound.

mod corruption;
mod solver;
mod tree;

pub use crate::distribution::CubeDistribution;
pub use corruption::{
    corruption_scan, hard_distribution_mu, theorem_threshold, CorruptionWitness, ScanReport,
    ScanVerdict, Threshold, DEFAULT_SCAN_CAP, SCAN_MAX_N,
};
pub use solver::{optimal_depth, OPT_MAX_N};
pub use tree::{count_trees, distributional_error, enumerate_trees, Node, ParityDecisionTree, MAX_TREE_N};
