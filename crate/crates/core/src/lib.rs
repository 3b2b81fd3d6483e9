//! Sparse navigable search graphs.
//!
//! A directed graph over a point set is *navigable* when greedy routing from
//! any node reaches any other node: every node `i` has, for every target `j`,
//! an out-neighbor strictly closer to `j` than `i` is. Finding the sparsest
//! such neighborhood for one node is a set-cover problem; this crate builds
//! near-optimal graphs by simulating greedy set cover through sampling and
//! voting, and ships the exact oracles and verifiers used to check them.

pub mod bench;
pub mod dataset;
pub mod error;
pub mod instances;
pub mod navbuild;
pub mod perm_index;
pub mod rng;
pub mod setcover;
pub mod verify;

pub use dataset::{DistanceOracle, Metric, PointSet, SearchGraph};
pub use error::{Error, Result};
pub use perm_index::{PermutationIndex, PrefixTable, Strength};
