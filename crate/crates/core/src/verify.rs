//! Ground truth: navigability checks, greedy routing, and exhaustive
//! minimum-neighborhood search for small inputs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{DistanceOracle, SearchGraph};
use crate::error::{Error, Result};
use crate::perm_index::{PermutationIndex, Strength};

pub use crate::setcover::check_cover;

/// Default largest point count accepted by the exact oracle.
pub const DEFAULT_ORACLE_CAP: usize = 16;

/// Node `source` has no out-neighbor making progress towards `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub source: usize,
    pub target: usize,
}

fn check_sizes(oracle: &DistanceOracle, graph: &SearchGraph) -> Result<()> {
    if oracle.len() != graph.len() {
        return Err(Error::input(format!(
            "graph has {} nodes but the point set has {}",
            graph.len(),
            oracle.len()
        )));
    }
    Ok(())
}

/// Checks all pairs target by target: one distance row per target, then a
/// lookup per out-edge.
fn scan<F>(oracle: &DistanceOracle, graph: &SearchGraph, helps: F) -> Vec<Violation>
where
    F: Fn(usize, usize, usize, f64, f64) -> bool + Sync,
{
    let n = oracle.len();
    let mut found: Vec<Violation> = (0..n)
        .into_par_iter()
        .map_init(Vec::new, |dist, j| {
            oracle.distances_from(j, dist);
            let dist = &*dist;
            (0..n)
                .filter(|&i| {
                    i != j
                        && !graph
                            .out(i)
                            .iter()
                            .any(|&k| helps(i, j, k as usize, dist[i], dist[k as usize]))
                })
                .map(|i| Violation { source: i, target: j })
                .collect::<Vec<_>>()
        })
        .flatten_iter()
        .collect();
    found.sort_unstable();
    found
}

/// All pairs `(i, j)`, `i != j`, such that no out-neighbor `k` of `i` is
/// strictly closer to `j` than `i` is. Empty iff the graph is navigable.
pub fn verify_navigable(oracle: &DistanceOracle, graph: &SearchGraph) -> Result<Vec<Violation>> {
    check_sizes(oracle, graph)?;
    Ok(scan(oracle, graph, |i, _, k, d_ji, d_jk| {
        d_jk.total_cmp(&d_ji).then(k.cmp(&i)).is_lt()
    }))
}

/// Violations of the α-shortcut condition `d(k, j) < d(i, j) / α`.
pub fn verify_alpha(oracle: &DistanceOracle, graph: &SearchGraph, alpha: f64) -> Result<Vec<Violation>> {
    verify_strength(oracle, graph, Strength::Alpha(alpha))
}

/// Violations of the τ-monotonic condition `d(k, j) < d(i, j) - τ`, where an
/// edge straight to `j` always suffices.
pub fn verify_tau(oracle: &DistanceOracle, graph: &SearchGraph, tau: f64) -> Result<Vec<Violation>> {
    verify_strength(oracle, graph, Strength::Tau(tau))
}

pub fn verify_strength(oracle: &DistanceOracle, graph: &SearchGraph, strength: Strength) -> Result<Vec<Violation>> {
    let strength = strength.validate()?;
    check_sizes(oracle, graph)?;
    Ok(scan(oracle, graph, |i, j, k, d_ji, d_jk| strength.helps_at(i, j, k, d_ji, d_jk)))
}

/// Follows the out-neighbor closest to `query` while it improves on the
/// current node. The path starts at `start` and ends at a local minimum.
pub fn greedy_route(oracle: &DistanceOracle, graph: &SearchGraph, start: usize, query: usize) -> Vec<usize> {
    let mut path = vec![start];
    let mut cur = start;
    loop {
        let best = graph
            .out(cur)
            .iter()
            .map(|&k| k as usize)
            .min_by(|&a, &b| oracle.cmp_from(query, a, b));
        match best {
            Some(k) if oracle.closer(query, k, cur) => {
                path.push(k);
                cur = k;
            }
            _ => return path,
        }
    }
}

/// An optimal cover and its size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCover {
    pub size: usize,
    /// Indices of the chosen sets, increasing.
    pub witness: Vec<usize>,
}

/// Minimum number of `sets` (bit masks) whose union contains `target`, or
/// `None` if their union does not.
pub fn min_cover_masks(target: u64, sets: &[u64]) -> Option<ExactCover> {
    let all = sets.iter().fold(0, |acc, s| acc | s);
    if target & !all != 0 {
        return None;
    }
    let mut chosen = Vec::new();
    for depth in 0..=sets.len() {
        if dfs(target, sets, depth, &mut chosen) {
            chosen.sort_unstable();
            return Some(ExactCover {
                size: chosen.len(),
                witness: chosen,
            });
        }
    }
    None
}

/// Branches on the sets containing the lowest uncovered element.
fn dfs(left: u64, sets: &[u64], depth: usize, chosen: &mut Vec<usize>) -> bool {
    if left == 0 {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let bit = left & left.wrapping_neg();
    for (s, &mask) in sets.iter().enumerate() {
        if mask & bit != 0 {
            chosen.push(s);
            if dfs(left & !mask, sets, depth - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn guard(n: usize, cap: usize) -> Result<()> {
    if n > cap.min(64) {
        return Err(Error::OracleCap { n, cap: cap.min(64) });
    }
    Ok(())
}

/// Smallest out-neighborhood making node `i` navigable, under the tie-broken
/// order of `idx`. Refuses inputs with more than `cap` points.
pub fn exact_min_neighborhood(idx: &PermutationIndex, i: usize, cap: usize) -> Result<ExactCover> {
    let n = idx.len();
    guard(n, cap)?;
    let sets: Vec<u64> = (0..n)
        .map(|k| (0..n).filter(|&j| j != i && idx.member_of(i, j, k)).fold(0, |m, j| m | 1 << j))
        .collect();
    let target = (0..n).filter(|&j| j != i).fold(0, |m, j| m | 1 << j);
    Ok(min_cover_masks(target, &sets).expect("every point covers itself"))
}

/// As [`exact_min_neighborhood`], but a step from `i` to `k` counts for `j`
/// only when `d(k, j) < d(i, j)` holds on the raw distances, with no
/// tie-breaking.
pub fn exact_min_neighborhood_strict(oracle: &DistanceOracle, i: usize, cap: usize) -> Result<ExactCover> {
    let n = oracle.len();
    guard(n, cap)?;
    let sets: Vec<u64> = (0..n)
        .map(|k| {
            (0..n)
                .filter(|&j| j != i && oracle.distance(k, j) < oracle.distance(i, j))
                .fold(0, |m, j| m | 1 << j)
        })
        .collect();
    let target = (0..n).filter(|&j| j != i).fold(0, |m, j| m | 1 << j);
    Ok(min_cover_masks(target, &sets).expect("every point covers itself"))
}
