use std::time::Instant;

use rayon::prelude::*;

use super::{finish, Build, NodeInstance};
use crate::dataset::{DistanceOracle, SearchGraph};
use crate::error::Result;
use crate::perm_index::PermutationIndex;
use crate::setcover::greedy_set_cover;

/// Consecutive id ranges of size `⌈√n⌉` (the last may be shorter).
pub fn clique_groups(n: usize) -> Vec<std::ops::Range<usize>> {
    let size = ceil_sqrt(n).max(1);
    (0..n).step_by(size).map(|s| s..(s + size).min(n)).collect()
}

fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// Deterministic baseline with at most `2 n^{3/2} - n` edges: cliques on
/// `⌈√n⌉` groups, plus an edge to every outside point from its nearest group
/// member.
pub fn build_clique_baseline(oracle: &DistanceOracle) -> Result<Build> {
    let start = Instant::now();
    let n = oracle.len();
    let groups = clique_groups(n);
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    let cross: Vec<Vec<(usize, usize)>> = groups
        .par_iter()
        .map(|g| {
            (0..n)
                .filter(|j| !g.contains(j))
                .map(|j| {
                    let a = g.clone().min_by(|&a, &b| oracle.cmp_from(j, a, b)).expect("groups are non-empty");
                    (a, j)
                })
                .collect()
        })
        .collect();
    for g in &groups {
        for i in g.clone() {
            lists[i].extend(g.clone().filter(|&j| j != i));
        }
    }
    for (a, j) in cross.into_iter().flatten() {
        lists[a].push(j);
    }
    let mut out = finish("clique", 0, SearchGraph::from_lists(lists)?);
    out.report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

/// Exact greedy set cover per node; `O(n^3)` overall.
pub fn build_classic_greedy(oracle: &DistanceOracle) -> Result<Build> {
    let start = Instant::now();
    let mut out = build_classic_greedy_with_index(&PermutationIndex::build(oracle))?;
    out.report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

pub(crate) fn build_classic_greedy_with_index(idx: &PermutationIndex) -> Result<Build> {
    let lists = (0..idx.len())
        .into_par_iter()
        .map(|i| Ok(greedy_set_cover(&NodeInstance::new(idx, i), None)?.chosen))
        .collect::<Result<Vec<Vec<usize>>>>()?;
    Ok(finish("greedy", 0, SearchGraph::from_lists(lists)?))
}
