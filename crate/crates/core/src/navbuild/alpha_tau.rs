use std::time::Instant;

use rayon::prelude::*;

use super::{finish, ng_cover, Build, BuildConfig, NgCoverParams, NodeInstance};
use crate::dataset::{DistanceOracle, SearchGraph};
use crate::error::Result;
use crate::perm_index::{PermutationIndex, PrefixTable, Strength};
use crate::rng::substream;
use crate::setcover::CoverAccess;

/// α-shortcut reachable graph: every step can shrink the distance to any
/// target by a factor `α`.
pub fn build_alpha(oracle: &DistanceOracle, alpha: f64, cfg: &BuildConfig) -> Result<Build> {
    build_strengthened(oracle, Strength::Alpha(alpha), cfg)
}

/// τ-monotonic graph: every step can shrink the distance to any target by
/// more than `τ`, or reach it directly.
pub fn build_tau(oracle: &DistanceOracle, tau: f64, cfg: &BuildConfig) -> Result<Build> {
    build_strengthened(oracle, Strength::Tau(tau), cfg)
}

pub fn build_strengthened(oracle: &DistanceOracle, strength: Strength, cfg: &BuildConfig) -> Result<Build> {
    let start = Instant::now();
    strength.validate()?;
    let idx = PermutationIndex::build(oracle);
    let mut out = build_strengthened_with_index(&idx, oracle, strength, cfg)?;
    out.report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

pub(crate) fn build_strengthened_with_index(
    idx: &PermutationIndex,
    oracle: &DistanceOracle,
    strength: Strength,
    cfg: &BuildConfig,
) -> Result<Build> {
    let prefix = PrefixTable::build(idx, oracle, strength)?;
    let n = idx.len();
    let params = NgCoverParams {
        vote_threshold: cfg.vote_threshold(n),
        size_limit: n.max(1),
        checked: cfg.checked_voting,
    };
    let (name, label) = match strength {
        Strength::Alpha(_) => ("alpha", "alpha"),
        Strength::Tau(_) => ("tau", "tau"),
    };
    let lists = (0..n)
        .into_par_iter()
        .map(|i| {
            let inst = NodeInstance::strengthened(idx, &prefix, i);
            let mut rng = substream(cfg.seed, label, i as u64);
            let cover = ng_cover(&inst, &inst.universe(), &params, &mut rng)?;
            Ok(cover.expect("a size limit of n always suffices"))
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let mut out = finish(name, cfg.seed, SearchGraph::from_lists(lists)?);
    out.report.vote_threshold = params.vote_threshold;
    Ok(out)
}
