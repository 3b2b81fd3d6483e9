use std::time::Instant;

use rayon::prelude::*;

use super::{finish, ng_cover, Build, BuildConfig, NgCoverParams, NodeInstance};
use crate::dataset::{DistanceOracle, SearchGraph};
use crate::error::Result;
use crate::perm_index::PermutationIndex;
use crate::rng::substream;
use crate::setcover::CoverAccess;

/// Solves every node's instance independently with a size limit of `n`, which
/// cannot fail.
pub fn build_simple(oracle: &DistanceOracle, cfg: &BuildConfig) -> Result<Build> {
    let start = Instant::now();
    let mut out = build_simple_with_index(&PermutationIndex::build(oracle), cfg)?;
    out.report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

pub(crate) fn build_simple_with_index(idx: &PermutationIndex, cfg: &BuildConfig) -> Result<Build> {
    let n = idx.len();
    let params = NgCoverParams {
        vote_threshold: cfg.vote_threshold(n),
        size_limit: n.max(1),
        checked: cfg.checked_voting,
    };
    let lists = (0..n)
        .into_par_iter()
        .map(|i| {
            let inst = NodeInstance::new(idx, i);
            let mut rng = substream(cfg.seed, "simple", i as u64);
            let cover = ng_cover(&inst, &inst.universe(), &params, &mut rng)?;
            Ok(cover.expect("a size limit of n always suffices"))
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let mut out = finish("simple", cfg.seed, SearchGraph::from_lists(lists)?);
    out.report.vote_threshold = params.vote_threshold;
    Ok(out)
}
