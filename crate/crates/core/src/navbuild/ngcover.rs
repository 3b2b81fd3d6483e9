use rand::Rng;

use crate::error::{Error, Result};
use crate::setcover::{vote_engine, Attempt, CoverAccess, EngineConfig, Tail};

/// Parameters of one neighborhood solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NgCoverParams {
    pub vote_threshold: usize,
    /// Size limit `ℓ` on the returned neighborhood.
    pub size_limit: usize,
    pub checked: bool,
}

impl NgCoverParams {
    /// Threshold `⌈15 ln n⌉`.
    pub fn new(n: usize, size_limit: usize) -> Self {
        Self {
            vote_threshold: vote_threshold(n, 15.0),
            size_limit,
            checked: false,
        }
    }
}

/// `⌈c ln n⌉`, at least 1.
pub fn vote_threshold(n: usize, c: f64) -> usize {
    ((c * (n.max(1) as f64).ln()).ceil() as usize).max(1)
}

/// Covers `universe` in the instance `acc` with at most `size_limit` sets, or
/// returns `None`.
///
/// Sets reaching the vote threshold join the cover; voters still uncovered
/// when the nominees run out are covered by their first set, which for a
/// node instance is the direct edge to the voter. The attempt fails as soon
/// as the cover plus the voter pool outgrows the limit, so a returned cover
/// never exceeds it.
pub fn ng_cover<A, R>(acc: &A, universe: &[usize], params: &NgCoverParams, rng: &mut R) -> Result<Option<Vec<usize>>>
where
    A: CoverAccess + ?Sized,
    R: Rng + ?Sized,
{
    if params.size_limit == 0 {
        return Err(Error::input("size limit must be at least 1"));
    }
    let mut cfg = EngineConfig::new(params.vote_threshold);
    cfg.pool_budget = Some(params.size_limit);
    cfg.tail = Tail::FirstSet;
    cfg.checked = params.checked;
    Ok(match vote_engine(acc, universe, &cfg, rng)? {
        Attempt::Covered(sol) => Some(sol.chosen),
        Attempt::Fail => None,
    })
}
