//! Unweighted set cover through query access.
//!
//! The algorithms never see an instance directly; they only ask membership,
//! frequency and enumeration questions through [`CoverAccess`]. This lets the
//! same code run on an in-memory [`ExplicitInstance`] and on the implicit
//! per-node instances of a navigable-graph build, where each query is a
//! constant-time lookup in a permutation index.
//!
//! All logarithms are natural.

mod greedy;
mod instance;
mod vote;

pub use greedy::greedy_set_cover;
pub use instance::ExplicitInstance;
pub use vote::{
    construct_limited_vote_cover, construct_vote_cover, cvc_stop_early, vote_engine, Attempt, EngineConfig, Tail,
    VoteParams,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Query surface of a set-cover instance with elements `0..n_elements` and
/// sets `0..n_sets`. Implementations must be safe to query concurrently.
pub trait CoverAccess: Sync {
    fn n_elements(&self) -> usize;

    fn n_sets(&self) -> usize;

    fn member_of(&self, set: usize, elem: usize) -> bool;

    /// Number of sets containing `elem`.
    fn freq_of(&self, elem: usize) -> usize;

    /// The `l`-th (0-based) set containing `elem` in the instance's fixed
    /// order, or `None` when `l >= freq_of(elem)`.
    fn set_of(&self, elem: usize, l: usize) -> Option<usize>;

    fn sets_of(&self, elem: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.freq_of(elem)).map_while(move |l| self.set_of(elem, l))
    }

    fn elements_of(&self, set: usize) -> Vec<usize> {
        (0..self.n_elements()).filter(|&e| self.member_of(set, e)).collect()
    }

    /// Elements that must be covered; all of them unless overridden.
    fn universe(&self) -> Vec<usize> {
        (0..self.n_elements()).collect()
    }
}

/// Counters describing how a cover was assembled.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStats {
    pub votes_cast: u64,
    pub voters_promoted: u64,
    pub added_by_vote: usize,
    pub added_by_greedy: usize,
    pub added_random: usize,
    /// Sets added after the random phase to cover elements it missed.
    pub repaired: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSolution {
    /// Chosen set ids in the order they were added; no duplicates.
    pub chosen: Vec<usize>,
    pub stats: CoverStats,
}

impl CoverSolution {
    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }
}

/// Vote count at which a set joins the cover.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VoteThreshold {
    /// `c * (ln m + ln n)`; the analysis uses `c = 100`.
    LogSum(f64),
    /// `c * ln n`.
    LogN(f64),
    Fixed(usize),
}

impl Default for VoteThreshold {
    fn default() -> Self {
        VoteThreshold::LogSum(100.0)
    }
}

impl VoteThreshold {
    /// Rounded up, and never below 1.
    pub fn value(self, n_elements: usize, n_sets: usize) -> usize {
        let ln = |x: usize| (x.max(1) as f64).ln();
        let raw = match self {
            VoteThreshold::LogSum(c) => c * (ln(n_sets) + ln(n_elements)),
            VoteThreshold::LogN(c) => c * ln(n_elements),
            VoteThreshold::Fixed(k) => k as f64,
        };
        (raw.ceil() as usize).max(1)
    }
}

/// True iff the chosen sets cover every element of `acc.universe()`.
pub fn check_cover<A: CoverAccess + ?Sized>(acc: &A, chosen: &[usize]) -> bool {
    let mut covered = vec![false; acc.n_elements()];
    for &s in chosen {
        if s >= acc.n_sets() {
            return false;
        }
        for e in acc.elements_of(s) {
            covered[e] = true;
        }
    }
    acc.universe().into_iter().all(|e| covered[e])
}

/// Fails with `Uncoverable` on the first element no set contains.
pub(crate) fn ensure_coverable<A: CoverAccess + ?Sized>(acc: &A, universe: &[usize]) -> Result<()> {
    match universe.iter().find(|&&e| acc.freq_of(e) == 0) {
        Some(&e) => Err(Error::Uncoverable(e)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(VoteThreshold::Fixed(0).value(10, 10), 1);
        assert_eq!(VoteThreshold::LogN(1.0).value(1, 1), 1);
        let t = VoteThreshold::LogSum(100.0).value(4096, 4096);
        assert_eq!(t, (100.0 * 2.0 * (4096f64).ln()).ceil() as usize);
    }

    #[test]
    fn check_cover_basics() {
        let inst = ExplicitInstance::new(3, vec![vec![0, 1], vec![1, 2], vec![2]]).unwrap();
        assert!(check_cover(&inst, &[0, 1, 2]));
        assert!(check_cover(&inst, &[0, 1]));
        assert!(!check_cover(&inst, &[]));
        assert!(!check_cover(&inst, &[0, 2, 7]));
    }
}
