//! Greedy simulated by voting.
//!
//! Uncovered elements are promoted one at a time, uniformly at random, from the
//! nominee pool `N` to the voter pool `V`. A voter votes for every set that
//! contains it; a set collecting `threshold` votes is added to the cover, and
//! every voter it covers leaves `V` and takes its votes back. Once `N` is
//! empty the remaining voters are covered by a tail step.

use std::cell::RefCell;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ensure_coverable, greedy_set_cover, CoverAccess, CoverSolution, VoteThreshold};
use crate::error::Result;
use crate::rng::substream;

const NONE: usize = usize::MAX;

/// How the voters left after the voting phase get covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// Greedy set cover over the residual voters.
    Greedy,
    /// Each voter is covered by the first set containing it.
    FirstSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub threshold: usize,
    /// Skip covered nominees when they are drawn instead of removing them
    /// when their covering set is added.
    pub lazy: bool,
    /// Fail when voting would add more sets than this.
    pub vote_budget: Option<usize>,
    /// Fail when `|C| + |V|` exceeds this at any point of the voting phase.
    pub pool_budget: Option<usize>,
    /// Fail when the final cover exceeds this.
    pub total_budget: Option<usize>,
    pub tail: Tail,
    /// Re-verify the pool invariants by brute force after every step.
    pub checked: bool,
}

impl EngineConfig {
    pub fn new(threshold: usize) -> Self {
        Self {
            threshold: threshold.max(1),
            lazy: false,
            vote_budget: None,
            pool_budget: None,
            total_budget: None,
            tail: Tail::Greedy,
            checked: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attempt {
    Covered(CoverSolution),
    Fail,
}

impl Attempt {
    pub fn covered(self) -> Option<CoverSolution> {
        match self {
            Attempt::Covered(sol) => Some(sol),
            Attempt::Fail => None,
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Attempt::Fail)
    }
}

/// Parameters shared by the voting algorithms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VoteParams {
    pub threshold: VoteThreshold,
    pub seed: u64,
    pub lazy: bool,
    pub checked: bool,
}

impl VoteParams {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

#[derive(Default)]
struct Pools {
    nominees: Vec<u32>,
    npos: Vec<usize>,
    voters: Vec<u32>,
    vpos: Vec<usize>,
    /// Number of leading `sets_of` entries each voter has voted for.
    cast: Vec<u32>,
    count: Vec<u32>,
    ballots: Vec<Vec<u32>>,
    in_c: Vec<bool>,
    /// Sets whose entries may be dirty; reset on release.
    touched: Vec<u32>,
}

thread_local! {
    // Node instances are solved by the thousand per thread; reusing the
    // dense arrays keeps each solve proportional to the work it does.
    static SPARE: RefCell<Option<Pools>> = const { RefCell::new(None) };
}

impl Pools {
    fn acquire(n_elements: usize, n_sets: usize, universe: &[usize]) -> Self {
        let mut p = SPARE.with(|c| c.borrow_mut().take()).unwrap_or_default();
        if p.npos.len() < n_elements {
            p.npos.resize(n_elements, NONE);
            p.vpos.resize(n_elements, NONE);
            p.cast.resize(n_elements, 0);
        }
        if p.count.len() < n_sets {
            p.count.resize(n_sets, 0);
            p.ballots.resize_with(n_sets, Vec::new);
            p.in_c.resize(n_sets, false);
        }
        for &e in universe {
            if p.npos[e] == NONE {
                p.npos[e] = p.nominees.len();
                p.nominees.push(e as u32);
            }
        }
        p
    }

    fn release(mut self, universe: &[usize]) {
        for &e in universe {
            self.npos[e] = NONE;
            self.vpos[e] = NONE;
            self.cast[e] = 0;
        }
        for s in std::mem::take(&mut self.touched) {
            let s = s as usize;
            self.count[s] = 0;
            self.ballots[s].clear();
            self.in_c[s] = false;
        }
        self.nominees.clear();
        self.voters.clear();
        SPARE.with(|c| *c.borrow_mut() = Some(self));
    }

    fn choose(&mut self, s: usize) -> bool {
        self.touched.push(s as u32);
        !std::mem::replace(&mut self.in_c[s], true)
    }

    fn take_nominee(&mut self, p: usize) -> usize {
        let e = self.nominees.swap_remove(p) as usize;
        if let Some(&moved) = self.nominees.get(p) {
            self.npos[moved as usize] = p;
        }
        self.npos[e] = NONE;
        e
    }

    fn drop_voter(&mut self, e: usize) {
        let p = std::mem::replace(&mut self.vpos[e], NONE);
        self.voters.swap_remove(p);
        if let Some(&moved) = self.voters.get(p) {
            self.vpos[moved as usize] = p;
        }
    }

    fn add_set<A: CoverAccess + ?Sized>(&mut self, acc: &A, s: usize, lazy: bool) {
        self.choose(s);
        let mut ballots = std::mem::take(&mut self.ballots[s]);
        for &x in &ballots {
            let x = x as usize;
            if self.vpos[x] == NONE {
                continue;
            }
            self.drop_voter(x);
            let cast = std::mem::replace(&mut self.cast[x], 0) as usize;
            for t in acc.sets_of(x).take(cast) {
                self.count[t] -= 1;
            }
        }
        ballots.clear();
        self.ballots[s] = ballots;
        if !lazy {
            // Surviving voters have voted for all their sets, so the ballots
            // already named every covered voter; only nominees remain.
            let mut p = 0;
            while p < self.nominees.len() {
                let x = self.nominees[p] as usize;
                if acc.member_of(s, x) {
                    self.take_nominee(p);
                } else {
                    p += 1;
                }
            }
        }
    }

    fn assert_invariants<A: CoverAccess + ?Sized>(&self, acc: &A, universe: &[usize], chosen: &[usize], lazy: bool) {
        for &e in universe {
            let uncovered = !chosen.iter().any(|&s| acc.member_of(s, e));
            let in_n = self.npos[e] != NONE;
            let in_v = self.vpos[e] != NONE;
            assert!(!(in_n && in_v), "element {e} is both nominee and voter");
            if uncovered {
                assert!(in_n || in_v, "uncovered element {e} left both pools");
            } else {
                assert!(!in_v, "covered element {e} is still a voter");
                assert!(lazy || !in_n, "covered element {e} is still a nominee");
            }
        }
        for s in 0..acc.n_sets() {
            let live = self.voters.iter().filter(|&&v| acc.member_of(s, v as usize)).count();
            assert_eq!(self.count[s] as usize, live, "vote count of set {s} drifted");
        }
    }
}

/// Runs the voting phase and the tail on `universe`.
pub fn vote_engine<A, R>(acc: &A, universe: &[usize], cfg: &EngineConfig, rng: &mut R) -> Result<Attempt>
where
    A: CoverAccess + ?Sized,
    R: Rng + ?Sized,
{
    ensure_coverable(acc, universe)?;
    let mut pools = Pools::acquire(acc.n_elements(), acc.n_sets(), universe);
    let out = run(acc, universe, cfg, rng, &mut pools);
    pools.release(universe);
    out
}

fn run<A, R>(acc: &A, universe: &[usize], cfg: &EngineConfig, rng: &mut R, pools: &mut Pools) -> Result<Attempt>
where
    A: CoverAccess + ?Sized,
    R: Rng + ?Sized,
{
    let threshold = cfg.threshold.max(1);
    let mut sol = CoverSolution::default();

    while !pools.nominees.is_empty() {
        let p = rng.random_range(0..pools.nominees.len());
        let e = pools.take_nominee(p);
        if cfg.lazy && acc.sets_of(e).any(|s| pools.in_c[s]) {
            continue;
        }
        pools.vpos[e] = pools.voters.len();
        pools.voters.push(e as u32);
        sol.stats.voters_promoted += 1;
        let mut winner = None;
        for s in acc.sets_of(e) {
            if pools.ballots[s].is_empty() {
                pools.touched.push(s as u32);
            }
            pools.count[s] += 1;
            pools.ballots[s].push(e as u32);
            pools.cast[e] += 1;
            sol.stats.votes_cast += 1;
            if pools.count[s] as usize >= threshold {
                winner = Some(s);
                break;
            }
        }
        if let Some(s) = winner {
            if cfg.vote_budget.is_some_and(|b| sol.chosen.len() >= b) {
                return Ok(Attempt::Fail);
            }
            pools.add_set(acc, s, cfg.lazy);
            sol.chosen.push(s);
            sol.stats.added_by_vote += 1;
        }
        if cfg.pool_budget.is_some_and(|b| sol.chosen.len() + pools.voters.len() > b) {
            return Ok(Attempt::Fail);
        }
        if cfg.checked {
            pools.assert_invariants(acc, universe, &sol.chosen, cfg.lazy);
        }
    }

    let residual: Vec<usize> = pools.voters.iter().map(|&v| v as usize).collect();
    match cfg.tail {
        Tail::Greedy => {
            let tail = greedy_set_cover(acc, Some(&residual))?;
            for s in tail.chosen {
                let fresh = pools.choose(s);
                debug_assert!(fresh);
                sol.chosen.push(s);
                sol.stats.added_by_greedy += 1;
            }
        }
        Tail::FirstSet => {
            for v in residual {
                let s = acc.set_of(v, 0).expect("coverable element has a first set");
                if pools.choose(s) {
                    sol.chosen.push(s);
                    sol.stats.added_by_greedy += 1;
                }
            }
        }
    }
    if cfg.total_budget.is_some_and(|b| sol.chosen.len() > b) {
        return Ok(Attempt::Fail);
    }
    Ok(Attempt::Covered(sol))
}

fn universe_or_default<A: CoverAccess + ?Sized>(acc: &A, universe: Option<&[usize]>) -> Vec<usize> {
    universe.map_or_else(|| acc.universe(), <[usize]>::to_vec)
}

/// Voting followed by greedy on the residual voters.
pub fn construct_vote_cover<A: CoverAccess + ?Sized>(
    acc: &A,
    universe: Option<&[usize]>,
    params: &VoteParams,
) -> Result<CoverSolution> {
    let universe = universe_or_default(acc, universe);
    let mut cfg = EngineConfig::new(params.threshold.value(acc.n_elements(), acc.n_sets()));
    cfg.lazy = params.lazy;
    cfg.checked = params.checked;
    let mut rng = substream(params.seed, "vote", 0);
    Ok(vote_engine(acc, &universe, &cfg, &mut rng)?
        .covered()
        .expect("unbudgeted voting cannot fail"))
}

/// [`construct_vote_cover`] with a size budget `budget`: fails as soon as
/// voting adds more than `budget` sets, or when the final cover exceeds
/// `2 * budget`.
pub fn cvc_stop_early<A: CoverAccess + ?Sized>(
    acc: &A,
    universe: Option<&[usize]>,
    budget: f64,
    params: &VoteParams,
) -> Result<Attempt> {
    let universe = universe_or_default(acc, universe);
    let mut rng = substream(params.seed, "stop-early", 0);
    stop_early(acc, &universe, budget, params, &mut rng)
}

fn stop_early<A: CoverAccess + ?Sized, R: Rng + ?Sized>(
    acc: &A,
    universe: &[usize],
    budget: f64,
    params: &VoteParams,
    rng: &mut R,
) -> Result<Attempt> {
    let mut cfg = EngineConfig::new(params.threshold.value(acc.n_elements(), acc.n_sets()));
    cfg.lazy = params.lazy;
    cfg.checked = params.checked;
    cfg.vote_budget = Some(budget.max(0.0).floor() as usize);
    cfg.total_budget = Some((2.0 * budget.max(0.0)).floor() as usize);
    vote_engine(acc, universe, &cfg, rng)
}

/// Exponential search on the cover size.
///
/// Starting from `L = 16 n ln n`, each level drops the elements contained in
/// at least `threshold * m / L` sets and runs [`cvc_stop_early`] with budget
/// `L` on the rest, halving `L` after every success. At the first failure the
/// last successful cover is returned together with `floor(L)` distinct random
/// sets, which cover the dropped high-frequency elements with high
/// probability; any element still uncovered afterwards gets its first set.
pub fn construct_limited_vote_cover<A: CoverAccess + ?Sized>(
    acc: &A,
    universe: Option<&[usize]>,
    params: &VoteParams,
) -> Result<CoverSolution> {
    let universe = universe_or_default(acc, universe);
    ensure_coverable(acc, &universe)?;
    let n = acc.n_elements();
    let m = acc.n_sets();
    let threshold = params.threshold.value(n, m) as f64;

    let mut budget = (16.0 * n as f64 * (n.max(1) as f64).ln()).max(1.0);
    let mut best: Option<CoverSolution> = None;
    let mut failed_at = None;
    let (mut votes_cast, mut voters_promoted) = (0, 0);
    let mut level = 0u64;
    while budget >= 1.0 {
        let cutoff = threshold * m as f64 / budget;
        let filtered: Vec<usize> = universe
            .iter()
            .copied()
            .filter(|&e| (acc.freq_of(e) as f64) < cutoff)
            .collect();
        let mut rng = substream(params.seed, "limited-level", level);
        match stop_early(acc, &filtered, budget, params, &mut rng)? {
            Attempt::Covered(sol) => {
                votes_cast += sol.stats.votes_cast;
                voters_promoted += sol.stats.voters_promoted;
                best = Some(sol);
            }
            Attempt::Fail => {
                failed_at = Some(budget);
                break;
            }
        }
        budget /= 2.0;
        level += 1;
    }

    let mut sol = best.unwrap_or_default();
    sol.stats.votes_cast = votes_cast;
    sol.stats.voters_promoted = voters_promoted;
    let mut in_c = vec![false; m];
    for &s in &sol.chosen {
        in_c[s] = true;
    }
    if let Some(budget) = failed_at {
        let amount = (budget.floor() as usize).min(m);
        let mut rng = substream(params.seed, "limited-random", 0);
        let mut picks = index::sample(&mut rng, m, amount).into_vec();
        picks.sort_unstable();
        for s in picks {
            if !std::mem::replace(&mut in_c[s], true) {
                sol.chosen.push(s);
                sol.stats.added_random += 1;
            }
        }
    }

    let mut covered = vec![false; n];
    for &s in &sol.chosen {
        for e in acc.elements_of(s) {
            covered[e] = true;
        }
    }
    for &e in &universe {
        if covered[e] {
            continue;
        }
        let s = acc.set_of(e, 0).expect("coverable element has a first set");
        debug_assert!(!in_c[s]);
        in_c[s] = true;
        sol.chosen.push(s);
        sol.stats.repaired += 1;
        for x in acc.elements_of(s) {
            covered[x] = true;
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::setcover::{check_cover, ExplicitInstance};

    fn small() -> ExplicitInstance {
        ExplicitInstance::new(
            8,
            vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![0, 4], vec![1, 5], vec![2, 6], vec![3, 7], vec![7]],
        )
        .unwrap()
    }

    #[test]
    fn unreachable_threshold_equals_greedy() {
        let inst = small();
        let params = VoteParams::with_seed(3);
        let sol = construct_vote_cover(&inst, None, &params).unwrap();
        let greedy = greedy_set_cover(&inst, None).unwrap();
        assert_eq!(sol.chosen, greedy.chosen);
        assert_eq!(sol.stats.added_by_vote, 0);
        assert_eq!(sol.stats.voters_promoted, 8);
    }

    #[test]
    fn singleton() {
        let inst = ExplicitInstance::new(1, vec![vec![0]]).unwrap();
        let sol = construct_vote_cover(&inst, None, &VoteParams::default()).unwrap();
        assert_eq!(sol.chosen, vec![0]);
    }

    #[test]
    fn low_threshold_votes_and_checks_invariants() {
        let inst = small();
        for seed in 0..50 {
            for lazy in [false, true] {
                let params = VoteParams {
                    threshold: VoteThreshold::Fixed(2),
                    seed,
                    lazy,
                    checked: true,
                };
                let sol = construct_vote_cover(&inst, None, &params).unwrap();
                assert!(check_cover(&inst, &sol.chosen), "seed {seed}");
                let mut dedup = sol.chosen.clone();
                dedup.sort_unstable();
                dedup.dedup();
                assert_eq!(dedup.len(), sol.chosen.len());
            }
        }
    }

    #[test]
    fn stop_early_budgets() {
        let inst = small();
        let params = VoteParams::with_seed(1);
        // OPT = 2 here, so a budget of 0.5 cannot hold any cover.
        assert!(cvc_stop_early(&inst, None, 0.5, &params).unwrap().is_fail());
        let ok = cvc_stop_early(&inst, None, 8.0, &params).unwrap().covered().unwrap();
        assert!(check_cover(&inst, &ok.chosen));
    }

    #[test]
    fn limited_all_sets_equal() {
        let inst = ExplicitInstance::new(5, vec![(0..5).collect(); 4]).unwrap();
        for lazy in [false, true] {
            let params = VoteParams { lazy, ..VoteParams::with_seed(9) };
            let sol = construct_limited_vote_cover(&inst, None, &params).unwrap();
            assert!(check_cover(&inst, &sol.chosen));
            assert!(!sol.chosen.is_empty());
        }
    }

    #[test]
    fn limited_single_set() {
        let inst = ExplicitInstance::new(3, vec![vec![0, 1, 2]]).unwrap();
        let sol = construct_limited_vote_cover(&inst, None, &VoteParams::default()).unwrap();
        assert_eq!(sol.chosen, vec![0]);
    }

    #[test]
    fn uncoverable_everywhere() {
        let inst = ExplicitInstance::new(2, vec![vec![0]]).unwrap();
        let p = VoteParams::default();
        assert!(matches!(construct_vote_cover(&inst, None, &p), Err(Error::Uncoverable(1))));
        assert!(matches!(cvc_stop_early(&inst, None, 4.0, &p), Err(Error::Uncoverable(1))));
        assert!(matches!(construct_limited_vote_cover(&inst, None, &p), Err(Error::Uncoverable(1))));
    }

    #[test]
    fn deterministic() {
        let inst = small();
        let params = VoteParams {
            threshold: VoteThreshold::Fixed(2),
            ..VoteParams::with_seed(77)
        };
        let a = construct_limited_vote_cover(&inst, None, &params).unwrap();
        let b = construct_limited_vote_cover(&inst, None, &params).unwrap();
        assert_eq!(a, b);
    }
}
