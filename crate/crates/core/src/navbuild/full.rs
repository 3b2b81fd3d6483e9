use std::time::Instant;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rayon::prelude::*;

use super::{finish, ng_cover, Build, BuildConfig, NgCoverParams, NodeInstance};
use crate::dataset::{DistanceOracle, SearchGraph};
use crate::error::Result;
use crate::perm_index::PermutationIndex;
use crate::rng::{substream2, StreamRng};

/// Near-quadratic builder: a double exponential search over the total edge
/// budget `ℓ*` and the per-node budget `ℓ`.
///
/// For a guess `ℓ*`, every node gets `2 (ℓ*/n) ln n` random out-neighbors.
/// Unfinished nodes are then repeatedly grouped into random cliques of size
/// `(ℓ*/n) ln n`; inside a clique each outside point only needs covering at
/// the member nearest to it, and only if the random edges missed it. Each
/// member solves its residual instance with budget `ℓ`, which doubles per
/// round. Once the budget in flight exceeds `ℓ* ln n` the guess doubles and
/// the level starts over.
pub fn build_full(oracle: &DistanceOracle, cfg: &BuildConfig) -> Result<Build> {
    let start = Instant::now();
    let mut out = build_full_with_index(&PermutationIndex::build(oracle), cfg)?;
    out.report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

/// `count` distinct ids drawn uniformly from `0..n` without `node`, sorted.
/// Panics if `count > n - 1`.
pub fn random_out_neighbors<R: Rng + ?Sized>(n: usize, node: usize, count: usize, rng: &mut R) -> Vec<usize> {
    let mut r: Vec<usize> = index::sample(rng, n - 1, count)
        .into_iter()
        .map(|x| if x >= node { x + 1 } else { x })
        .collect();
    r.sort_unstable();
    r
}

struct Level<'a> {
    idx: &'a PermutationIndex,
    cfg: &'a BuildConfig,
    randoms: Vec<Vec<usize>>,
    freq_cut: f64,
    level: u32,
}

#[derive(Default)]
struct CliqueOutcome {
    covers: Vec<Option<Vec<usize>>>,
    audit: Option<bool>,
}

const NO_CLIQUE: u32 = u32::MAX;

impl Level<'_> {
    /// The residual universe of every clique member, plus the number of
    /// high-frequency elements the random edges failed to cover.
    ///
    /// Every other member reaches a point `k` outside the clique through its
    /// clique edge to the member nearest to `k`, so `k` only lands in that
    /// member's universe. Each point's rank row is scanned once for all
    /// cliques, which keeps the accesses row-local.
    fn residuals(&self, cliques: &[&[usize]]) -> (Vec<Vec<Vec<usize>>>, u64) {
        let idx = self.idx;
        let n = idx.len();
        let mut clique_of = vec![NO_CLIQUE; n];
        let mut slot = vec![0u32; n];
        for (c, clique) in cliques.iter().enumerate() {
            for (a, &i) in clique.iter().enumerate() {
                clique_of[i] = c as u32;
                slot[i] = a as u32;
            }
        }
        let hits: Vec<(Vec<(u32, u32)>, u64)> = (0..n)
            .into_par_iter()
            .map_init(Vec::new, |seen: &mut Vec<bool>, k| {
                let row = idx.ranks(k);
                seen.clear();
                seen.resize(cliques.len(), false);
                let mut left = cliques.len();
                if clique_of[k] != NO_CLIQUE {
                    seen[clique_of[k] as usize] = true;
                    left -= 1;
                }
                let mut found = Vec::new();
                let mut misses = 0;
                // Walking k's row nearest-first, the first member met of each
                // clique is that clique's closest point to k.
                for (freq, &i) in idx.row(k).iter().enumerate() {
                    if left == 0 {
                        break;
                    }
                    let i = i as usize;
                    let c = clique_of[i];
                    if c == NO_CLIQUE || seen[c as usize] {
                        continue;
                    }
                    seen[c as usize] = true;
                    left -= 1;
                    // rank(k, i) is also the frequency of k in i's instance.
                    let freq = freq as u32;
                    if self.randoms[i].iter().any(|&r| row[r] < freq) {
                        continue;
                    }
                    if f64::from(freq) > self.freq_cut {
                        misses += 1;
                        if self.cfg.trust_random_edges {
                            continue;
                        }
                    }
                    found.push((c, slot[i]));
                }
                (found, misses)
            })
            .collect();

        let mut uncovered: Vec<Vec<Vec<usize>>> = cliques.iter().map(|c| vec![Vec::new(); c.len()]).collect();
        let mut misses = 0;
        for (k, (found, m)) in hits.into_iter().enumerate() {
            misses += m;
            for (c, a) in found {
                uncovered[c as usize][a as usize].push(k);
            }
        }
        (uncovered, misses)
    }

    fn solve_clique(
        &self,
        clique: &[usize],
        uncovered: &[Vec<usize>],
        params: &NgCoverParams,
        round: u64,
    ) -> Result<CliqueOutcome> {
        let idx = self.idx;
        let n = idx.len();
        let mut out = CliqueOutcome::default();

        if self.cfg.checked {
            let mut in_clique = vec![false; n];
            for &i in clique {
                in_clique[i] = true;
            }
            let honest: usize = clique
                .iter()
                .map(|&i| {
                    (0..n)
                        .filter(|&k| !in_clique[k])
                        .filter(|&k| !clique.iter().any(|&p| p != i && idx.member_of(i, k, p)))
                        .count()
                })
                .sum();
            out.audit = Some(honest <= n - clique.len());
        }

        for (&i, u) in clique.iter().zip(uncovered) {
            let mut rng: StreamRng = substream2(self.cfg.seed, "ngcover", (u64::from(self.level) << 32) | round, i as u64);
            out.covers.push(ng_cover(&NodeInstance::new(idx, i), u, params, &mut rng)?);
        }
        Ok(out)
    }
}

pub(crate) fn build_full_with_index(idx: &PermutationIndex, cfg: &BuildConfig) -> Result<Build> {
    let n = idx.len();
    let threshold = cfg.vote_threshold(n);
    if n <= 1 {
        let mut out = finish("full", cfg.seed, SearchGraph::empty(n));
        out.report.vote_threshold = threshold;
        return Ok(out);
    }
    let ln_n = (n as f64).ln();
    let mut trajectory = Vec::new();
    let mut restarts = 0;
    let mut misses = 0;
    let (mut clique_checks, mut clique_violations) = (0, 0);
    let mut level = 1u32;

    let (graph, l_star) = loop {
        let l_star = (n as u64) << level;
        trajectory.push(l_star);
        let per_node = l_star as f64 / n as f64 * ln_n;
        let r_size = ((cfg.random_edge_factor * per_node).floor() as usize).max(1);
        if r_size >= n - 1 {
            break (SearchGraph::complete(n), l_star);
        }
        let randoms: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = substream2(cfg.seed, "random-edges", u64::from(level), i as u64);
                random_out_neighbors(n, i, r_size, &mut rng)
            })
            .collect();
        let state = Level {
            idx,
            cfg,
            randoms,
            freq_cut: (n * n) as f64 / l_star as f64,
            level,
        };
        let clique_size = ((cfg.clique_factor * per_node).floor() as usize).max(1);

        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut done = vec![false; n];
        let mut queue: Vec<usize> = (0..n).collect();
        let mut lambda = 0usize;
        let mut ell = 2usize.min(n);
        let mut round = 0u64;
        let mut restart = false;
        while !queue.is_empty() {
            if (lambda + queue.len() * ell) as f64 > l_star as f64 * ln_n {
                restart = true;
                break;
            }
            queue.shuffle(&mut substream2(cfg.seed, "cliques", u64::from(level), round));
            let params = NgCoverParams {
                vote_threshold: threshold,
                size_limit: ell,
                checked: cfg.checked_voting,
            };
            let cliques: Vec<&[usize]> = queue.chunks(clique_size).collect();
            let (uncovered, round_misses) = state.residuals(&cliques);
            misses += round_misses;
            let outcomes = cliques
                .par_iter()
                .zip(&uncovered)
                .map(|(clique, u)| state.solve_clique(clique, u, &params, round))
                .collect::<Result<Vec<_>>>()?;
            for (clique, outcome) in cliques.iter().zip(outcomes) {
                if let Some(ok) = outcome.audit {
                    clique_checks += 1;
                    clique_violations += u64::from(!ok);
                }
                for (&i, cover) in clique.iter().zip(outcome.covers) {
                    let Some(cover) = cover else { continue };
                    lambda += cover.len();
                    let list = &mut lists[i];
                    list.extend_from_slice(&state.randoms[i]);
                    list.extend(clique.iter().copied().filter(|&p| p != i));
                    list.extend(cover);
                    done[i] = true;
                }
            }
            queue.retain(|&i| !done[i]);
            ell = (ell * 2).min(n);
            round += 1;
        }
        if !restart {
            break (SearchGraph::from_lists(lists)?, l_star);
        }
        restarts += 1;
        level += 1;
    };

    let mut out = finish("full", cfg.seed, graph);
    let r = &mut out.report;
    r.vote_threshold = threshold;
    r.l_star_trajectory = trajectory;
    r.restarts = restarts;
    r.edge_bound = Some(4.0 * l_star as f64 * ln_n);
    r.random_edge_misses = misses;
    r.clique_checks = clique_checks;
    r.clique_violations = clique_violations;
    Ok(out)
}
