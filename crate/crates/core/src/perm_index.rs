//! Distance-ordered permutation rows and their inverse ranks.
//!
//! Row `j` lists every point id in increasing `(d(p_j, .), id)` order, so
//! `p_j` itself always comes first. With the rank table this answers, for the
//! covering instance of node `i`:
//!
//! * membership: `p_j` lies in the set of `k` iff `k` precedes `i` in row `j`;
//! * frequency: the number of such `k` is `rank[j][i]`, which includes `k = j`;
//! * enumeration: those sets are exactly the first `rank[j][i]` entries of row `j`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::DistanceOracle;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationIndex {
    n: usize,
    pi: Vec<u32>,
    rank: Vec<u32>,
}

/// Integer key ordered exactly like `f64::total_cmp`.
fn total_key(x: f64) -> i64 {
    let bits = x.to_bits() as i64;
    bits ^ (((bits >> 63) as u64) >> 1) as i64
}

impl PermutationIndex {
    /// Sorts every row; rows are independent and sorted in parallel.
    pub fn build(oracle: &DistanceOracle) -> Self {
        let n = oracle.len();
        assert!(n <= u32::MAX as usize, "point count exceeds u32 ids");
        let mut pi = vec![0u32; n * n];
        let mut rank = vec![0u32; n * n];
        pi.par_chunks_mut(n.max(1))
            .zip(rank.par_chunks_mut(n.max(1)))
            .enumerate()
            .for_each_init(
                || (Vec::new(), Vec::new()),
                |(dist, keyed), (j, (row, ranks))| {
                    oracle.distances_from(j, dist);
                    keyed.clear();
                    keyed.extend(dist.iter().zip(0u32..).map(|(&d, id)| (total_key(d), id)));
                    keyed.sort_unstable();
                    for (pos, (slot, &(_, id))) in row.iter_mut().zip(keyed.iter()).enumerate() {
                        *slot = id;
                        ranks[id as usize] = pos as u32;
                    }
                },
            );
        Self { n, pi, rank }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Row `j`: all ids, nearest to `p_j` first.
    #[inline]
    pub fn row(&self, j: usize) -> &[u32] {
        &self.pi[j * self.n..(j + 1) * self.n]
    }

    /// Inverse of row `j`: entry `i` is `rank(j, i)`.
    #[inline]
    pub fn ranks(&self, j: usize) -> &[u32] {
        &self.rank[j * self.n..(j + 1) * self.n]
    }

    /// Position of `i` in row `j`.
    #[inline]
    pub fn rank(&self, j: usize, i: usize) -> usize {
        self.rank[j * self.n + i] as usize
    }

    /// Does stepping from `i` to `k` bring the search strictly closer to `p_j`?
    #[inline]
    pub fn member_of(&self, i: usize, j: usize, k: usize) -> bool {
        self.rank(j, k) < self.rank(j, i)
    }

    /// Number of `k` with `member_of(i, j, k)`; unchecked form of [`Self::freq_of`].
    #[inline]
    pub fn freq(&self, i: usize, j: usize) -> usize {
        self.rank(j, i)
    }

    /// Counts the sets of node `i`'s instance containing `p_j`, including the
    /// set of `j` itself.
    pub fn freq_of(&self, i: usize, j: usize) -> Result<usize> {
        if i == j {
            return Err(Error::input(format!("freq_of({i}, {i}): element is the source node")));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::input(format!("freq_of({i}, {j}) with n = {}", self.n)));
        }
        Ok(self.freq(i, j))
    }

    /// The `l`-th (1-based) set of node `i`'s instance containing `p_j`, in
    /// increasing distance from `p_j`; `None` past the last one.
    #[inline]
    pub fn set_of(&self, i: usize, j: usize, l: usize) -> Option<usize> {
        (l >= 1 && l <= self.rank(j, i)).then(|| self.row(j)[l - 1] as usize)
    }

    /// Writes one permutation row per line.
    pub fn dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for j in 0..self.n {
            let row: Vec<String> = self.row(j).iter().map(u32::to_string).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        w.flush()
    }
}

/// The strengthened step condition used by α-shortcut reachable and
/// τ-monotonic graphs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strength {
    /// A step to `k` helps target `j` iff `d(k, j) < d(i, j) / α`.
    Alpha(f64),
    /// A step to `k` helps target `j` iff `d(k, j) < d(i, j) - τ`, and the
    /// direct step `k = j` always helps.
    Tau(f64),
}

impl Strength {
    pub fn validate(self) -> Result<Self> {
        match self {
            Strength::Alpha(a) if !(a.is_finite() && a >= 1.0) => {
                Err(Error::input(format!("alpha must be a finite value >= 1, got {a}")))
            }
            Strength::Tau(t) if !(t.is_finite() && t >= 0.0) => {
                Err(Error::input(format!("tau must be a finite value >= 0, got {t}")))
            }
            s => Ok(s),
        }
    }

    /// Distance below which a neighbor of `i` counts as progress towards a
    /// target at distance `d` from `i`.
    #[inline]
    pub fn threshold(self, d: f64) -> f64 {
        match self {
            Strength::Alpha(a) => d / a,
            Strength::Tau(t) => d - t,
        }
    }

    /// Does stepping from `i` to `k` make progress towards target `j`? Ties
    /// at exactly the threshold are broken by comparing `k` against `i`.
    #[inline]
    pub fn helps(self, oracle: &DistanceOracle, i: usize, j: usize, k: usize) -> bool {
        self.helps_at(i, j, k, oracle.distance(j, i), oracle.distance(j, k))
    }

    /// [`Self::helps`] with `d(j, i)` and `d(j, k)` supplied by the caller.
    #[inline]
    pub fn helps_at(self, i: usize, j: usize, k: usize, d_ji: f64, d_jk: f64) -> bool {
        if k == j && matches!(self, Strength::Tau(_)) && i != j {
            return true;
        }
        d_jk.total_cmp(&self.threshold(d_ji)).then(k.cmp(&i)).is_lt()
    }
}

/// Per-pair prefix lengths for a strengthened instance: the sets of node `i`
/// containing `p_j` are the first `len(i, j)` entries of row `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixTable {
    strength: Strength,
    n: usize,
    len: Vec<u32>,
}

impl PrefixTable {
    pub fn build(idx: &PermutationIndex, oracle: &DistanceOracle, strength: Strength) -> Result<Self> {
        let strength = strength.validate()?;
        let n = idx.len();
        if oracle.len() != n {
            return Err(Error::input("index and oracle disagree on the point count"));
        }
        // Filled column by column (one row of the permutation matrix each), then transposed.
        let mut by_j = vec![0u32; n * n];
        by_j.par_chunks_mut(n.max(1))
            .enumerate()
            .for_each_init(Vec::new, |sorted, (j, out)| {
                let row = idx.row(j);
                sorted.clear();
                sorted.extend(row.iter().map(|&k| oracle.distance(j, k as usize)));
                for (i, slot) in out.iter_mut().enumerate() {
                    if i == j {
                        continue;
                    }
                    let t = strength.threshold(oracle.distance(j, i));
                    let mut pp = partition_point(n, |p| {
                        sorted[p].total_cmp(&t).then((row[p] as usize).cmp(&i)).is_lt()
                    });
                    if matches!(strength, Strength::Tau(_)) {
                        pp = pp.max(1);
                    }
                    *slot = pp as u32;
                }
            });
        let mut len = vec![0u32; n * n];
        for j in 0..n {
            for i in 0..n {
                len[i * n + j] = by_j[j * n + i];
            }
        }
        Ok(Self { strength, n, len })
    }

    pub fn strength(&self) -> Strength {
        self.strength
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of sets of node `i`'s strengthened instance containing `p_j`.
    #[inline]
    pub fn prefix_len(&self, i: usize, j: usize) -> usize {
        self.len[i * self.n + j] as usize
    }

    #[inline]
    pub fn member_of(&self, idx: &PermutationIndex, i: usize, j: usize, k: usize) -> bool {
        idx.rank(j, k) < self.prefix_len(i, j)
    }

    #[inline]
    pub fn set_of(&self, idx: &PermutationIndex, i: usize, j: usize, l: usize) -> Option<usize> {
        (l >= 1 && l <= self.prefix_len(i, j)).then(|| idx.row(j)[l - 1] as usize)
    }
}

/// First position in `0..n` where `pred` is false; `pred` must be monotone.
fn partition_point(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_key_matches_total_cmp() {
        let xs = [f64::NEG_INFINITY, -2.5, -0.0, 0.0, 1e-300, 1.0, 3.5, f64::INFINITY, f64::NAN];
        for a in xs {
            for b in xs {
                assert_eq!(total_key(a).cmp(&total_key(b)), a.total_cmp(&b), "{a} vs {b}");
            }
        }
    }
    use crate::dataset::{Metric, PointSet};

    fn line() -> DistanceOracle {
        let rows = [0.0, 1.0, 3.0, 7.0].iter().map(|&x| vec![x]).collect();
        DistanceOracle::vector(PointSet::from_rows(rows).unwrap(), Metric::Euclidean).unwrap()
    }

    #[test]
    fn line_rows() {
        let idx = PermutationIndex::build(&line());
        assert_eq!(idx.row(0), &[0, 1, 2, 3]);
        assert_eq!(idx.row(3), &[3, 2, 1, 0]);
        for j in 0..4 {
            assert_eq!(idx.row(j)[0] as usize, j);
        }
    }

    #[test]
    fn line_queries() {
        let idx = PermutationIndex::build(&line());
        assert_eq!(idx.freq_of(0, 3).unwrap(), 3);
        assert!(idx.freq_of(2, 2).is_err());
        assert_eq!(idx.set_of(0, 3, 1), Some(3));
        assert_eq!(idx.set_of(0, 3, 4), None);
        assert_eq!(idx.set_of(0, 3, 0), None);
        assert!(!idx.member_of(0, 3, 0));
        assert!(idx.member_of(0, 3, 3));
        // p_1 and p_0 are mutual nearest neighbors.
        assert_eq!(idx.freq_of(0, 1).unwrap(), 1);
    }

    #[test]
    fn alpha_two_on_line() {
        let o = line();
        let idx = PermutationIndex::build(&o);
        let t = PrefixTable::build(&idx, &o, Strength::Alpha(2.0)).unwrap();
        let members: Vec<usize> = (1..4).filter(|&j| t.member_of(&idx, 0, j, 2)).collect();
        assert_eq!(members, vec![2]);
    }

    #[test]
    fn alpha_one_matches_freq() {
        let o = line();
        let idx = PermutationIndex::build(&o);
        let t = PrefixTable::build(&idx, &o, Strength::Alpha(1.0)).unwrap();
        for i in 0..4 {
            for j in (0..4).filter(|&j| j != i) {
                assert_eq!(t.prefix_len(i, j), idx.freq(i, j));
            }
        }
    }

    #[test]
    fn huge_tau_keeps_only_the_direct_set() {
        let o = line();
        let idx = PermutationIndex::build(&o);
        let t = PrefixTable::build(&idx, &o, Strength::Tau(100.0)).unwrap();
        for i in 0..4 {
            for j in (0..4).filter(|&j| j != i) {
                assert_eq!(t.prefix_len(i, j), 1);
                assert_eq!(t.set_of(&idx, i, j, 1), Some(j));
            }
        }
    }

    #[test]
    fn invalid_strength() {
        let o = line();
        let idx = PermutationIndex::build(&o);
        assert!(PrefixTable::build(&idx, &o, Strength::Alpha(0.5)).is_err());
        assert!(PrefixTable::build(&idx, &o, Strength::Tau(-1.0)).is_err());
        assert!(PrefixTable::build(&idx, &o, Strength::Alpha(f64::NAN)).is_err());
    }
}
