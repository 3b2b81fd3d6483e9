//! Navigable graph construction.
//!
//! Every builder returns a graph in which each node `i` has, for every other
//! point `j`, an out-neighbor strictly closer to `j` than `i` is (or closer by
//! the α/τ-strengthened margin). The sparse builders treat each node's
//! neighborhood as a set-cover instance over a shared [`PermutationIndex`].

mod access;
mod alpha_tau;
mod baselines;
mod full;
mod ngcover;
mod report;
mod simple;

use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use access::NodeInstance;
pub use alpha_tau::{build_alpha, build_strengthened, build_tau};
pub use baselines::{build_classic_greedy, build_clique_baseline, clique_groups};
pub use full::{build_full, random_out_neighbors};
pub use ngcover::{ng_cover, vote_threshold, NgCoverParams};
pub use report::BuildReport;
pub use simple::build_simple;

use crate::dataset::{DistanceOracle, SearchGraph};
use crate::error::{Error, Result};
use crate::perm_index::{PermutationIndex, Strength};

/// Constant sets for the sparse builders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Vote threshold `⌈15 ln n⌉`, as analyzed.
    #[default]
    Analyzed,
    /// Vote threshold `⌈2 ln n⌉`; fewer votes per added set, same guarantees
    /// on validity.
    Practical,
}

impl Preset {
    pub fn vote_factor(self) -> f64 {
        match self {
            Preset::Analyzed => 15.0,
            Preset::Practical => 2.0,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analyzed" => Ok(Preset::Analyzed),
            "practical" => Ok(Preset::Practical),
            _ => Err(Error::input(format!("unknown preset {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub seed: u64,
    pub preset: Preset,
    /// Overrides the preset's `c` in the vote threshold `⌈c ln n⌉`.
    pub vote_factor: Option<f64>,
    /// Random out-neighbors per node are `⌊factor · (ℓ*/n) ln n⌋`.
    pub random_edge_factor: f64,
    /// Clique size is `⌊factor · (ℓ*/n) ln n⌋`.
    pub clique_factor: f64,
    /// Audit clique coverage while building; results land in the report.
    pub checked: bool,
    /// Re-verify the voting pools by brute force after every step. Slow.
    pub checked_voting: bool,
    /// Drop high-frequency elements without checking that the random edges
    /// cover them. Faster, but the output is then navigable only with high
    /// probability.
    pub trust_random_edges: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            preset: Preset::Analyzed,
            vote_factor: None,
            random_edge_factor: 2.0,
            clique_factor: 1.0,
            checked: false,
            checked_voting: false,
            trust_random_edges: false,
        }
    }
}

impl BuildConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn vote_threshold(&self, n: usize) -> usize {
        vote_threshold(n, self.vote_factor.unwrap_or(self.preset.vote_factor()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Full,
    Simple,
    Clique,
    Greedy,
    Alpha(f64),
    Tau(f64),
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Accepts `full`, `simple`, `clique`, `greedy`, `alpha:A` and `tau:T`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        let value = |what: &str| -> Result<f64> {
            let arg = arg.ok_or_else(|| Error::input(format!("{what} needs a value, e.g. {what}:1.5")))?;
            arg.parse()
                .map_err(|_| Error::input(format!("bad {what} value {arg:?}")))
        };
        let algo = match name {
            "full" => Algorithm::Full,
            "simple" => Algorithm::Simple,
            "clique" => Algorithm::Clique,
            "greedy" => Algorithm::Greedy,
            "alpha" => Algorithm::Alpha(value("alpha")?),
            "tau" => Algorithm::Tau(value("tau")?),
            _ => return Err(Error::input(format!("unknown algorithm {s:?}"))),
        };
        if arg.is_some() && algo.strength().is_none() {
            return Err(Error::input(format!("algorithm {name:?} takes no value")));
        }
        if let Some(st) = algo.strength() {
            st.validate()?;
        }
        Ok(algo)
    }
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Full => "full",
            Algorithm::Simple => "simple",
            Algorithm::Clique => "clique",
            Algorithm::Greedy => "greedy",
            Algorithm::Alpha(_) => "alpha",
            Algorithm::Tau(_) => "tau",
        }
    }

    /// Name plus parameter, e.g. `alpha:1.5`; parses back with `FromStr`.
    pub fn label(self) -> String {
        match self {
            Algorithm::Alpha(a) => format!("alpha:{a}"),
            Algorithm::Tau(t) => format!("tau:{t}"),
            other => other.name().to_string(),
        }
    }

    /// The navigability notion the output satisfies.
    pub fn strength(self) -> Option<Strength> {
        match self {
            Algorithm::Alpha(a) => Some(Strength::Alpha(a)),
            Algorithm::Tau(t) => Some(Strength::Tau(t)),
            _ => None,
        }
    }
}

/// A graph together with its build statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct Build {
    pub graph: SearchGraph,
    pub report: BuildReport,
}

/// Builds with `algo`, constructing the permutation index when needed.
pub fn build(oracle: &DistanceOracle, algo: Algorithm, cfg: &BuildConfig) -> Result<Build> {
    let start = Instant::now();
    let mut out = match algo {
        Algorithm::Clique => build_clique_baseline(oracle)?,
        _ => {
            let idx = PermutationIndex::build(oracle);
            build_with_index(&idx, oracle, algo, cfg)?
        }
    };
    out.report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

/// Builds with `algo` over an existing index of `oracle`.
pub fn build_with_index(idx: &PermutationIndex, oracle: &DistanceOracle, algo: Algorithm, cfg: &BuildConfig) -> Result<Build> {
    if idx.len() != oracle.len() {
        return Err(Error::input("index and oracle disagree on the point count"));
    }
    let start = Instant::now();
    let mut out = match algo {
        Algorithm::Full => full::build_full_with_index(idx, cfg)?,
        Algorithm::Simple => simple::build_simple_with_index(idx, cfg)?,
        Algorithm::Clique => build_clique_baseline(oracle)?,
        Algorithm::Greedy => baselines::build_classic_greedy_with_index(idx)?,
        Algorithm::Alpha(_) | Algorithm::Tau(_) => {
            let strength = algo.strength().expect("strengthened algorithm");
            alpha_tau::build_strengthened_with_index(idx, oracle, strength, cfg)?
        }
    };
    out.report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

pub(crate) fn finish(algorithm: &str, seed: u64, graph: SearchGraph) -> Build {
    let report = BuildReport::new(algorithm, seed, &graph);
    Build { graph, report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Metric, PointSet};
    use crate::instances::{gen_points, PointKind};
    use crate::rng::substream;
    use crate::setcover::CoverAccess;

    #[test]
    fn algorithm_labels_round_trip() {
        for algo in [
            Algorithm::Full,
            Algorithm::Simple,
            Algorithm::Clique,
            Algorithm::Greedy,
            Algorithm::Alpha(1.5),
            Algorithm::Tau(0.25),
        ] {
            assert_eq!(algo.label().parse::<Algorithm>().unwrap(), algo);
        }
        assert!("alpha".parse::<Algorithm>().is_err());
        assert!("alpha:0.5".parse::<Algorithm>().is_err());
        assert!("full:2".parse::<Algorithm>().is_err());
        assert!("vamana".parse::<Algorithm>().is_err());
    }
    use crate::verify::{verify_navigable, verify_strength};

    fn oracle(kind: PointKind, n: usize, dim: usize, seed: u64) -> DistanceOracle {
        DistanceOracle::vector(gen_points(kind, n, dim, seed).unwrap(), Metric::Euclidean).unwrap()
    }

    const ALL: [Algorithm; 6] = [
        Algorithm::Full,
        Algorithm::Simple,
        Algorithm::Clique,
        Algorithm::Greedy,
        Algorithm::Alpha(1.5),
        Algorithm::Tau(0.1),
    ];

    #[test]
    fn tiny_inputs() {
        let one = DistanceOracle::vector(PointSet::from_rows(vec![vec![0.0]]).unwrap(), Metric::Euclidean).unwrap();
        let two = oracle(PointKind::Line, 2, 1, 0);
        for algo in ALL {
            for seed in 0..3 {
                let cfg = BuildConfig::with_seed(seed);
                assert_eq!(build(&one, algo, &cfg).unwrap().graph.edge_count(), 0, "{algo:?}");
                assert_eq!(build(&two, algo, &cfg).unwrap().graph.to_edge_string(), "0 1\n1 0\n", "{algo:?}");
            }
        }
    }

    #[test]
    fn every_builder_is_sound_on_small_inputs() {
        for (kind, dim) in [(PointKind::Line, 1), (PointKind::Uniform, 2), (PointKind::GaussianClusters { clusters: 3 }, 4)] {
            for n in [3, 17, 60] {
                let o = oracle(kind, n, dim, n as u64);
                for algo in ALL {
                    let cfg = BuildConfig {
                        checked: true,
                        checked_voting: true,
                        ..BuildConfig::with_seed(7)
                    };
                    let b = build(&o, algo, &cfg).unwrap();
                    let v = match algo.strength() {
                        Some(s) => verify_strength(&o, &b.graph, s).unwrap(),
                        None => verify_navigable(&o, &b.graph).unwrap(),
                    };
                    assert!(v.is_empty(), "{algo:?} {kind:?} n={n}: {:?}", &v[..v.len().min(5)]);
                    assert_eq!(b.report.edges, b.graph.edge_count());
                    assert_eq!(b.report.clique_violations, 0);
                }
            }
        }
    }

    #[test]
    fn clique_baseline_on_line() {
        let b = build_clique_baseline(&oracle(PointKind::Line, 4, 1, 0)).unwrap();
        assert_eq!(b.graph.edge_count(), 8);
        assert_eq!(clique_groups(4), vec![0..2, 2..4]);
    }

    #[test]
    fn ng_cover_edge_cases() {
        let o = oracle(PointKind::Line, 8, 1, 0);
        let idx = PermutationIndex::build(&o);
        let inst = NodeInstance::new(&idx, 3);
        let u = inst.universe();
        let mut rng = substream(0, "t", 0);
        let all = ng_cover(&inst, &u, &NgCoverParams::new(8, 8), &mut rng).unwrap().unwrap();
        let mut sorted = all.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, u);
        let tight = NgCoverParams {
            vote_threshold: 100,
            size_limit: 1,
            checked: true,
        };
        assert_eq!(ng_cover(&inst, &u, &tight, &mut rng).unwrap(), None);
    }

    #[test]
    fn greedy_line_degrees() {
        let b = build_classic_greedy(&oracle(PointKind::Line, 8, 1, 0)).unwrap();
        assert_eq!(b.graph.out(0).len(), 1);
        assert_eq!(b.graph.out(7).len(), 1);
        for i in 1..7 {
            assert!(b.graph.out(i).len() as f64 <= 2.0 * (8f64.ln() + 1.0));
        }
    }

    #[test]
    fn huge_tau_needs_direct_edges() {
        let o = oracle(PointKind::Uniform, 20, 2, 1);
        let b = build_tau(&o, 1e6, &BuildConfig::with_seed(1)).unwrap();
        assert_eq!(b.graph.edge_count(), 20 * 19);
    }

    #[test]
    fn full_respects_edge_bound() {
        for seed in 0..5 {
            let b = build_full(&oracle(PointKind::Uniform, 300, 3, seed), &BuildConfig::with_seed(seed)).unwrap();
            assert!(b.report.edges as f64 <= b.report.edge_bound.unwrap());
        }
    }
}
