use serde::{Deserialize, Serialize};

use crate::dataset::SearchGraph;

/// Statistics of one build. Everything except `wall_ms` is a deterministic
/// function of the input and the configuration.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub algorithm: String,
    pub seed: u64,
    pub n: usize,
    pub edges: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    /// `degree_histogram[d]` nodes have out-degree `d`.
    pub degree_histogram: Vec<usize>,
    pub vote_threshold: usize,
    /// Every `ℓ*` level tried, in order (full builder only).
    pub l_star_trajectory: Vec<u64>,
    pub restarts: u32,
    /// `4 ℓ* ln n` for the final level (full builder only).
    pub edge_bound: Option<f64>,
    /// Elements skipped by the frequency filter that the random edges did not
    /// cover, and which were therefore handed to the per-node cover instead.
    pub random_edge_misses: u64,
    /// Cliques whose uncovered counts were audited (checked mode).
    pub clique_checks: u64,
    /// Audited cliques exceeding `n - |K|` uncovered elements in total.
    pub clique_violations: u64,
    pub wall_ms: f64,
}

impl BuildReport {
    pub(crate) fn new(algorithm: &str, seed: u64, graph: &SearchGraph) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            seed,
            n: graph.len(),
            edges: graph.edge_count(),
            avg_degree: graph.avg_degree(),
            max_degree: graph.max_degree(),
            degree_histogram: graph.degree_histogram(),
            ..Self::default()
        }
    }

    /// JSON with the timing field zeroed, for reproducibility comparisons.
    pub fn stable_json(&self) -> String {
        let mut r = self.clone();
        r.wall_ms = 0.0;
        serde_json::to_string_pretty(&r).expect("report serializes")
    }
}
