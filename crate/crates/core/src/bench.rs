//! Timing matrix over builders, sizes and seeds.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataset::{DistanceOracle, Metric};
use crate::error::{Error, Result};
use crate::instances::{gen_points, PointKind};
use crate::navbuild::{build, Algorithm, BuildConfig};
use crate::verify::{verify_navigable, verify_strength};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub algos: Vec<Algorithm>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub kind: PointKind,
    pub dim: usize,
    pub metric: Metric,
    /// Template for every build; its seed is replaced per row.
    pub build: BuildConfig,
    /// Run the matching verifier on every graph.
    pub verify: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            algos: vec![Algorithm::Full],
            sizes: vec![512, 1024, 2048, 4096],
            seeds: vec![0],
            kind: PointKind::Uniform,
            dim: 8,
            metric: Metric::Euclidean,
            build: BuildConfig::default(),
            verify: true,
        }
    }
}

/// One `(algo, n, seed)` cell. `build_ms` and `verify_ms` are the only
/// columns that vary between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algo: String,
    pub n: usize,
    pub dim: usize,
    pub metric: String,
    pub seed: u64,
    pub edges: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    pub build_ms: f64,
    pub verify_ms: f64,
    /// Outcome of the verifier; false when verification was skipped or the
    /// build failed.
    pub verified: bool,
    /// Empty unless the build or the verifier returned an error.
    pub error: String,
}

impl BenchRecord {
    /// The record with its timing columns zeroed.
    pub fn without_timing(&self) -> Self {
        Self {
            build_ms: 0.0,
            verify_ms: 0.0,
            ..self.clone()
        }
    }
}

/// Runs every cell sequentially so timings do not interfere; each build and
/// verification still uses the whole thread pool. Points for a given
/// `(n, seed)` are shared by all algorithms.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    run_bench_with(cfg, |_| {})
}

/// As [`run_bench`], calling `on_row` as soon as each row is finished.
pub fn run_bench_with<F: FnMut(&BenchRecord)>(cfg: &BenchConfig, mut on_row: F) -> Result<Vec<BenchRecord>> {
    if cfg.algos.is_empty() || cfg.sizes.is_empty() || cfg.seeds.is_empty() {
        return Err(Error::input("bench needs at least one algorithm, size and seed"));
    }
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        for &seed in &cfg.seeds {
            let points = gen_points(cfg.kind, n, cfg.dim, seed)?;
            let dim = points.dim();
            let oracle = DistanceOracle::vector(points, cfg.metric)?;
            for &algo in &cfg.algos {
                let row = cell(&oracle, algo, cfg, seed, dim);
                on_row(&row);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

fn cell(oracle: &DistanceOracle, algo: Algorithm, cfg: &BenchConfig, seed: u64, dim: usize) -> BenchRecord {
    let mut row = BenchRecord {
        algo: algo.label(),
        n: oracle.len(),
        dim,
        metric: oracle.kind_name().to_string(),
        seed,
        edges: 0,
        avg_degree: 0.0,
        max_degree: 0,
        build_ms: 0.0,
        verify_ms: 0.0,
        verified: false,
        error: String::new(),
    };
    let build_cfg = BuildConfig {
        seed,
        ..cfg.build.clone()
    };
    let start = Instant::now();
    let built = match build(oracle, algo, &build_cfg) {
        Ok(b) => b,
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    };
    row.build_ms = start.elapsed().as_secs_f64() * 1e3;
    row.edges = built.report.edges;
    row.avg_degree = built.report.avg_degree;
    row.max_degree = built.report.max_degree;
    if cfg.verify {
        let start = Instant::now();
        let outcome = match algo.strength() {
            Some(s) => verify_strength(oracle, &built.graph, s),
            None => verify_navigable(oracle, &built.graph),
        };
        row.verify_ms = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(v) => row.verified = v.is_empty(),
            Err(e) => row.error = e.to_string(),
        }
    }
    row
}

/// Writes the records as CSV with a header row.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::input(format!("csv: {other:?}")),
    }
}

/// Least-squares slope of `ln y` against `ln x`. Needs two distinct
/// positive `x` values; points with non-positive coordinates are ignored.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Per algorithm, in first-seen order: the slope of build time against `n`,
/// fitted to the mean time of each size.
pub fn build_time_slopes(records: &[BenchRecord]) -> Vec<(String, Option<f64>)> {
    let mut algos: Vec<&str> = Vec::new();
    for r in records {
        if !algos.contains(&r.algo.as_str()) {
            algos.push(&r.algo);
        }
    }
    algos
        .into_iter()
        .map(|algo| {
            let mut by_n: Vec<(usize, f64, usize)> = Vec::new();
            for r in records.iter().filter(|r| r.algo == algo && r.error.is_empty()) {
                match by_n.iter_mut().find(|e| e.0 == r.n) {
                    Some(e) => {
                        e.1 += r.build_ms;
                        e.2 += 1;
                    }
                    None => by_n.push((r.n, r.build_ms, 1)),
                }
            }
            let pts: Vec<(f64, f64)> = by_n.iter().map(|&(n, t, c)| (n as f64, t / c as f64)).collect();
            (algo.to_string(), loglog_slope(&pts))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [512.0, 1024.0, 2048.0, 4096.0].iter().map(|&n: &f64| (n, 3.0 * n.powf(2.2))).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.2).abs() < 1e-9);
        assert_eq!(loglog_slope(&[(1.0, 1.0)]), None);
        assert_eq!(loglog_slope(&[(2.0, 1.0), (2.0, 5.0)]), None);
    }

    #[test]
    fn single_clique_cell() {
        let cfg = BenchConfig {
            algos: vec![Algorithm::Clique],
            sizes: vec![64],
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].verified);
        assert_eq!(rows[0].metric, "l2");
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("algo,n,dim,metric,seed,edges,avg_degree,max_degree,build_ms,verify_ms,verified,error\n"));
        assert_eq!(text.lines().count(), 2);
    }
}
