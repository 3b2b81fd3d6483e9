//! Edge counts of the deterministic baselines next to the sparse builders.

use navgraph::instances::{gen_points, PointKind};
use navgraph::navbuild::{build, Algorithm, BuildConfig, Preset};
use navgraph::{DistanceOracle, Metric};

fn main() -> anyhow::Result<()> {
    let n = 1024;
    let oracle = DistanceOracle::vector(gen_points(PointKind::Uniform, n, 4, 1)?, Metric::Euclidean)?;
    println!("clique bound 2n^1.5 - n = {:.0}", 2.0 * (n as f64).powf(1.5) - n as f64);
    let practical = BuildConfig {
        preset: Preset::Practical,
        ..BuildConfig::with_seed(1)
    };
    for (label, algo, cfg) in [
        ("clique", Algorithm::Clique, BuildConfig::default()),
        ("greedy", Algorithm::Greedy, BuildConfig::default()),
        ("simple", Algorithm::Simple, BuildConfig::with_seed(1)),
        ("simple/practical", Algorithm::Simple, practical.clone()),
        ("full", Algorithm::Full, BuildConfig::with_seed(1)),
        ("full/practical", Algorithm::Full, practical),
    ] {
        let r = build(&oracle, algo, &cfg)?.report;
        println!("{label:>17}: {:7} edges, avg degree {:6.1}, {:6.0} ms", r.edges, r.avg_degree, r.wall_ms);
    }
    Ok(())
}
