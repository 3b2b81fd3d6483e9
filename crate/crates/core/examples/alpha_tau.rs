//! Strengthened graphs: α-shortcut reachable and τ-monotonic.

use navgraph::instances::{gen_points, PointKind};
use navgraph::navbuild::{build, Algorithm, BuildConfig};
use navgraph::verify::{verify_navigable, verify_strength};
use navgraph::{DistanceOracle, Metric};

fn main() -> anyhow::Result<()> {
    let oracle = DistanceOracle::vector(gen_points(PointKind::Uniform, 800, 2, 9)?, Metric::Euclidean)?;
    let cfg = BuildConfig::with_seed(3);
    for algo in [
        Algorithm::Simple,
        Algorithm::Alpha(1.2),
        Algorithm::Alpha(2.0),
        Algorithm::Tau(0.01),
        Algorithm::Tau(0.05),
    ] {
        let built = build(&oracle, algo, &cfg)?;
        let own = match algo.strength() {
            Some(s) => verify_strength(&oracle, &built.graph, s)?.len(),
            None => verify_navigable(&oracle, &built.graph)?.len(),
        };
        // Any strengthened graph is navigable as well.
        let plain = verify_navigable(&oracle, &built.graph)?.len();
        println!("{:>10}: avg degree {:7.1}, violations {own} (plain {plain})", algo.label(), built.report.avg_degree);
    }
    Ok(())
}
