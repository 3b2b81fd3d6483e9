//! Build a sparse navigable graph over random points and print its report.
//!
//!     cargo run --release --example build_graph -- 2000 8

use navgraph::instances::{gen_points, PointKind};
use navgraph::navbuild::{build, Algorithm, BuildConfig};
use navgraph::{DistanceOracle, Metric};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>());
    let n = args.next().transpose()?.unwrap_or(1000);
    let dim = args.next().transpose()?.unwrap_or(8);

    let points = gen_points(PointKind::Uniform, n, dim, 7)?;
    let oracle = DistanceOracle::vector(points, Metric::Euclidean)?;

    let built = build(&oracle, Algorithm::Full, &BuildConfig::with_seed(42))?;
    let r = &built.report;
    println!("n = {n}, dim = {dim}");
    println!("edges {} (bound {:.0}), avg degree {:.1}, max degree {}", r.edges, r.edge_bound.unwrap_or(f64::NAN), r.avg_degree, r.max_degree);
    println!("l* levels tried {:?}, {} restarts, {:.0} ms", r.l_star_trajectory, r.restarts, r.wall_ms);
    println!("complete graph would have {} edges", n * (n - 1));
    Ok(())
}
