//! Check navigability and follow greedy routes, before and after damaging
//! the graph.

use navgraph::instances::{gen_points, PointKind};
use navgraph::navbuild::{build, Algorithm, BuildConfig};
use navgraph::verify::{greedy_route, verify_navigable};
use navgraph::{DistanceOracle, Metric, SearchGraph};

fn main() -> anyhow::Result<()> {
    let oracle = DistanceOracle::vector(gen_points(PointKind::GaussianClusters { clusters: 4 }, 500, 2, 3)?, Metric::Euclidean)?;
    let graph = build(&oracle, Algorithm::Simple, &BuildConfig::with_seed(1))?.graph;

    println!("violations: {}", verify_navigable(&oracle, &graph)?.len());
    let path = greedy_route(&oracle, &graph, 0, 499);
    println!("route 0 -> 499: {path:?}");

    // Drop every node's first out-edge and look again.
    let damaged = SearchGraph::from_lists((0..graph.len()).map(|i| graph.out(i)[1..].iter().map(|&k| k as usize).collect::<Vec<_>>()))?;
    let violations = verify_navigable(&oracle, &damaged)?;
    println!("after removing {} edges: {} violating pairs", graph.len(), violations.len());
    if let Some(v) = violations.first() {
        let stuck = greedy_route(&oracle, &damaged, v.source, v.target);
        println!("route {} -> {} now stops at {:?}", v.source, v.target, stuck.last());
    }
    Ok(())
}
