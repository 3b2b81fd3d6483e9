//! Exact minimum neighborhoods against the greedy baseline on a line, where
//! the optimum is known: one edge at the ends, two inside.

use navgraph::instances::{gen_points, PointKind};
use navgraph::navbuild::build_classic_greedy;
use navgraph::verify::{exact_min_neighborhood, DEFAULT_ORACLE_CAP};
use navgraph::{DistanceOracle, Metric, PermutationIndex};

fn main() -> anyhow::Result<()> {
    let n = 12;
    let oracle = DistanceOracle::vector(gen_points(PointKind::Line, n, 1, 0)?, Metric::Euclidean)?;
    let idx = PermutationIndex::build(&oracle);
    let greedy = build_classic_greedy(&oracle)?.graph;
    let mut total = 0;
    for i in 0..n {
        let exact = exact_min_neighborhood(&idx, i, DEFAULT_ORACLE_CAP)?;
        total += exact.size;
        println!("node {i:2}: optimum {} via {:?}, greedy {:?}", exact.size, exact.witness, greedy.out(i));
    }
    println!("optimal total {total} = 2n - 2 = {}", 2 * n - 2);
    Ok(())
}
