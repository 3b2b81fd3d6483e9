//! Constant-time set-cover queries from the permutation index.

use navgraph::{DistanceOracle, Metric, PermutationIndex, PointSet, PrefixTable, Strength};

fn main() -> anyhow::Result<()> {
    let points = PointSet::from_rows(vec![vec![0.0], vec![1.0], vec![3.0], vec![7.0]])?;
    let oracle = DistanceOracle::vector(points, Metric::Euclidean)?;
    let idx = PermutationIndex::build(&oracle);
    for j in 0..idx.len() {
        println!("row {j}: {:?}", idx.row(j));
    }
    // Node 1 stepping to 2 brings the search closer to 3 but not to 0.
    println!("member_of(1, 3, 2) = {}", idx.member_of(1, 3, 2));
    println!("member_of(1, 0, 2) = {}", idx.member_of(1, 0, 2));
    println!("freq(1, 3) = {}, sets: {:?}", idx.freq(1, 3), (1..=idx.freq(1, 3)).map(|l| idx.set_of(1, 3, l)).collect::<Vec<_>>());

    let alpha = PrefixTable::build(&idx, &oracle, Strength::Alpha(2.0))?;
    println!("with alpha = 2, node 1 reaches 3 through {} of those", alpha.prefix_len(1, 3));
    Ok(())
}
