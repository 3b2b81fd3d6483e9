//! Point sets whose solution points need exactly `OPT + 1` out-edges, where
//! `OPT` is the optimum of an embedded set-cover instance.

use navgraph::instances::{check_covering_properties, gen_covering_euclidean, gen_covering_general, gen_planted_cover};
use navgraph::verify::{exact_min_neighborhood, exact_min_neighborhood_strict, DEFAULT_ORACLE_CAP};
use navgraph::PermutationIndex;

fn main() -> anyhow::Result<()> {
    let planted = gen_planted_cover(6, 3, 6, 2)?;
    println!("instance sets: {:?}, optimum {}", planted.instance.sets(), planted.opt());

    for (name, cps) in [
        ("general", gen_covering_general(&planted.instance, 2, 1)?),
        ("euclidean", gen_covering_euclidean(&planted.instance, 2, 1)?),
    ] {
        let problems = check_covering_properties(&cps, &planted.instance);
        println!("{name}: {} points, property problems: {}", cps.oracle.len(), problems.len());
        let idx = PermutationIndex::build(&cps.oracle);
        for s in cps.layout.solutions.clone() {
            let strict = exact_min_neighborhood_strict(&cps.oracle, s, DEFAULT_ORACLE_CAP)?;
            let tie_broken = exact_min_neighborhood(&idx, s, DEFAULT_ORACLE_CAP)?;
            println!(
                "  solution point {s}: minimum neighborhood {} {:?} (tie-broken order: {})",
                strict.size, strict.witness, tie_broken.size
            );
        }
    }
    Ok(())
}
