//! Greedy set cover against its voting simulations on a planted instance.

use navgraph::instances::gen_planted_cover;
use navgraph::setcover::{
    check_cover, construct_limited_vote_cover, construct_vote_cover, cvc_stop_early, greedy_set_cover, VoteParams,
    VoteThreshold,
};

fn main() -> anyhow::Result<()> {
    let planted = gen_planted_cover(4096, 64, 4096, 11)?;
    let inst = &planted.instance;
    println!("planted optimum: {}", planted.opt());

    let greedy = greedy_set_cover(inst, None)?;
    println!("greedy:  {} sets", greedy.len());

    let params = VoteParams {
        threshold: VoteThreshold::LogSum(2.0),
        ..VoteParams::with_seed(5)
    };
    let vote = construct_vote_cover(inst, None, &params)?;
    println!("vote:    {} sets, {} votes cast", vote.len(), vote.stats.votes_cast);

    for lazy in [false, true] {
        let p = VoteParams { lazy, ..params };
        let sol = construct_limited_vote_cover(inst, None, &p)?;
        assert!(check_cover(inst, &sol.chosen));
        println!(
            "limited{}: {} sets, {} voters promoted, {} random + {} repair sets",
            if lazy { " (lazy)" } else { "" },
            sol.len(),
            sol.stats.voters_promoted,
            sol.stats.added_random,
            sol.stats.repaired
        );
    }

    for budget in [16.0, 256.0] {
        let attempt = cvc_stop_early(inst, None, budget, &params)?;
        match attempt.covered() {
            Some(sol) => println!("stop-early, budget {budget}: {} sets", sol.len()),
            None => println!("stop-early, budget {budget}: fail"),
        }
    }
    Ok(())
}
