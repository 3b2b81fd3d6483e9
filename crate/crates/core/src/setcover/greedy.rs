use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{ensure_coverable, CoverAccess, CoverSolution};
use crate::error::Result;

/// Classic greedy: repeatedly take the set covering the most still-uncovered
/// elements of `universe` (default: `acc.universe()`), smallest id on ties.
///
/// Keys only ever decrease, so stale heap entries are refreshed lazily when
/// popped instead of being updated in place.
pub fn greedy_set_cover<A: CoverAccess + ?Sized>(acc: &A, universe: Option<&[usize]>) -> Result<CoverSolution> {
    let owned;
    let universe = match universe {
        Some(u) => u,
        None => {
            owned = acc.universe();
            &owned
        }
    };
    ensure_coverable(acc, universe)?;

    let mut uncovered = vec![false; acc.n_elements()];
    let mut count = vec![0usize; acc.n_sets()];
    for &e in universe {
        if !std::mem::replace(&mut uncovered[e], true) {
            for s in acc.sets_of(e) {
                count[s] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = count
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(s, &c)| (c, Reverse(s)))
        .collect();

    let mut sol = CoverSolution::default();
    while let Some((key, Reverse(s))) = heap.pop() {
        let current = count[s];
        if current == 0 {
            continue;
        }
        if current < key {
            heap.push((current, Reverse(s)));
            continue;
        }
        sol.chosen.push(s);
        sol.stats.added_by_greedy += 1;
        for e in acc.elements_of(s) {
            if std::mem::replace(&mut uncovered[e], false) {
                for t in acc.sets_of(e) {
                    count[t] -= 1;
                }
            }
        }
    }
    Ok(sol)
}
