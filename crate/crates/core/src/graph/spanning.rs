use rand::Rng as _;

use super::Network;
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Uniformly random spanning tree of a connected network (edge weights are
/// ignored), by Wilson's loop-erased random walk. Returned edges satisfy
/// `u < v` and are sorted.
pub fn uniform_spanning_tree(g: &Network, rng: &mut Rng) -> Result<Vec<(usize, usize)>> {
    let n = g.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    if !g.is_connected() {
        return Err(Error::Structure("spanning tree requires a connected network".into()));
    }
    let nbrs: Vec<Vec<usize>> = (0..n).map(|u| g.proper_neighbors(u).collect()).collect();
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[rng.random_range(0..n)] = true;
    for start in 0..n {
        // Random walk from `start` until hitting the tree; overwriting
        // `next` erases loops implicitly.
        let mut u = start;
        while !in_tree[u] {
            let nb = &nbrs[u];
            next[u] = nb[rng.random_range(0..nb.len())];
            u = next[u];
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u];
        }
    }
    let mut edges: Vec<(usize, usize)> = (0..n)
        .filter(|&u| next[u] != usize::MAX)
        .map(|u| (u.min(next[u]), u.max(next[u])))
        .collect();
    edges.sort_unstable();
    Ok(edges)
}
