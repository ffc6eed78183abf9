//! Plain depth-first searches: the ADHC oracle and the fallbacks used above
//! the subset-DP cutoff.

use super::{Budget, SolveError};
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use crate::walk::{OrientedWalk, WalkKind};

/// Exhaustive search over cyclic vertex orders starting at vertex 0, checking
/// each edge's orientation as the order is extended. Shares no code with the
/// table-based solver, which makes it usable as an oracle.
pub fn solve_adhc_naive(d: &Digraph) -> Option<OrientedWalk> {
    let n = d.order();
    if n < 4 || n % 2 == 1 {
        return None;
    }
    for first_forward in [true, false] {
        let mut order = vec![0];
        let mut used = vec![false; n];
        used[0] = true;
        if extend_alternating(d, &mut order, &mut used, first_forward) {
            return Some(OrientedWalk::alternating(order, first_forward, WalkKind::Cycle));
        }
    }
    None
}

fn edge_ok(d: &Digraph, a: usize, b: usize, forward: bool) -> bool {
    if forward {
        d.has_arc(a, b)
    } else {
        d.has_arc(b, a)
    }
}

fn extend_alternating(d: &Digraph, order: &mut Vec<usize>, used: &mut [bool], first_forward: bool) -> bool {
    let n = d.order();
    let i = order.len();
    let last = order[i - 1];
    if i == n {
        // Closing edge has index n − 1, which is odd.
        return edge_ok(d, last, order[0], !first_forward);
    }
    let forward = ((i - 1) % 2 == 0) == first_forward;
    for w in 0..n {
        if !used[w] && edge_ok(d, last, w, forward) {
            used[w] = true;
            order.push(w);
            if extend_alternating(d, order, used, first_forward) {
                return true;
            }
            order.pop();
            used[w] = false;
        }
    }
    false
}

/// Longest proper ADP by depth-first search from every possible first vertex.
pub(super) fn longest_proper_adp_dfs(d: &Digraph, budget: &mut Budget) -> Result<OrientedWalk, SolveError> {
    let n = d.order();
    let cap = n - n % 2;
    let mut best: Vec<usize> = Vec::new();
    let mut path = Vec::with_capacity(n);
    let mut free = d.vertex_set();
    for s in d.vertices() {
        if best.len() == cap {
            break;
        }
        if d.out_degree(s) == 0 {
            continue;
        }
        path.push(s);
        free.remove(s);
        proper_dfs(d, &mut path, &mut free, &mut best, cap, budget)?;
        free.insert(s);
        path.pop();
    }
    Ok(if best.is_empty() {
        OrientedWalk::empty_path()
    } else {
        OrientedWalk::alternating(best, true, WalkKind::Path)
    })
}

fn proper_dfs(
    d: &Digraph,
    path: &mut Vec<usize>,
    free: &mut VertexSet,
    best: &mut Vec<usize>,
    cap: usize,
    budget: &mut Budget,
) -> Result<(), SolveError> {
    budget.tick(1)?;
    if path.len() % 2 == 0 && path.len() > best.len() {
        best.clone_from(path);
    }
    if best.len() == cap || path.len() + free.len() <= best.len() {
        return Ok(());
    }
    let last = *path.last().unwrap();
    // Even positions are sources.
    let nbrs = if path.len() % 2 == 1 {
        d.out_nbrs(last).intersection(free)
    } else {
        d.in_nbrs(last).intersection(free)
    };
    for w in nbrs.iter() {
        path.push(w);
        free.remove(w);
        proper_dfs(d, path, free, best, cap, budget)?;
        free.insert(w);
        path.pop();
        if best.len() == cap {
            break;
        }
    }
    Ok(())
}

/// Directed Hamiltonian cycle by depth-first search from vertex 0, trying
/// successors with the fewest free out-neighbours first.
pub(super) fn directed_hc_dfs(d: &Digraph, budget: &mut Budget) -> Result<Option<OrientedWalk>, SolveError> {
    let mut path = vec![0];
    let mut free = d.vertex_set();
    free.remove(0);
    if dhc_dfs(d, &mut path, &mut free, budget)? {
        Ok(Some(OrientedWalk::directed(path, WalkKind::Cycle)))
    } else {
        Ok(None)
    }
}

fn dhc_dfs(d: &Digraph, path: &mut Vec<usize>, free: &mut VertexSet, budget: &mut Budget) -> Result<bool, SolveError> {
    budget.tick(1)?;
    let last = *path.last().unwrap();
    if free.is_empty() {
        return Ok(d.has_arc(last, path[0]));
    }
    let mut cands: Vec<(usize, usize)> = d
        .out_nbrs(last)
        .intersection(free)
        .iter()
        .map(|w| (d.out_nbrs(w).intersection_len(free), w))
        .collect();
    cands.sort_unstable();
    for (_, w) in cands {
        path.push(w);
        free.remove(w);
        if dhc_dfs(d, path, free, budget)? {
            return Ok(true);
        }
        free.insert(w);
        path.pop();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{verify_walk, Requirements};

    #[test]
    fn oracle_basics() {
        let d = Digraph::complete(4);
        let w = solve_adhc_naive(&d).unwrap();
        assert!(verify_walk(&d, &w, Requirements::ADHC).is_ok());
        assert!(solve_adhc_naive(&Digraph::complete(5)).is_none());
        let cyc = Digraph::from_arcs(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!(solve_adhc_naive(&cyc).is_none());
    }

    #[test]
    fn dfs_fallbacks() {
        let mut b = Budget::new(1_000_000);
        let d = Digraph::complete(7);
        let w = longest_proper_adp_dfs(&d, &mut b).unwrap();
        assert_eq!(w.len(), 6);
        assert!(verify_walk(&d, &w, Requirements::PROPER_ADP).is_ok());
        let c = directed_hc_dfs(&d, &mut b).unwrap().unwrap();
        assert!(verify_walk(&d, &c, Requirements::DHC).is_ok());
    }
}
