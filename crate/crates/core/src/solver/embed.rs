//! Spanning subdigraph embedding by backtracking over candidate sets.

use super::{Budget, SolveError};
use crate::bitset::VertexSet;
use crate::digraph::Digraph;

pub(super) fn embed(host: &Digraph, pattern: &Digraph, budget: &mut Budget) -> Result<Option<Vec<usize>>, SolveError> {
    let n = pattern.order();
    if pattern.num_arcs() > host.num_arcs()
        || pattern.max_total_degree() > host.max_total_degree()
        || pattern.max_out_degree() > host.max_out_degree()
        || pattern.max_in_degree() > host.max_in_degree()
    {
        return Ok(None);
    }
    let order = match_order(pattern);
    let mut image = vec![usize::MAX; n];
    let mut used = VertexSet::new(n);
    let found = extend(host, pattern, &order, 0, &mut image, &mut used, budget)?;
    Ok(found.then_some(image))
}

/// Highest-degree vertex first, then always the unmatched vertex with the
/// most matched neighbours.
fn match_order(p: &Digraph) -> Vec<usize> {
    let n = p.order();
    let total = |v: usize| p.out_degree(v) + p.in_degree(v);
    let mut placed = VertexSet::new(n);
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let v = (0..n)
            .filter(|&v| !placed.contains(v))
            .max_by_key(|&v| {
                let linked = p.out_nbrs(v).intersection_len(&placed) + p.in_nbrs(v).intersection_len(&placed);
                (linked, total(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed.insert(v);
        order.push(v);
    }
    order
}

fn extend(
    host: &Digraph,
    pattern: &Digraph,
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut VertexSet,
    budget: &mut Budget,
) -> Result<bool, SolveError> {
    if depth == order.len() {
        return Ok(true);
    }
    budget.tick(1)?;
    let p = order[depth];
    let mut cands = used.complement();
    for q in pattern.out_nbrs(p).iter().filter(|&q| image[q] != usize::MAX) {
        cands.intersect_with(host.in_nbrs(image[q]));
    }
    for q in pattern.in_nbrs(p).iter().filter(|&q| image[q] != usize::MAX) {
        cands.intersect_with(host.out_nbrs(image[q]));
    }
    for h in cands.iter() {
        if host.out_degree(h) < pattern.out_degree(p) || host.in_degree(h) < pattern.in_degree(p) {
            continue;
        }
        image[p] = h;
        used.insert(h);
        if extend(host, pattern, order, depth + 1, image, used, budget)? {
            return Ok(true);
        }
        used.remove(h);
        image[p] = usize::MAX;
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_anti_ladder, gen_oriented_cycle, CyclePattern};

    #[test]
    fn eight_cycle_into_ladder() {
        let host = gen_anti_ladder(4);
        let (pattern, _) = gen_oriented_cycle(&CyclePattern::Alternating(8)).unwrap();
        let f = embed(&host, &pattern, &mut Budget::new(1_000_000)).unwrap().unwrap();
        for (u, v) in pattern.arcs() {
            assert!(host.has_arc(f[u], f[v]));
        }
    }

    #[test]
    fn degree_fast_path() {
        let host = gen_anti_ladder(4);
        let pattern = Digraph::complete(8);
        let mut b = Budget::new(5);
        assert_eq!(embed(&host, &pattern, &mut b).unwrap(), None);
        assert_eq!(b.used(), 0);
    }
}
