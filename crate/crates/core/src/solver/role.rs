//! ADHC by branching on source/sink roles.
//!
//! In an ADHC every vertex is a source or a sink and the two classes have
//! equal size; conversely, a Hamiltonian cycle in the bipartite graph of
//! source→sink arcs is an ADHC. Roles are assigned one vertex at a time and a
//! branch dies as soon as some assigned source has fewer than two possible
//! sinks among its out-neighbours, or some sink fewer than two possible
//! sources among its in-neighbours.

use super::{bip, Budget, BranchRule, SolveError, SolverConfig};
use crate::bipartite::bipartite_view;
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use crate::walk::{OrientedWalk, WalkKind};
use rand_chacha::ChaCha8Rng;

struct Search<'a> {
    d: &'a Digraph,
    order: Vec<usize>,
    can_source: VertexSet,
    can_sink: VertexSet,
    sources: VertexSet,
    sinks: VertexSet,
    open: VertexSet,
    restarts: usize,
}

pub(super) fn adhc(
    d: &Digraph,
    cfg: &SolverConfig,
    budget: &mut Budget,
    rng: &mut ChaCha8Rng,
) -> Result<Option<OrientedWalk>, SolveError> {
    let n = d.order();
    let mut order: Vec<usize> = d.vertices().collect();
    if cfg.branch_rule == BranchRule::MinDomain {
        order.sort_by_key(|&v| (d.out_degree(v).min(d.in_degree(v)), v));
    }
    let mut s = Search {
        d,
        order,
        can_source: VertexSet::from_indices(n, d.vertices().filter(|&v| d.out_degree(v) >= 2)),
        can_sink: VertexSet::from_indices(n, d.vertices().filter(|&v| d.in_degree(v) >= 2)),
        sources: VertexSet::new(n),
        sinks: VertexSet::new(n),
        open: d.vertex_set(),
        restarts: cfg.restarts,
    };
    let cycle = s.branch(0, budget, rng)?;
    Ok(cycle.map(|(c, sources)| OrientedWalk::from_sources(c, |v| sources.contains(v), WalkKind::Cycle)))
}

impl Search<'_> {
    fn consistent(&self) -> bool {
        let half = self.d.order() / 2;
        if self.sources.len() > half || self.sinks.len() > half {
            return false;
        }
        let maybe_sink = self.sinks.union(&self.open.intersection(&self.can_sink));
        let maybe_source = self.sources.union(&self.open.intersection(&self.can_source));
        if maybe_sink.len() < half || maybe_source.len() < half {
            return false;
        }
        self.sources.iter().all(|v| self.d.out_nbrs(v).intersection_len(&maybe_sink) >= 2)
            && self.sinks.iter().all(|v| self.d.in_nbrs(v).intersection_len(&maybe_source) >= 2)
    }

    fn branch(
        &mut self,
        depth: usize,
        budget: &mut Budget,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<(Vec<usize>, VertexSet)>, SolveError> {
        budget.tick(1)?;
        if depth == self.order.len() {
            let g = bipartite_view(self.d, &self.sources, &self.sinks).expect("roles are disjoint");
            let c = bip::ham_cycle(&g, self.restarts, true, budget, rng)?;
            return Ok(c.map(|c| (c, self.sources.clone())));
        }
        let v = self.order[depth];
        self.open.remove(v);
        // Try the role with more room first.
        let prefer_source = self.d.out_degree(v) >= self.d.in_degree(v);
        for as_source in [prefer_source, !prefer_source] {
            let allowed = if as_source {
                self.can_source.contains(v)
            } else {
                self.can_sink.contains(v)
            };
            if !allowed {
                continue;
            }
            let side = if as_source {
                &mut self.sources
            } else {
                &mut self.sinks
            };
            side.insert(v);
            if self.consistent() {
                if let Some(found) = self.branch(depth + 1, budget, rng)? {
                    return Ok(Some(found));
                }
            }
            let side = if as_source {
                &mut self.sources
            } else {
                &mut self.sinks
            };
            side.remove(v);
        }
        self.open.insert(v);
        Ok(None)
    }
}
