//! Undirected bipartite graphs whose vertices keep their host-digraph ids.

use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BipartiteError {
    #[error("sides overlap in vertex {0}")]
    Overlap(usize),
    #[error("edge {{{0}, {1}}} does not join the two sides")]
    NotCrossing(usize, usize),
}

/// A bipartite graph with sides `left` and `right` drawn from `0..universe`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    universe: usize,
    left: VertexSet,
    right: VertexSet,
    adj: Vec<VertexSet>,
}

impl BipartiteGraph {
    pub fn new(universe: usize, left: VertexSet, right: VertexSet) -> Result<Self, BipartiteError> {
        if let Some(v) = left.first_common(&right) {
            return Err(BipartiteError::Overlap(v));
        }
        Ok(BipartiteGraph {
            universe,
            left,
            right,
            adj: vec![VertexSet::new(universe); universe],
        })
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), BipartiteError> {
        let crossing = (self.left.contains(a) && self.right.contains(b))
            || (self.left.contains(b) && self.right.contains(a));
        if !crossing {
            return Err(BipartiteError::NotCrossing(a, b));
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn left(&self) -> &VertexSet {
        &self.left
    }

    pub fn right(&self) -> &VertexSet {
        &self.right
    }

    /// All vertices on either side.
    pub fn vertices(&self) -> VertexSet {
        self.left.union(&self.right)
    }

    pub fn order(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn nbrs(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.universe && self.adj[a].contains(b)
    }

    pub fn num_edges(&self) -> usize {
        self.left.iter().map(|v| self.adj[v].len()).sum()
    }

    /// δ(G) over both sides; 0 for the empty graph.
    pub fn min_degree(&self) -> usize {
        self.vertices().iter().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// `G[L, R]` for `L ⊆ left`, `R ⊆ right`.
    pub fn restrict(&self, left: &VertexSet, right: &VertexSet) -> BipartiteGraph {
        let l = self.left.intersection(left);
        let r = self.right.intersection(right);
        let mut adj = vec![VertexSet::new(self.universe); self.universe];
        for v in l.iter() {
            adj[v] = self.adj[v].intersection(&r);
        }
        for v in r.iter() {
            adj[v] = self.adj[v].intersection(&l);
        }
        BipartiteGraph {
            universe: self.universe,
            left: l,
            right: r,
            adj,
        }
    }

    /// A copy over `universe + extra` ids; the new ids belong to neither side.
    pub fn grow(&self, extra: usize) -> BipartiteGraph {
        let universe = self.universe + extra;
        let lift = |s: &VertexSet| VertexSet::from_indices(universe, s.iter());
        let mut adj: Vec<VertexSet> = self.adj.iter().map(lift).collect();
        adj.resize(universe, VertexSet::new(universe));
        BipartiteGraph {
            universe,
            left: lift(&self.left),
            right: lift(&self.right),
            adj,
        }
    }

    /// Puts a vertex outside both sides onto the left (`true`) or right side.
    pub fn add_vertex(&mut self, v: usize, left: bool) -> Result<(), BipartiteError> {
        if self.left.contains(v) || self.right.contains(v) {
            return Err(BipartiteError::Overlap(v));
        }
        if left {
            self.left.insert(v);
        } else {
            self.right.insert(v);
        }
        Ok(())
    }

    /// Whether the underlying graph on all side vertices is connected.
    pub fn is_connected(&self) -> bool {
        let all = self.vertices();
        let Some(start) = all.first() else {
            return true;
        };
        let mut seen = VertexSet::new(self.universe);
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.adj[v].difference(&seen).iter() {
                seen.insert(w);
                stack.push(w);
            }
        }
        seen.len() == all.len()
    }
}

/// The bipartite graph on `U ∪ V` with `{u, v}` an edge iff `(u, v)` is an arc
/// of `d` with `u ∈ U` and `v ∈ V`.
pub fn bipartite_view(d: &Digraph, u: &VertexSet, v: &VertexSet) -> Result<BipartiteGraph, BipartiteError> {
    let mut g = BipartiteGraph::new(d.order(), u.clone(), v.clone())?;
    for a in u.iter() {
        g.adj[a] = d.out_nbrs(a).intersection(v);
    }
    for b in v.iter() {
        g.adj[b] = d.in_nbrs(b).intersection(u);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_way(k: usize) -> (Digraph, VertexSet, VertexSet) {
        let n = 2 * k;
        let arcs = (0..k).flat_map(|x| (k..n).map(move |y| (x, y)));
        let d = Digraph::from_arcs(n, arcs).unwrap();
        (d, VertexSet::from_range(n, 0..k), VertexSet::from_range(n, k..n))
    }

    #[test]
    fn forward_view_is_complete() {
        let (d, x, y) = one_way(3);
        let g = bipartite_view(&d, &x, &y).unwrap();
        assert_eq!(g.num_edges(), 9);
        assert_eq!(g.min_degree(), 3);
    }

    #[test]
    fn backward_view_is_empty() {
        let (d, x, y) = one_way(3);
        let g = bipartite_view(&d, &y, &x).unwrap();
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn overlapping_sides_rejected() {
        let d = Digraph::complete(4);
        let a = VertexSet::from_indices(4, [0, 1]);
        let b = VertexSet::from_indices(4, [1, 2]);
        assert_eq!(bipartite_view(&d, &a, &b), Err(BipartiteError::Overlap(1)));
    }
}
