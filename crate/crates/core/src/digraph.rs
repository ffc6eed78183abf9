//! Loopless digraphs on a dense vertex range with bit-block neighborhoods.

use crate::bitset::VertexSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("arc ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("loop arc ({0}, {0}) is not allowed")]
    Loop(usize),
}

/// A loopless directed graph. Immutable once built.
///
/// Both `out_nbrs(v)` and `in_nbrs(v)` are stored, which keeps the
/// consistency invariant `u ∈ out(v) ⇔ v ∈ in(u)` checkable and makes every
/// in/out degree query a popcount.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    order: usize,
    out: Vec<VertexSet>,
    inn: Vec<VertexSet>,
    arcs: usize,
}

/// Minimum degree statistics of a digraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SemiDegrees {
    /// δ⁺, minimum out-degree.
    pub min_out: usize,
    /// δ⁻, minimum in-degree.
    pub min_in: usize,
    /// δ⁰ = min(δ⁺, δ⁻).
    pub min_semi: usize,
    /// Minimum total degree deg⁺(v) + deg⁻(v).
    pub min_total: usize,
}

impl Digraph {
    /// The digraph on `order` vertices with no arcs.
    pub fn empty(order: usize) -> Self {
        Digraph {
            order,
            out: vec![VertexSet::new(order); order],
            inn: vec![VertexSet::new(order); order],
            arcs: 0,
        }
    }

    /// Every ordered pair of distinct vertices is an arc.
    pub fn complete(order: usize) -> Self {
        let mut d = Digraph::empty(order);
        for u in 0..order {
            for v in 0..order {
                if u != v {
                    d.insert_arc(u, v);
                }
            }
        }
        d
    }

    /// Builds a digraph from an arc list; duplicates collapse.
    pub fn from_arcs<I>(order: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Digraph::empty(order);
        for (u, v) in arcs {
            if u >= order || v >= order {
                return Err(GraphError::VertexOutOfRange(u, v, order));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            d.insert_arc(u, v);
        }
        Ok(d)
    }

    fn insert_arc(&mut self, u: usize, v: usize) {
        if self.out[u].insert(v) {
            self.inn[v].insert(u);
            self.arcs += 1;
        }
    }

    /// A copy with the extra arcs added.
    pub fn with_arcs<I>(&self, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = self.clone();
        for (u, v) in arcs {
            if u >= self.order || v >= self.order {
                return Err(GraphError::VertexOutOfRange(u, v, self.order));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            d.insert_arc(u, v);
        }
        Ok(d)
    }

    /// A copy with the listed arcs removed (absent arcs are ignored).
    pub fn without_arcs<I>(&self, arcs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = self.clone();
        for (u, v) in arcs {
            if u < d.order && v < d.order && d.out[u].remove(v) {
                d.inn[v].remove(u);
                d.arcs -= 1;
            }
        }
        d
    }

    /// Every arc reversed.
    pub fn reversed(&self) -> Self {
        Digraph {
            order: self.order,
            out: self.inn.clone(),
            inn: self.out.clone(),
            arcs: self.arcs,
        }
    }

    /// Relabels vertex `v` as `perm[v]`; `perm` must be a permutation.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.order);
        let mut d = Digraph::empty(self.order);
        for (u, v) in self.arcs() {
            d.insert_arc(perm[u], perm[v]);
        }
        d
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Total number of arcs.
    #[inline]
    pub fn num_arcs(&self) -> usize {
        self.arcs
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.order && self.out[u].contains(v)
    }

    #[inline]
    pub fn out_nbrs(&self, v: usize) -> &VertexSet {
        &self.out[v]
    }

    #[inline]
    pub fn in_nbrs(&self, v: usize) -> &VertexSet {
        &self.inn[v]
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    /// deg⁺(v, S).
    #[inline]
    pub fn out_degree_in(&self, v: usize, s: &VertexSet) -> usize {
        self.out[v].intersection_len(s)
    }

    /// deg⁻(v, S).
    #[inline]
    pub fn in_degree_in(&self, v: usize, s: &VertexSet) -> usize {
        self.inn[v].intersection_len(s)
    }

    /// deg⁰(v, S) = min(deg⁺(v, S), deg⁻(v, S)).
    #[inline]
    pub fn semi_degree_in(&self, v: usize, s: &VertexSet) -> usize {
        self.out_degree_in(v, s).min(self.in_degree_in(v, s))
    }

    /// Vertices joined to `v` by arcs in both directions.
    pub fn digon_partners(&self, v: usize) -> VertexSet {
        self.out[v].intersection(&self.inn[v])
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.order)
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    pub fn semi_degrees(&self) -> SemiDegrees {
        if self.order == 0 {
            return SemiDegrees {
                min_out: 0,
                min_in: 0,
                min_semi: 0,
                min_total: 0,
            };
        }
        let mut s = SemiDegrees {
            min_out: usize::MAX,
            min_in: usize::MAX,
            min_semi: usize::MAX,
            min_total: usize::MAX,
        };
        for v in self.vertices() {
            let (o, i) = (self.out_degree(v), self.in_degree(v));
            s.min_out = s.min_out.min(o);
            s.min_in = s.min_in.min(i);
            s.min_total = s.min_total.min(o + i);
        }
        s.min_semi = s.min_out.min(s.min_in);
        s
    }

    /// δ⁰(D).
    pub fn min_semi_degree(&self) -> usize {
        self.semi_degrees().min_semi
    }

    /// Δ⁺(D).
    pub fn max_out_degree(&self) -> usize {
        self.vertices().map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    /// Δ⁻(D).
    pub fn max_in_degree(&self) -> usize {
        self.vertices().map(|v| self.in_degree(v)).max().unwrap_or(0)
    }

    /// Maximum of deg⁺(v) + deg⁻(v).
    pub fn max_total_degree(&self) -> usize {
        self.vertices()
            .map(|v| self.out_degree(v) + self.in_degree(v))
            .max()
            .unwrap_or(0)
    }

    /// e→(A, B): arcs (a, b) with a ∈ A and b ∈ B.
    ///
    /// Vertices of A ∩ B contribute their internal arcs once per ordered pair.
    pub fn arc_count(&self, a: &VertexSet, b: &VertexSet) -> usize {
        a.iter().map(|u| self.out[u].intersection_len(b)).sum()
    }

    /// The subdigraph induced by `s`, relabelled `0..|s|` in ascending order.
    ///
    /// Returns the digraph and `map`, where `map[new] = old`.
    pub fn induced(&self, s: &VertexSet) -> (Digraph, Vec<usize>) {
        let map: Vec<usize> = s.iter().collect();
        let mut back = vec![usize::MAX; self.order];
        for (i, &v) in map.iter().enumerate() {
            back[v] = i;
        }
        let mut d = Digraph::empty(map.len());
        for (i, &u) in map.iter().enumerate() {
            for v in self.out[u].intersection(s).iter() {
                d.insert_arc(i, back[v]);
            }
        }
        (d, map)
    }

    /// `D − X`: deletes the vertices of `x` and relabels the rest.
    pub fn remove_vertices(&self, x: &VertexSet) -> (Digraph, Vec<usize>) {
        self.induced(&x.complement())
    }

    /// Checks the stored invariants; used by tests.
    pub fn check_invariants(&self) -> bool {
        let mut out_sum = 0;
        let mut in_sum = 0;
        for v in self.vertices() {
            if self.out[v].contains(v) || self.inn[v].contains(v) {
                return false;
            }
            for u in self.out[v].iter() {
                if !self.inn[u].contains(v) {
                    return false;
                }
            }
            for u in self.inn[v].iter() {
                if !self.out[u].contains(v) {
                    return false;
                }
            }
            out_sum += self.out_degree(v);
            in_sum += self.in_degree(v);
        }
        out_sum == in_sum && out_sum == self.arcs
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph({} vertices, {} arcs)", self.order, self.arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_digraph_degrees() {
        let d = Digraph::complete(5);
        assert_eq!(d.num_arcs(), 20);
        let s = d.semi_degrees();
        assert_eq!(s.min_semi, 4);
        assert_eq!(s.min_total, 8);
        assert!(d.check_invariants());
    }

    #[test]
    fn loops_and_range_rejected() {
        assert_eq!(Digraph::from_arcs(3, [(0, 0)]), Err(GraphError::Loop(0)));
        assert!(matches!(
            Digraph::from_arcs(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange(0, 3, 3))
        ));
    }

    #[test]
    fn duplicate_arcs_collapse() {
        let d = Digraph::from_arcs(3, [(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(d.num_arcs(), 2);
        assert_eq!(d.digon_partners(0).to_vec(), vec![1]);
    }

    #[test]
    fn arc_count_on_complete() {
        let d = Digraph::complete(4);
        let all = d.vertex_set();
        assert_eq!(d.arc_count(&all, &all), 12);
        assert_eq!(d.arc_count(&VertexSet::new(4), &all), 0);
    }

    #[test]
    fn induced_extremes() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (full, map) = d.induced(&d.vertex_set());
        assert_eq!(full, d);
        assert_eq!(map, vec![0, 1, 2, 3]);
        let (empty, map) = d.induced(&VertexSet::new(4));
        assert_eq!(empty.order(), 0);
        assert!(map.is_empty());
    }

    #[test]
    fn reversal_swaps_neighborhoods() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        let r = d.reversed();
        assert!(r.has_arc(1, 0) && r.has_arc(2, 1) && !r.has_arc(0, 1));
        assert!(r.check_invariants());
    }
}
