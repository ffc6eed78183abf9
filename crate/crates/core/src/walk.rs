//! Oriented walks (the certificate type for paths and cycles) and the
//! independent verifiers every solver's output is checked against.

use crate::digraph::Digraph;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Path,
    Cycle,
}

/// A vertex sequence with one orientation bit per traversed edge.
///
/// Bit `i` is `true` when the arc is `(v_i, v_{i+1})` and `false` when it is
/// `(v_{i+1}, v_i)`. A path on `d` vertices carries `d − 1` bits; a cycle
/// carries `d`, the last one for the closing edge `(v_d, v_1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrientedWalk {
    pub vertices: Vec<usize>,
    pub forward: Vec<bool>,
    pub kind: WalkKind,
}

impl OrientedWalk {
    pub fn new(vertices: Vec<usize>, forward: Vec<bool>, kind: WalkKind) -> Self {
        OrientedWalk {
            vertices,
            forward,
            kind,
        }
    }

    pub fn empty_path() -> Self {
        OrientedWalk::new(Vec::new(), Vec::new(), WalkKind::Path)
    }

    /// Orientation bits alternate, starting with `first_forward`.
    pub fn alternating(vertices: Vec<usize>, first_forward: bool, kind: WalkKind) -> Self {
        let edges = edge_count(vertices.len(), kind);
        let forward = (0..edges).map(|i| (i % 2 == 0) == first_forward).collect();
        OrientedWalk::new(vertices, forward, kind)
    }

    /// Every edge oriented along the sequence.
    pub fn directed(vertices: Vec<usize>, kind: WalkKind) -> Self {
        let edges = edge_count(vertices.len(), kind);
        OrientedWalk::new(vertices, vec![true; edges], kind)
    }

    /// Orientation bits from a source/sink labelling: the arc between two
    /// consecutive vertices leaves whichever one is a source.
    pub fn from_sources(vertices: Vec<usize>, is_source: impl Fn(usize) -> bool, kind: WalkKind) -> Self {
        let edges = edge_count(vertices.len(), kind);
        let forward = (0..edges).map(|i| is_source(vertices[i])).collect();
        OrientedWalk::new(vertices, forward, kind)
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    /// The claimed arcs as (tail, head) pairs, in walk order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let d = self.vertices.len();
        self.forward.iter().enumerate().map(move |(i, &f)| {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % d]);
            if f {
                (a, b)
            } else {
                (b, a)
            }
        })
    }

    /// Whether consecutive orientation bits alternate (cyclically for cycles).
    pub fn alternates(&self) -> bool {
        let f = &self.forward;
        let linear = f.windows(2).all(|w| w[0] != w[1]);
        match self.kind {
            WalkKind::Path => linear,
            WalkKind::Cycle => linear && (f.len() < 2 || f[f.len() - 1] != f[0]),
        }
    }

    /// Vertices that are tails of both incident walk edges.
    pub fn sources(&self) -> Vec<usize> {
        let d = self.vertices.len();
        (0..d)
            .filter(|&i| {
                let out_next = self.forward.get(i).copied();
                let prev = match self.kind {
                    WalkKind::Cycle => Some((i + d - 1) % d),
                    WalkKind::Path => i.checked_sub(1),
                };
                let out_prev = prev.and_then(|p| self.forward.get(p)).map(|&f| !f);
                out_next.unwrap_or(true) && out_prev.unwrap_or(true)
            })
            .map(|i| self.vertices[i])
            .collect()
    }
}

fn edge_count(vertices: usize, kind: WalkKind) -> usize {
    match kind {
        WalkKind::Path => vertices.saturating_sub(1),
        WalkKind::Cycle => vertices,
    }
}

/// Structural predicates a walk may be required to satisfy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Requirements {
    pub anti_directed: bool,
    pub proper: bool,
    pub spanning: bool,
    pub directed: bool,
}

impl Requirements {
    pub const NONE: Requirements = Requirements {
        anti_directed: false,
        proper: false,
        spanning: false,
        directed: false,
    };
    /// Anti-directed Hamiltonian cycle.
    pub const ADHC: Requirements = Requirements {
        anti_directed: true,
        proper: false,
        spanning: true,
        directed: false,
    };
    pub const PROPER_ADP: Requirements = Requirements {
        anti_directed: true,
        proper: true,
        spanning: false,
        directed: false,
    };
    /// Directed Hamiltonian cycle.
    pub const DHC: Requirements = Requirements {
        anti_directed: false,
        proper: false,
        spanning: true,
        directed: true,
    };

    pub fn anti_directed(mut self) -> Self {
        self.anti_directed = true;
        self
    }

    pub fn proper(mut self) -> Self {
        self.proper = true;
        self
    }

    pub fn spanning(mut self) -> Self {
        self.spanning = true;
        self
    }

    pub fn directed(mut self) -> Self {
        self.directed = true;
        self
    }
}

/// The first predicate a certificate violates.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("walk of {vertices} vertices carries {bits} orientation bits, expected {expected}")]
    BitCount {
        vertices: usize,
        bits: usize,
        expected: usize,
    },
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
    #[error("vertex {0} is outside the digraph")]
    VertexOutOfRange(usize),
    #[error("vertex {0} appears more than once")]
    RepeatedVertex(usize),
    #[error("claimed arc ({0}, {1}) is not in the digraph")]
    MissingArc(usize, usize),
    #[error("edges {0} and {1} form a directed path")]
    NotAlternating(usize, usize),
    #[error("an anti-directed cycle cannot have odd length {0}")]
    OddCycle(usize),
    #[error("properness only applies to paths")]
    ProperNeedsPath,
    #[error("path of {0} vertices is not proper")]
    NotProper(usize),
    #[error("walk covers {covered} of {order} vertices")]
    NotSpanning { covered: usize, order: usize },
    #[error("edge {0} points backwards")]
    NotDirected(usize),
    #[error("walk {0} of the 2-factor is not a cycle")]
    NotCycle(usize),
    #[error("2-factor cycle {index} has length {len}; need even length at least 4")]
    BadFactorCycle { index: usize, len: usize },
    #[error("vertex {0} lies on two cycles")]
    Overlap(usize),
    #[error("vertex {0} is not covered")]
    Uncovered(usize),
    #[error("2-factor cycle {index}: {source}")]
    InFactor {
        index: usize,
        #[source]
        source: Box<Violation>,
    },
}

/// Checks `w` against `d` and the requested predicates.
///
/// Structural well-formedness (bit count, distinct in-range vertices, every
/// claimed arc present) is always checked.
pub fn verify_walk(d: &Digraph, w: &OrientedWalk, req: Requirements) -> Result<(), Violation> {
    let n = w.vertices.len();
    let expected = edge_count(n, w.kind);
    if w.forward.len() != expected {
        return Err(Violation::BitCount {
            vertices: n,
            bits: w.forward.len(),
            expected,
        });
    }
    if w.kind == WalkKind::Cycle && n < 3 {
        return Err(Violation::CycleTooShort(n));
    }
    let mut seen = vec![false; d.order()];
    for &v in &w.vertices {
        if v >= d.order() {
            return Err(Violation::VertexOutOfRange(v));
        }
        if seen[v] {
            return Err(Violation::RepeatedVertex(v));
        }
        seen[v] = true;
    }
    for (a, b) in w.arcs() {
        if !d.has_arc(a, b) {
            return Err(Violation::MissingArc(a, b));
        }
    }
    if req.anti_directed {
        if w.kind == WalkKind::Cycle && n % 2 == 1 {
            return Err(Violation::OddCycle(n));
        }
        let f = &w.forward;
        for i in 1..f.len() {
            if f[i] == f[i - 1] {
                return Err(Violation::NotAlternating(i - 1, i));
            }
        }
        if w.kind == WalkKind::Cycle && f[f.len() - 1] == f[0] {
            return Err(Violation::NotAlternating(f.len() - 1, 0));
        }
    }
    if req.proper {
        if w.kind != WalkKind::Path {
            return Err(Violation::ProperNeedsPath);
        }
        let ok = n % 2 == 0 && (n == 0 || (w.forward[0] && w.forward[n - 2]));
        if !ok {
            return Err(Violation::NotProper(n));
        }
    }
    if req.spanning && n != d.order() {
        return Err(Violation::NotSpanning {
            covered: n,
            order: d.order(),
        });
    }
    if req.directed {
        if let Some(i) = w.forward.iter().position(|&f| !f) {
            return Err(Violation::NotDirected(i));
        }
    }
    Ok(())
}

/// A spanning collection of vertex-disjoint anti-directed cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoFactorCert {
    pub cycles: Vec<OrientedWalk>,
}

impl TwoFactorCert {
    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    /// Cycle lengths in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles.iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

pub fn verify_two_factor(d: &Digraph, c: &TwoFactorCert) -> Result<(), Violation> {
    let mut seen = vec![false; d.order()];
    for (index, cyc) in c.cycles.iter().enumerate() {
        if cyc.kind != WalkKind::Cycle {
            return Err(Violation::NotCycle(index));
        }
        if cyc.len() < 4 || cyc.len() % 2 == 1 {
            return Err(Violation::BadFactorCycle {
                index,
                len: cyc.len(),
            });
        }
        verify_walk(d, cyc, Requirements::NONE.anti_directed()).map_err(|e| Violation::InFactor {
            index,
            source: Box::new(e),
        })?;
        for &v in &cyc.vertices {
            if seen[v] {
                return Err(Violation::Overlap(v));
            }
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Violation::Uncovered(v));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alt4() -> OrientedWalk {
        // a→b←c→d←a
        OrientedWalk::alternating(vec![0, 1, 2, 3], true, WalkKind::Cycle)
    }

    #[test]
    fn alternating_four_cycle_in_complete_digraph() {
        let d = Digraph::complete(4);
        assert_eq!(verify_walk(&d, &alt4(), Requirements::ADHC), Ok(()));
        assert_eq!(alt4().sources(), vec![0, 2]);
    }

    #[test]
    fn directed_six_cycle_is_not_anti_directed() {
        let d = Digraph::complete(6);
        let w = OrientedWalk::directed((0..6).collect(), WalkKind::Cycle);
        assert_eq!(
            verify_walk(&d, &w, Requirements::ADHC),
            Err(Violation::NotAlternating(0, 1))
        );
        assert_eq!(verify_walk(&d, &w, Requirements::DHC), Ok(()));
    }

    #[test]
    fn odd_cycle_never_anti_directed() {
        let d = Digraph::complete(5);
        for mask in 0u32..32 {
            let bits = (0..5).map(|i| mask >> i & 1 == 1).collect();
            let w = OrientedWalk::new((0..5).collect(), bits, WalkKind::Cycle);
            assert!(verify_walk(&d, &w, Requirements::NONE.anti_directed()).is_err());
        }
    }

    #[test]
    fn single_arc_is_proper() {
        let d = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let w = OrientedWalk::alternating(vec![0, 1], true, WalkKind::Path);
        assert_eq!(verify_walk(&d, &w, Requirements::PROPER_ADP), Ok(()));
        let rev = OrientedWalk::alternating(vec![1, 0], false, WalkKind::Path);
        assert_eq!(
            verify_walk(&d, &rev, Requirements::PROPER_ADP),
            Err(Violation::NotProper(2))
        );
    }

    #[test]
    fn missing_arc_and_repeats_detected() {
        let d = Digraph::from_arcs(3, [(0, 1)]).unwrap();
        let w = OrientedWalk::alternating(vec![0, 1, 2], true, WalkKind::Path);
        assert_eq!(verify_walk(&d, &w, Requirements::NONE), Err(Violation::MissingArc(2, 1)));
        let w = OrientedWalk::alternating(vec![0, 1, 0], true, WalkKind::Path);
        assert_eq!(verify_walk(&d, &w, Requirements::NONE), Err(Violation::RepeatedVertex(0)));
    }

    #[test]
    fn two_factor_checks() {
        let d = Digraph::complete(8);
        let c1 = OrientedWalk::alternating(vec![0, 1, 2, 3], true, WalkKind::Cycle);
        let c2 = OrientedWalk::alternating(vec![4, 5, 6, 7], false, WalkKind::Cycle);
        let cert = TwoFactorCert {
            cycles: vec![c1.clone(), c2],
        };
        assert_eq!(verify_two_factor(&d, &cert), Ok(()));
        let partial = TwoFactorCert {
            cycles: vec![c1.clone()],
        };
        assert_eq!(verify_two_factor(&d, &partial), Err(Violation::Uncovered(4)));
        let overlap = TwoFactorCert {
            cycles: vec![c1.clone(), c1],
        };
        assert_eq!(verify_two_factor(&d, &overlap), Err(Violation::Overlap(0)));
    }
}
