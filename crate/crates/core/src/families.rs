//! Named digraph constructions, a seeded random sampler, and a recognizer for
//! the two exceptional extremal digraphs.
//!
//! Canonical labelling of `F(n, k)`: `Y1 = 0..k`, `X1 = k..n/2`,
//! `Y2 = n/2..n/2+k`, `X2 = n/2+k..n`.

use crate::bipartite::BipartiteGraph;
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use crate::walk::{OrientedWalk, WalkKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("n = {0} must be even")]
    OddOrder(usize),
    #[error("k = {k} must lie in 0..={max} for n = {n}")]
    KOutOfRange { n: usize, k: usize, max: usize },
    #[error("n = {n} is below the minimum {min} for this family")]
    TooSmall { n: usize, min: usize },
    #[error("an alternating orientation needs an even length, got {0}")]
    OddAlternating(usize),
    #[error("an oriented cycle needs at least 3 edges, got {0}")]
    CycleTooShort(usize),
    #[error("minimum semi-degree {d} is impossible on {n} vertices")]
    Infeasible { n: usize, d: usize },
    #[error("density {0} is not a probability")]
    BadDensity(f64),
}

/// The four blocks of an `F(n, k)` labelling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPartition {
    pub n: usize,
    pub k: usize,
    pub y1: VertexSet,
    pub x1: VertexSet,
    pub y2: VertexSet,
    pub x2: VertexSet,
}

impl FPartition {
    pub fn canonical(n: usize, k: usize) -> Self {
        let h = n / 2;
        FPartition {
            n,
            k,
            y1: VertexSet::from_range(n, 0..k),
            x1: VertexSet::from_range(n, k..h),
            y2: VertexSet::from_range(n, h..h + k),
            x2: VertexSet::from_range(n, h + k..n),
        }
    }

    /// `Y_i` for `i ∈ {1, 2}`.
    pub fn y(&self, i: usize) -> &VertexSet {
        if i == 1 {
            &self.y1
        } else {
            &self.y2
        }
    }

    /// `X_i` for `i ∈ {1, 2}`.
    pub fn x(&self, i: usize) -> &VertexSet {
        if i == 1 {
            &self.x1
        } else {
            &self.x2
        }
    }
}

fn check_order(n: usize, min: usize) -> Result<(), FamilyError> {
    if n % 2 == 1 {
        return Err(FamilyError::OddOrder(n));
    }
    if n < min {
        return Err(FamilyError::TooSmall { n, min });
    }
    Ok(())
}

/// `F(n, k)`: `Y_i → Y_i ∪ X_i` and `X_i → Y_{3−i} ∪ X_{3−i}`.
pub fn gen_f(n: usize, k: usize) -> Result<(Digraph, FPartition), FamilyError> {
    check_order(n, 2)?;
    if k > n / 2 {
        return Err(FamilyError::KOutOfRange { n, k, max: n / 2 });
    }
    let p = FPartition::canonical(n, k);
    let mut arcs = Vec::new();
    for i in [1, 2] {
        let own = p.y(i).union(p.x(i));
        let other = p.y(3 - i).union(p.x(3 - i));
        for u in p.y(i).iter() {
            arcs.extend(own.iter().filter(|&v| v != u).map(|v| (u, v)));
        }
        for u in p.x(i).iter() {
            arcs.extend(other.iter().map(|v| (u, v)));
        }
    }
    let d = Digraph::from_arcs(n, arcs).expect("generated arcs are valid");
    Ok((d, p))
}

/// `F(n, 1)` plus the digon `y1 ↔ y2`.
pub fn gen_f1(n: usize) -> Result<Digraph, FamilyError> {
    check_order(n, 4)?;
    let (d, _) = gen_f(n, 1)?;
    let (y1, y2) = (0, n / 2);
    Ok(d.with_arcs([(y1, y2), (y2, y1)]).expect("valid arcs"))
}

/// `F(n, 1)` plus the directed triangle `y1 → y2 → x → y1`, `x` the lowest
/// vertex of `X1`.
pub fn gen_f2(n: usize) -> Result<Digraph, FamilyError> {
    check_order(n, 4)?;
    let (d, _) = gen_f(n, 1)?;
    let (y1, x, y2) = (0, 1, n / 2);
    Ok(d.with_arcs([(y1, y2), (y2, x), (x, y1)]).expect("valid arcs"))
}

/// The undirected ladder `L_n`: `u_i = i`, `v_j = n + j`, `u_i v_j` an edge iff
/// `|i − j| ≤ 1`.
pub fn gen_ladder(n: usize) -> BipartiteGraph {
    let left = VertexSet::from_range(2 * n, 0..n);
    let right = VertexSet::from_range(2 * n, n..2 * n);
    let mut g = BipartiteGraph::new(2 * n, left, right).expect("disjoint sides");
    for (i, j) in ladder_pairs(n) {
        g.add_edge(i, n + j).expect("crossing edge");
    }
    g
}

/// The ladder with every edge oriented `u_i → v_j`.
pub fn gen_anti_ladder(n: usize) -> Digraph {
    Digraph::from_arcs(2 * n, ladder_pairs(n).map(|(i, j)| (i, n + j))).expect("valid arcs")
}

fn ladder_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i.saturating_sub(1)..(i + 2).min(n)).map(move |j| (i, j)))
}

/// An undirected bipartite graph as the digraph with both orientations of
/// each edge.
pub fn symmetric_digraph(g: &BipartiteGraph) -> Digraph {
    let arcs = g
        .left()
        .iter()
        .flat_map(|a| g.nbrs(a).iter().flat_map(move |b| [(a, b), (b, a)]))
        .collect::<Vec<_>>();
    Digraph::from_arcs(g.universe(), arcs).expect("valid arcs")
}

/// How to orient the edges of a cycle on vertices `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CyclePattern {
    /// Bit `i` orients edge `{i, i+1 mod len}` forward when set.
    Bits(Vec<bool>),
    Alternating(usize),
    Directed(usize),
}

impl CyclePattern {
    /// Parses a string of `1`/`0` or `+`/`-` characters.
    pub fn parse_bits(s: &str) -> Option<CyclePattern> {
        s.chars()
            .map(|c| match c {
                '1' | '+' => Some(true),
                '0' | '-' => Some(false),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(CyclePattern::Bits)
    }
}

/// An oriented cycle together with the walk that traverses it.
pub fn gen_oriented_cycle(pattern: &CyclePattern) -> Result<(Digraph, OrientedWalk), FamilyError> {
    let bits = match pattern {
        CyclePattern::Bits(b) => b.clone(),
        CyclePattern::Alternating(len) => {
            if len % 2 == 1 {
                return Err(FamilyError::OddAlternating(*len));
            }
            (0..*len).map(|i| i % 2 == 0).collect()
        }
        CyclePattern::Directed(len) => vec![true; *len],
    };
    if bits.len() < 3 {
        return Err(FamilyError::CycleTooShort(bits.len()));
    }
    let walk = OrientedWalk::new((0..bits.len()).collect(), bits, WalkKind::Cycle);
    let d = Digraph::from_arcs(walk.len(), walk.arcs()).expect("valid arcs");
    Ok((d, walk))
}

/// Random digraph with `δ⁰ ≥ d`.
///
/// Each ordered pair becomes an arc with probability `density` (default
/// `d / (n − 1)`). Vertices short of out-degree `d` then gain arcs towards the
/// vertices of lowest in-degree, and the same is done for in-degrees. The
/// repair biases the distribution towards regular digraphs.
pub fn gen_random_min_semidegree(n: usize, d: usize, seed: u64, density: Option<f64>) -> Result<Digraph, FamilyError> {
    if n > 0 && d > n - 1 || n == 0 && d > 0 {
        return Err(FamilyError::Infeasible { n, d });
    }
    let p = match density {
        Some(p) if !(0.0..=1.0).contains(&p) => return Err(FamilyError::BadDensity(p)),
        Some(p) => p,
        None if n > 1 => d as f64 / (n - 1) as f64,
        None => 0.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![vec![false; n]; n];
    let mut outd = vec![0usize; n];
    let mut ind = vec![0usize; n];
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                adj[u][v] = true;
                outd[u] += 1;
                ind[v] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    for v in 0..n {
        if outd[v] >= d {
            continue;
        }
        order.shuffle(&mut rng);
        let mut cands: Vec<usize> = order.iter().copied().filter(|&w| w != v && !adj[v][w]).collect();
        cands.sort_by_key(|&w| ind[w]);
        for w in cands.into_iter().take(d - outd[v]) {
            adj[v][w] = true;
            ind[w] += 1;
        }
        outd[v] = d;
    }
    for v in 0..n {
        if ind[v] >= d {
            continue;
        }
        order.shuffle(&mut rng);
        let mut cands: Vec<usize> = order.iter().copied().filter(|&w| w != v && !adj[w][v]).collect();
        cands.sort_by_key(|&w| outd[w]);
        for w in cands.into_iter().take(d - ind[v]) {
            adj[w][v] = true;
            outd[w] += 1;
        }
        ind[v] = d;
    }
    let arcs = (0..n).flat_map(|u| {
        let row = &adj[u];
        (0..n).filter(move |&v| row[v]).map(move |v| (u, v))
    });
    Ok(Digraph::from_arcs(n, arcs.collect::<Vec<_>>()).expect("valid arcs"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExceptionKind {
    F1,
    F2,
}

/// A recognized exceptional digraph: `relabel[v]` is the canonical label of
/// vertex `v`, so `d.relabel(&relabel)` equals the generator output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionMatch {
    pub kind: ExceptionKind,
    pub relabel: Vec<usize>,
}

/// Decides whether `d` is isomorphic to `gen_f1(n)` or `gen_f2(n)`.
///
/// In both digraphs `y1` and `y2` are each in exactly one digon, so only
/// vertices with one digon partner are tried as `y1`, `y2`. Once they are
/// fixed, `X1 = out(y1) − y2` determines the whole labelling and the result
/// is compared arc for arc with the generator.
pub fn recognize_exception(d: &Digraph) -> Option<ExceptionMatch> {
    let n = d.order();
    if n < 4 || n % 2 == 1 {
        return None;
    }
    let base = n * n / 2 - 2;
    let kind = if d.num_arcs() == base + 2 {
        ExceptionKind::F1
    } else if d.num_arcs() == base + 3 {
        ExceptionKind::F2
    } else {
        return None;
    };
    let target = match kind {
        ExceptionKind::F1 => gen_f1(n),
        ExceptionKind::F2 => gen_f2(n),
    }
    .ok()?;
    let cands: Vec<usize> = d.vertices().filter(|&v| d.digon_partners(v).len() == 1).collect();
    if cands.len() > 4 {
        return None;
    }
    let h = n / 2;
    for &a in &cands {
        for &b in &cands {
            if a == b {
                continue;
            }
            let mut x1 = d.out_nbrs(a).clone();
            x1.remove(b);
            if x1.len() != h - 1 || x1.contains(a) {
                continue;
            }
            let mut perm = vec![usize::MAX; n];
            perm[a] = 0;
            perm[b] = h;
            let mut next = 1;
            if kind == ExceptionKind::F2 {
                let Some(x) = d.digon_partners(a).first() else { continue };
                if !x1.contains(x) {
                    continue;
                }
                perm[x] = 1;
                next = 2;
            }
            for v in x1.iter() {
                if perm[v] == usize::MAX {
                    perm[v] = next;
                    next += 1;
                }
            }
            let mut next2 = h + 1;
            for v in d.vertices() {
                if perm[v] == usize::MAX {
                    perm[v] = next2;
                    next2 += 1;
                }
            }
            if next != h || next2 != n {
                continue;
            }
            if d.relabel(&perm) == target {
                return Some(ExceptionMatch { kind, relabel: perm });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shuffled(d: &Digraph, seed: u64) -> Digraph {
        let mut perm: Vec<usize> = d.vertices().collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        d.relabel(&perm)
    }

    #[test]
    fn f_8_1_counts() {
        let (d, p) = gen_f(8, 1).unwrap();
        assert_eq!(d.num_arcs(), 30);
        assert_eq!(d.min_semi_degree(), 3);
        assert_eq!(p.x1.to_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn f_degrees_match_block_rule() {
        // Brute force: recount arcs from the block rules pair by pair.
        for n in (2..=16).step_by(2) {
            for k in 0..=n / 2 {
                let (d, p) = gen_f(n, k).unwrap();
                let block = |v: usize| -> (bool, usize) {
                    if p.y1.contains(v) {
                        (true, 1)
                    } else if p.x1.contains(v) {
                        (false, 1)
                    } else if p.y2.contains(v) {
                        (true, 2)
                    } else {
                        (false, 2)
                    }
                };
                for u in 0..n {
                    for v in 0..n {
                        let (uy, ui) = block(u);
                        let (_, vi) = block(v);
                        let rule = u != v && if uy { vi == ui } else { vi != ui };
                        assert_eq!(d.has_arc(u, v), rule, "n={n} k={k} arc ({u},{v})");
                    }
                    let want = if block(u).0 { n / 2 - 1 } else { n / 2 };
                    assert_eq!(d.out_degree(u), want);
                    assert_eq!(d.in_degree(u), want);
                }
                if k >= 1 {
                    assert_eq!(d.min_semi_degree(), n / 2 - 1);
                }
            }
        }
    }

    #[test]
    fn f_degenerate_and_errors() {
        let (d, p) = gen_f(4, 2).unwrap();
        assert!(p.x1.is_empty() && p.x2.is_empty());
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0), (2, 3), (3, 2)]);
        assert_eq!(gen_f(7, 1).unwrap_err(), FamilyError::OddOrder(7));
        assert!(matches!(gen_f(8, 5), Err(FamilyError::KOutOfRange { .. })));
    }

    #[test]
    fn exceptional_counts() {
        let f1 = gen_f1(8).unwrap();
        let f2 = gen_f2(8).unwrap();
        assert_eq!((f1.num_arcs(), f1.min_semi_degree()), (32, 4));
        assert_eq!((f2.num_arcs(), f2.min_semi_degree()), (33, 4));
    }

    #[test]
    fn ladders() {
        assert_eq!(gen_ladder(3).num_edges(), 7);
        assert_eq!(gen_ladder(1).num_edges(), 1);
        let a = gen_anti_ladder(4);
        assert_eq!(a.num_arcs(), 10);
        assert!(a.arcs().all(|(u, v)| u < 4 && v >= 4));
        assert_eq!(symmetric_digraph(&gen_ladder(3)).num_arcs(), 14);
    }

    #[test]
    fn oriented_cycles() {
        let (d, _) = gen_oriented_cycle(&CyclePattern::Directed(6)).unwrap();
        assert_eq!(d.min_semi_degree(), 1);
        let (d, w) = gen_oriented_cycle(&CyclePattern::Alternating(6)).unwrap();
        assert!(crate::walk::verify_walk(&d, &w, crate::walk::Requirements::ADHC).is_ok());
        assert_eq!(
            gen_oriented_cycle(&CyclePattern::Alternating(5)).unwrap_err(),
            FamilyError::OddAlternating(5)
        );
        assert_eq!(
            gen_oriented_cycle(&CyclePattern::parse_bits("+-").unwrap()).unwrap_err(),
            FamilyError::CycleTooShort(2)
        );
    }

    #[test]
    fn random_sampler() {
        let d = gen_random_min_semidegree(12, 7, 1, None).unwrap();
        assert!(d.min_semi_degree() >= 7);
        assert_eq!(d, gen_random_min_semidegree(12, 7, 1, None).unwrap());
        assert_eq!(gen_random_min_semidegree(9, 8, 3, None).unwrap(), Digraph::complete(9));
        assert!(gen_random_min_semidegree(5, 5, 0, None).is_err());
    }

    #[test]
    fn recognizes_shuffled_exceptions() {
        for n in (4..=24).step_by(2) {
            for seed in 0..50 {
                let m1 = recognize_exception(&shuffled(&gen_f1(n).unwrap(), seed)).unwrap();
                assert_eq!(m1.kind, ExceptionKind::F1, "n={n}");
                let s2 = shuffled(&gen_f2(n).unwrap(), seed);
                let m2 = recognize_exception(&s2).unwrap();
                assert_eq!(m2.kind, ExceptionKind::F2, "n={n}");
                assert_eq!(s2.relabel(&m2.relabel), gen_f2(n).unwrap());
            }
        }
    }

    #[test]
    fn rejects_near_misses() {
        let f2 = gen_f2(12).unwrap();
        let (u, v) = (0..12)
            .flat_map(|u| (0..12).map(move |v| (u, v)))
            .find(|&(u, v)| u != v && !f2.has_arc(u, v))
            .unwrap();
        assert_eq!(recognize_exception(&f2.with_arcs([(u, v)]).unwrap()), None);
        assert_eq!(recognize_exception(&Digraph::complete(12)), None);
        assert_eq!(recognize_exception(&gen_f(12, 1).unwrap().0), None);
    }
}
