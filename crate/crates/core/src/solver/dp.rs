//! Subset dynamic programs over vertex masks.
//!
//! `dp[mask]` is the set of vertices `w` such that some path covering exactly
//! `mask` (under the start rule) ends at `w`. On an anti-directed path the
//! role of a vertex is fixed by the parity of its position, so the table only
//! needs to know which role position 0 has. A vertex `w` at position `p` can
//! follow `w'` iff `w' ∈ pred[p mod 2][w]`: `out(w)` when `w` is a source,
//! `in(w)` when it is a sink, and `in(w)` throughout for directed paths.

use super::{Budget, SolveError, DP_HARD_LIMIT};
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use crate::walk::{OrientedWalk, TwoFactorCert, WalkKind};

#[derive(Clone, Copy, Debug)]
pub(super) enum Orientation {
    Alternating { first_source: bool },
    Directed,
}

#[derive(Clone, Copy, Debug)]
pub(super) enum Start {
    Fixed(usize),
    Any,
    /// The path starts at the lowest vertex of its mask; used for cycles
    /// through arbitrary vertex subsets.
    LowestInMask,
}

pub(super) struct PathTable {
    n: usize,
    dp: Vec<u32>,
    pred: [Vec<u32>; 2],
}

fn word(s: &VertexSet) -> u32 {
    s.words().first().copied().unwrap_or(0) as u32
}

impl PathTable {
    pub fn build(d: &Digraph, orient: Orientation, start: Start, budget: &mut Budget) -> Result<Self, SolveError> {
        let n = d.order();
        assert!(n <= DP_HARD_LIMIT, "subset table requested for {n} vertices");
        let pred = [0usize, 1].map(|par| {
            (0..n)
                .map(|w| {
                    let source = match orient {
                        Orientation::Alternating { first_source } => (par == 0) == first_source,
                        Orientation::Directed => false,
                    };
                    if source {
                        word(d.out_nbrs(w))
                    } else {
                        word(d.in_nbrs(w))
                    }
                })
                .collect::<Vec<u32>>()
        });
        let size = 1usize << n;
        let mut dp = vec![0u32; size];
        for mask in 1..size {
            if mask & 0xfff == 0 {
                budget.tick(0x1000)?;
            }
            let m = mask as u32;
            if m & (m - 1) == 0 {
                let allowed = match start {
                    Start::Fixed(s) => m == 1 << s,
                    Start::Any | Start::LowestInMask => true,
                };
                if allowed {
                    dp[mask] = m;
                }
                continue;
            }
            let excluded = match start {
                Start::Fixed(s) => {
                    if m >> s & 1 == 0 {
                        continue;
                    }
                    1 << s
                }
                Start::Any => 0,
                Start::LowestInMask => m & m.wrapping_neg(),
            };
            let p = &pred[((m.count_ones() - 1) & 1) as usize];
            let mut rest = m & !excluded;
            let mut ends = 0;
            while rest != 0 {
                let w = rest.trailing_zeros();
                rest &= rest - 1;
                let bit = 1u32 << w;
                if dp[(m ^ bit) as usize] & p[w as usize] != 0 {
                    ends |= bit;
                }
            }
            dp[mask] = ends;
        }
        budget.tick((size & 0xfff) as u64)?;
        Ok(PathTable { n, dp, pred })
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    #[inline]
    pub fn ends(&self, mask: u32) -> u32 {
        self.dp[mask as usize]
    }

    /// A path realizing `end ∈ ends(mask)`, in path order.
    pub fn trace(&self, mut mask: u32, mut end: usize) -> Vec<usize> {
        debug_assert!(self.ends(mask) >> end & 1 == 1);
        let mut path = vec![end];
        while mask.count_ones() > 1 {
            let par = ((mask.count_ones() - 1) & 1) as usize;
            mask ^= 1 << end;
            let prev = self.dp[mask as usize] & self.pred[par][end];
            end = prev.trailing_zeros() as usize;
            path.push(end);
        }
        path.reverse();
        path
    }
}

pub(super) fn adhc(d: &Digraph, budget: &mut Budget) -> Result<Option<OrientedWalk>, SolveError> {
    for first_source in [true, false] {
        let t = PathTable::build(d, Orientation::Alternating { first_source }, Start::Fixed(0), budget)?;
        // The last vertex has the opposite role to vertex 0.
        let close = if first_source {
            word(d.out_nbrs(0))
        } else {
            word(d.in_nbrs(0))
        };
        let ends = t.ends(t.full()) & close;
        if ends != 0 {
            let path = t.trace(t.full(), ends.trailing_zeros() as usize);
            return Ok(Some(OrientedWalk::alternating(path, first_source, WalkKind::Cycle)));
        }
    }
    Ok(None)
}

pub(super) fn directed_hc(d: &Digraph, budget: &mut Budget) -> Result<Option<OrientedWalk>, SolveError> {
    let t = PathTable::build(d, Orientation::Directed, Start::Fixed(0), budget)?;
    let ends = t.ends(t.full()) & word(d.in_nbrs(0));
    Ok((ends != 0).then(|| {
        let path = t.trace(t.full(), ends.trailing_zeros() as usize);
        OrientedWalk::directed(path, WalkKind::Cycle)
    }))
}

/// A proper ADP starts at a source and has an even number of vertices.
pub(super) fn longest_proper_adp(d: &Digraph, budget: &mut Budget) -> Result<OrientedWalk, SolveError> {
    let t = PathTable::build(d, Orientation::Alternating { first_source: true }, Start::Any, budget)?;
    let mut best: Option<u32> = None;
    for mask in 1..=t.full() {
        let c = mask.count_ones();
        if c % 2 == 0 && t.ends(mask) != 0 && best.map_or(true, |b| b.count_ones() < c) {
            best = Some(mask);
        }
    }
    Ok(match best {
        Some(mask) => {
            let path = t.trace(mask, t.ends(mask).trailing_zeros() as usize);
            OrientedWalk::alternating(path, true, WalkKind::Path)
        }
        None => OrientedWalk::empty_path(),
    })
}

struct CycleTables {
    source_first: PathTable,
    sink_first: PathTable,
    out0: Vec<u32>,
    in0: Vec<u32>,
}

impl CycleTables {
    /// An anti-directed cycle through exactly `mask`, as (first_source, end).
    fn closing(&self, mask: u32) -> Option<(bool, usize)> {
        let c = mask.count_ones();
        if c < 4 || c % 2 == 1 {
            return None;
        }
        let low = mask.trailing_zeros() as usize;
        let e = self.source_first.ends(mask) & self.out0[low];
        if e != 0 {
            return Some((true, e.trailing_zeros() as usize));
        }
        let e = self.sink_first.ends(mask) & self.in0[low];
        (e != 0).then(|| (false, e.trailing_zeros() as usize))
    }

    fn walk(&self, mask: u32) -> OrientedWalk {
        let (first_source, end) = self.closing(mask).expect("mask closes");
        let t = if first_source {
            &self.source_first
        } else {
            &self.sink_first
        };
        OrientedWalk::alternating(t.trace(mask, end), first_source, WalkKind::Cycle)
    }
}

pub(super) fn anti_two_factor(d: &Digraph, max_cycles: usize, budget: &mut Budget) -> Result<Option<TwoFactorCert>, SolveError> {
    let tables = CycleTables {
        source_first: PathTable::build(d, Orientation::Alternating { first_source: true }, Start::LowestInMask, budget)?,
        sink_first: PathTable::build(d, Orientation::Alternating { first_source: false }, Start::LowestInMask, budget)?,
        out0: d.vertices().map(|v| word(d.out_nbrs(v))).collect(),
        in0: d.vertices().map(|v| word(d.in_nbrs(v))).collect(),
    };
    let full = tables.source_first.full();
    let cert = |masks: &[u32]| TwoFactorCert {
        cycles: masks.iter().map(|&m| tables.walk(m)).collect(),
    };
    if tables.closing(full).is_some() {
        return Ok(Some(cert(&[full])));
    }
    if max_cycles < 2 {
        return Ok(None);
    }
    // Vertex 0 lies in the first cycle.
    let rest = full & !1;
    let mut s = rest;
    while s != 0 {
        s = (s - 1) & rest;
        let sub = s | 1;
        budget.tick(1)?;
        if tables.closing(sub).is_some() && tables.closing(full ^ sub).is_some() {
            return Ok(Some(cert(&[sub, full ^ sub])));
        }
    }
    if max_cycles < 3 {
        return Ok(None);
    }
    let mut memo = vec![0u8; full as usize + 1];
    let best = min_cycles(&tables, full, &mut memo, budget)?;
    if best as usize > max_cycles {
        return Ok(None);
    }
    let mut masks = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let sub = best_split(&tables, mask, &mut memo, budget)?.expect("memo says a split exists");
        masks.push(sub);
        mask ^= sub;
    }
    Ok(Some(cert(&masks)))
}

const IMPOSSIBLE: u8 = u8::MAX;

/// Minimum number of anti-directed cycles partitioning `mask`. `memo` stores
/// the answer plus one, zero meaning not yet computed.
fn min_cycles(t: &CycleTables, mask: u32, memo: &mut [u8], budget: &mut Budget) -> Result<u8, SolveError> {
    if mask == 0 {
        return Ok(0);
    }
    if memo[mask as usize] != 0 {
        return Ok(memo[mask as usize] - 1);
    }
    let mut best = IMPOSSIBLE - 1;
    let low = mask & mask.wrapping_neg();
    let rest = mask ^ low;
    let mut s = rest;
    loop {
        let sub = s | low;
        budget.tick(1)?;
        if t.closing(sub).is_some() {
            let r = min_cycles(t, mask ^ sub, memo, budget)?;
            if r < IMPOSSIBLE - 1 {
                best = best.min(r + 1);
            }
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & rest;
    }
    memo[mask as usize] = best + 1;
    Ok(best)
}

fn best_split(t: &CycleTables, mask: u32, memo: &mut [u8], budget: &mut Budget) -> Result<Option<u32>, SolveError> {
    let target = min_cycles(t, mask, memo, budget)?;
    let low = mask & mask.wrapping_neg();
    let rest = mask ^ low;
    let mut s = rest;
    loop {
        let sub = s | low;
        if t.closing(sub).is_some() && min_cycles(t, mask ^ sub, memo, budget)? + 1 == target {
            return Ok(Some(sub));
        }
        if s == 0 {
            return Ok(None);
        }
        s = (s - 1) & rest;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{verify_two_factor, verify_walk, Requirements};

    fn budget() -> Budget {
        Budget::new(u64::MAX / 2)
    }

    #[test]
    fn complete_four_has_adhc() {
        let d = Digraph::complete(4);
        let w = adhc(&d, &mut budget()).unwrap().unwrap();
        assert!(verify_walk(&d, &w, Requirements::ADHC).is_ok());
    }

    #[test]
    fn directed_cycle_has_dhc_but_no_adhc() {
        let d = Digraph::from_arcs(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!(adhc(&d, &mut budget()).unwrap().is_none());
        let w = directed_hc(&d, &mut budget()).unwrap().unwrap();
        assert!(verify_walk(&d, &w, Requirements::DHC).is_ok());
    }

    #[test]
    fn longest_proper_on_directed_cycle_is_one_arc() {
        let d = Digraph::from_arcs(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let w = longest_proper_adp(&d, &mut budget()).unwrap();
        assert_eq!(w.len(), 2);
        assert!(verify_walk(&d, &w, Requirements::PROPER_ADP).is_ok());
        let empty = longest_proper_adp(&Digraph::empty(5), &mut budget()).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn two_disjoint_four_cycles() {
        // Two complete digraphs on 4 vertices: no ADHC, but a 2-factor.
        let arcs = (0..8).flat_map(|u| (0..8).filter(move |&v| v != u && u / 4 == v / 4).map(move |v| (u, v)));
        let d = Digraph::from_arcs(8, arcs).unwrap();
        assert!(adhc(&d, &mut budget()).unwrap().is_none());
        let c = anti_two_factor(&d, 2, &mut budget()).unwrap().unwrap();
        assert_eq!(c.cycle_type(), vec![4, 4]);
        assert!(verify_two_factor(&d, &c).is_ok());
        assert!(anti_two_factor(&d, 1, &mut budget()).unwrap().is_none());
    }

    #[test]
    fn three_cycle_factor() {
        let arcs = (0..12).flat_map(|u| (0..12).filter(move |&v| v != u && u / 4 == v / 4).map(move |v| (u, v)));
        let d = Digraph::from_arcs(12, arcs).unwrap();
        assert!(anti_two_factor(&d, 2, &mut budget()).unwrap().is_none());
        let c = anti_two_factor(&d, 3, &mut budget()).unwrap().unwrap();
        assert_eq!(c.num_cycles(), 3);
        assert!(verify_two_factor(&d, &c).is_ok());
    }

    #[test]
    fn budget_is_reported() {
        let d = Digraph::complete(16);
        assert_eq!(
            adhc(&d, &mut Budget::new(10)),
            Err(SolveError::BudgetExceeded { limit: 10 })
        );
    }
}
