//! Vertex-disjoint 2-in-stars plus two independent arcs.

use super::LemmaError;
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarPacking {
    /// `(center, leaf, leaf)` with both arcs pointing at the center.
    pub stars: Vec<(usize, usize, usize)>,
    pub edges: [(usize, usize); 2],
    pub min_out: usize,
    pub max_in: usize,
    /// The guaranteed star count for this order and these degree extremes.
    pub bound: f64,
}

/// `((d − 1)n − 4(d − 1 + D)) / (3(d + D − 1))` for minimum out-degree `d`
/// and maximum in-degree `D` on `n` vertices.
pub fn star_bound(d: usize, big_d: usize, n: usize) -> f64 {
    let (d, big_d, n) = (d as f64, big_d as f64, n as f64);
    let den = 3.0 * (d + big_d - 1.0);
    if den <= 0.0 {
        return 0.0;
    }
    ((d - 1.0) * n - 4.0 * (d - 1.0 + big_d)) / den
}

/// Takes the lexicographically first two independent arcs, then scans centers
/// in ascending order and gives each one its two lowest free in-neighbours.
/// The result is maximal: no 2-in-star fits in the leftover vertices.
pub fn two_in_star_packing(d: &Digraph) -> Result<StarPacking, LemmaError> {
    let n = d.order();
    let first = d.arcs().next().ok_or(LemmaError::NoIndependentArcs)?;
    let second = d
        .arcs()
        .find(|&(u, v)| u != first.0 && u != first.1 && v != first.0 && v != first.1)
        .ok_or(LemmaError::NoIndependentArcs)?;
    let mut free = d.vertex_set();
    for v in [first.0, first.1, second.0, second.1] {
        free.remove(v);
    }
    let mut stars = Vec::new();
    for center in 0..n {
        if !free.contains(center) {
            continue;
        }
        let leaves: VertexSet = d.in_nbrs(center).intersection(&free);
        let mut it = leaves.iter();
        if let (Some(l1), Some(l2)) = (it.next(), it.next()) {
            for v in [center, l1, l2] {
                free.remove(v);
            }
            stars.push((center, l1, l2));
        }
    }
    let min_out = d.vertices().map(|v| d.out_degree(v)).min().unwrap_or(0);
    let max_in = d.max_in_degree();
    Ok(StarPacking {
        stars,
        edges: [first, second],
        min_out,
        max_in,
        bound: star_bound(min_out, max_in, n),
    })
}
