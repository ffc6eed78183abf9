//! Dense pairs: from `e→(X, Y) ≥ c|X||Y|` to disjoint `X' ⊆ X`, `Y' ⊆ Y` with
//! large minimum cross-degree, and from there to a long proper ADP.

use super::LemmaError;
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use crate::walk::{OrientedWalk, WalkKind};

fn check_density(d: &Digraph, x: &VertexSet, y: &VertexSet, c: f64) -> Result<(), LemmaError> {
    if !(c > 0.0) {
        return Err(LemmaError::Precondition(format!("density c = {c} must be positive")));
    }
    let e = d.arc_count(x, y) as f64;
    let need = c * x.len() as f64 * y.len() as f64;
    if x.is_empty() || y.is_empty() || e + super::EPS < need {
        return Err(LemmaError::Precondition(format!(
            "e(X, Y) = {e} is below c|X||Y| = {need}"
        )));
    }
    Ok(())
}

/// Splits `X ∩ Y` by local moves, then deletes vertices whose cross-degree is
/// below `(c/8)|Y|` (in `X'`) or `(c/8)|X|` (in `Y'`) until none remain.
///
/// Only arcs from `X` to `Y` count. Moves and deletions scan in ascending
/// vertex order.
pub fn maxcut_partition(
    d: &Digraph,
    x: &VertexSet,
    y: &VertexSet,
    c: f64,
) -> Result<(VertexSet, VertexSet), LemmaError> {
    check_density(d, x, y, c)?;
    let both = x.intersection(y);
    let mut x0 = x.difference(y).union(&both);
    let mut y0 = y.difference(x);
    loop {
        let mut moved = false;
        for v in both.iter() {
            // The gain of switching v is the arcs it would gain minus those it loses.
            if x0.contains(v) {
                if d.in_degree_in(v, &x0) > d.out_degree_in(v, &y0) {
                    x0.remove(v);
                    y0.insert(v);
                    moved = true;
                }
            } else if d.out_degree_in(v, &y0) > d.in_degree_in(v, &x0) {
                y0.remove(v);
                x0.insert(v);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let out_floor = c / 8.0 * y.len() as f64;
    let in_floor = c / 8.0 * x.len() as f64;
    loop {
        let bad = x0
            .iter()
            .find(|&v| (d.out_degree_in(v, &y0) as f64) + super::EPS < out_floor)
            .or_else(|| y0.iter().find(|&v| (d.in_degree_in(v, &x0) as f64) + super::EPS < in_floor));
        match bad {
            Some(v) => {
                x0.remove(v);
                y0.remove(v);
            }
            None => break,
        }
    }
    if x0.is_empty() || y0.is_empty() {
        return Err(LemmaError::Precondition("deletion emptied a side".into()));
    }
    Ok((x0, y0))
}

/// A proper ADP inside `D[X ∪ Y]` on at least `(c/4)·min(|X|, |Y|)` vertices.
///
/// Extends a path greedily in the bipartite graph of `X' → Y'` arcs from each
/// start in `X'`; a stuck end has all its neighbours on the path, so every
/// such path has at least twice the minimum degree vertices. Keeps the
/// longest, cut to end in `Y'`.
pub fn proper_adp_from_dense_pair(
    d: &Digraph,
    x: &VertexSet,
    y: &VertexSet,
    c: f64,
) -> Result<OrientedWalk, LemmaError> {
    let (xs, ys) = maxcut_partition(d, x, y, c)?;
    let mut best: Vec<usize> = Vec::new();
    for s in xs.iter() {
        let mut path = vec![s];
        let mut free = xs.union(&ys);
        free.remove(s);
        loop {
            let last = *path.last().unwrap();
            let next = if path.len() % 2 == 1 {
                d.out_nbrs(last).intersection(&ys).first_common(&free)
            } else {
                d.in_nbrs(last).intersection(&xs).first_common(&free)
            };
            match next {
                Some(w) => {
                    free.remove(w);
                    path.push(w);
                }
                None => break,
            }
        }
        path.truncate(path.len() - path.len() % 2);
        if path.len() > best.len() {
            best = path;
        }
    }
    Ok(OrientedWalk::alternating(best, true, WalkKind::Path))
}
