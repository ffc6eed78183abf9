//! From the five-part partition to an ADHC: distributing `Z`, splitting each
//! part in two, finding two independent connecting edges, and stitching two
//! bipartite Hamiltonian paths together.
//!
//! Indices are 0-based here: `x[i]` is `X_{i+1}` and `x[i][j]` its half
//! `X_{i+1}^{j+1}`. The sources of the final cycle are `U_0 ∪ U_1` with
//! `U_i = X_{1−i}^i ∪ Y_i^i` and the sinks `V_0 ∪ V_1` with
//! `V_i = X_i^i ∪ Y_i^{1−i}`.

use super::extremal::Partition5;
use super::{half, LemmaError, Params, EPS};
use crate::bipartite::{bipartite_view, BipartiteGraph};
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use crate::solver::Solver;
use crate::walk::{verify_walk, OrientedWalk, Requirements, WalkKind};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parts4 {
    pub x: [VertexSet; 2],
    pub y: [VertexSet; 2],
}

impl Parts4 {
    /// `(is_x, i)` for the part containing `v`.
    pub fn locate(&self, v: usize) -> Option<(bool, usize)> {
        (0..2).find_map(|i| {
            if self.x[i].contains(v) {
                Some((true, i))
            } else if self.y[i].contains(v) {
                Some((false, i))
            } else {
                None
            }
        })
    }

    fn part(&self, is_x: bool, i: usize) -> &VertexSet {
        if is_x {
            &self.x[i]
        } else {
            &self.y[i]
        }
    }
}

/// Places every vertex of `Z` by the first class it belongs to, where
/// `z ∈ Z(A, B)` means at least `5γn` in-neighbours in `A` and at least `5γn`
/// out-neighbours in `B`:
///
/// | class | placed in |
/// |---|---|
/// | `Z(X_i, X_i)` | `X_{1−i}` |
/// | `Z(Y_i, Y_i)` | `Y_i` |
/// | `Z(X_i, X_{1−i})` | `Y_{1−i}` |
/// | `Z(Y_i, Y_{1−i})` | `X_i` |
/// | `Z(Y_i, X_j)` for all `i, j` | `Y_0` |
/// | `Z(X_i, Y_j)` for all `i, j` | `Y_1` |
pub fn distribute_z(d: &Digraph, p: &Partition5, gamma: f64) -> Result<Parts4, LemmaError> {
    let thr = 5.0 * gamma * half(d.order());
    let xs = [&p.x1, &p.x2];
    let ys = [&p.y1, &p.y2];
    let member = |z: usize, from: &VertexSet, to: &VertexSet| {
        d.in_degree_in(z, from) as f64 + EPS >= thr && d.out_degree_in(z, to) as f64 + EPS >= thr
    };
    let mut out = Parts4 {
        x: [p.x1.clone(), p.x2.clone()],
        y: [p.y1.clone(), p.y2.clone()],
    };
    for z in p.z.iter() {
        let all = |a: [&VertexSet; 2], b: [&VertexSet; 2]| (0..2).all(|i| (0..2).all(|j| member(z, a[i], b[j])));
        let place = if let Some(i) = (0..2).find(|&i| member(z, xs[i], xs[i])) {
            (true, 1 - i)
        } else if let Some(i) = (0..2).find(|&i| member(z, ys[i], ys[i])) {
            (false, i)
        } else if let Some(i) = (0..2).find(|&i| member(z, xs[i], xs[1 - i])) {
            (false, 1 - i)
        } else if let Some(i) = (0..2).find(|&i| member(z, ys[i], ys[1 - i])) {
            (true, i)
        } else if all(ys, xs) {
            (false, 0)
        } else if all(xs, ys) {
            (false, 1)
        } else {
            return Err(LemmaError::Unplaced(z));
        };
        match place {
            (true, i) => out.x[i].insert(z),
            (false, i) => out.y[i].insert(z),
        };
    }
    Ok(out)
}

/// A half of one of the four parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Slot {
    pub is_x: bool,
    pub part: usize,
    pub half: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SizeTargets {
    pub x: [[usize; 2]; 2],
    pub y: [[usize; 2]; 2],
}

impl SizeTargets {
    fn get(&self, s: Slot) -> usize {
        if s.is_x {
            self.x[s.part][s.half]
        } else {
            self.y[s.part][s.half]
        }
    }

    /// `(|U_0|, |V_0|, |U_1|, |V_1|)`.
    pub fn side_sizes(&self) -> [usize; 4] {
        let (x, y) = (&self.x, &self.y);
        [x[1][0] + y[0][0], x[0][0] + y[0][1], x[0][1] + y[1][1], x[1][1] + y[1][0]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Splitting {
    pub x: [[VertexSet; 2]; 2],
    pub y: [[VertexSet; 2]; 2],
}

impl Splitting {
    pub fn u(&self, i: usize) -> VertexSet {
        self.x[1 - i][i].union(&self.y[i][i])
    }

    pub fn v(&self, i: usize) -> VertexSet {
        self.x[i][i].union(&self.y[i][1 - i])
    }

    /// `G_i`: arcs from `U_i` to `V_i` as a bipartite graph.
    pub fn graph(&self, d: &Digraph, i: usize) -> BipartiteGraph {
        bipartite_view(d, &self.u(i), &self.v(i)).expect("halves are disjoint")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub splitting: Splitting,
    /// `δ(G_i)`.
    pub min_degree: [usize; 2],
    /// `|Q_i|`: vertices of `G_i` with degree below `(1 − γ)n/2`.
    pub low_degree: [usize; 2],
    pub attempts: usize,
}

fn check_targets(
    parts: &Parts4,
    preassigned: &[(usize, Slot)],
    t: &SizeTargets,
    params: &Params,
    n: f64,
) -> Result<Vec<Option<Slot>>, LemmaError> {
    for is_x in [true, false] {
        for i in 0..2 {
            let size = parts.part(is_x, i).len();
            let (a, b) = if is_x { (t.x[i][0], t.x[i][1]) } else { (t.y[i][0], t.y[i][1]) };
            let name = if is_x { "X" } else { "Y" };
            if a + b != size {
                return Err(LemmaError::Infeasible(format!("halves of {name}{} do not add up to {size}", i + 1)));
            }
            for h in [a, b] {
                if (h as f64 - size as f64 / 2.0).abs() > params.beta * n + EPS {
                    return Err(LemmaError::Infeasible(format!(
                        "half of size {h} of {name}{} is outside the balance window",
                        i + 1
                    )));
                }
            }
        }
    }
    let order = parts.x[0].universe();
    let mut fixed: Vec<Option<Slot>> = vec![None; order];
    let mut count = std::collections::HashMap::new();
    for &(v, s) in preassigned {
        if parts.locate(v) != Some((s.is_x, s.part)) || s.half > 1 {
            return Err(LemmaError::Infeasible(format!("vertex {v} is preassigned outside its part")));
        }
        match fixed[v] {
            Some(prev) if prev != s => {
                return Err(LemmaError::Infeasible(format!("vertex {v} is preassigned to both halves")))
            }
            Some(_) => continue,
            None => fixed[v] = Some(s),
        }
        *count.entry(s).or_insert(0usize) += 1;
    }
    for (&s, &c) in &count {
        if c > t.get(s) {
            return Err(LemmaError::Infeasible(format!("{c} vertices preassigned to a half of size {}", t.get(s))));
        }
    }
    Ok(fixed)
}

/// Seeded random splittings with exactly the target sizes and every
/// preassigned vertex in place, redrawn until one is good or `retries` run
/// out. Good means `δ(G_i) ≥ γn` and `|Q_i| ≤ βn` for both `i`.
pub fn good_splitting(
    d: &Digraph,
    parts: &Parts4,
    preassigned: &[(usize, Slot)],
    targets: &SizeTargets,
    params: &Params,
    seed: u64,
    retries: usize,
) -> Result<SplittingReport, LemmaError> {
    let n = half(d.order());
    let fixed = check_targets(parts, preassigned, targets, params, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let empty = || [VertexSet::new(d.order()), VertexSet::new(d.order())];
    for attempt in 1..=retries.max(1) {
        let mut s = Splitting {
            x: [empty(), empty()],
            y: [empty(), empty()],
        };
        for is_x in [true, false] {
            for i in 0..2 {
                let halves = if is_x { &mut s.x[i] } else { &mut s.y[i] };
                let mut rest = Vec::new();
                for v in parts.part(is_x, i).iter() {
                    match fixed[v] {
                        Some(slot) => {
                            halves[slot.half].insert(v);
                        }
                        None => rest.push(v),
                    }
                }
                rest.shuffle(&mut rng);
                let want = if is_x { targets.x[i][0] } else { targets.y[i][0] };
                for v in rest {
                    let h = usize::from(halves[0].len() >= want);
                    halves[h].insert(v);
                }
            }
        }
        let graphs = [s.graph(d, 0), s.graph(d, 1)];
        let min_degree = [graphs[0].min_degree(), graphs[1].min_degree()];
        let low = |g: &BipartiteGraph| {
            g.vertices().iter().filter(|&v| (g.degree(v) as f64) + EPS < (1.0 - params.gamma) * n / 2.0).count()
        };
        let low_degree = [low(&graphs[0]), low(&graphs[1])];
        let good = (0..2).all(|i| {
            min_degree[i] as f64 + EPS >= params.gamma * n && low_degree[i] as f64 <= params.beta * n + EPS
        });
        if good {
            return Ok(SplittingReport {
                splitting: s,
                min_degree,
                low_degree,
                attempts: attempt,
            });
        }
    }
    Err(LemmaError::RetriesExhausted(retries.max(1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeShape {
    /// One edge from `U_0` to `V_1` and one from `U_1` to `V_0`; needs
    /// `|U_i| = |V_i|` for both `i`.
    Opposite,
    /// Both edges from `U_from` to `V_{1−from}`; needs
    /// `|U_from| = |V_from| + 1` and `|V_{1−from}| = |U_{1−from}| + 1`.
    Same { from: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectingEdges {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub shape: EdgeShape,
}

/// For a connecting arc, the index `a` such that any splitting routes it from
/// `U_a` to `V_{1−a}`.
///
/// An arc `uv` is connecting if `u ∈ X_i` and `v ∈ X_i ∪ Y_i`, or `u ∈ Y_i`
/// and `v ∈ Y_{1−i} ∪ X_{1−i}`.
pub fn connecting_direction(parts: &Parts4, u: usize, v: usize) -> Option<usize> {
    let (ux, i) = parts.locate(u)?;
    let (_, k) = parts.locate(v)?;
    match (ux, k == i) {
        (true, true) => Some(1 - i),
        (false, false) => Some(i),
        _ => None,
    }
}

/// One pair of independent connecting edges per shape that has one: the
/// opposite shape first, then same-direction pairs from `U_0` and from `U_1`.
/// Pairs are the lexicographically first in arc order.
pub fn find_connecting_edges_all(d: &Digraph, parts: &Parts4) -> Vec<ConnectingEdges> {
    let conn: Vec<((usize, usize), usize)> =
        d.arcs().filter_map(|(u, v)| connecting_direction(parts, u, v).map(|a| ((u, v), a))).collect();
    let disjoint = |e: (usize, usize), f: (usize, usize)| e.0 != f.0 && e.0 != f.1 && e.1 != f.0 && e.1 != f.1;
    let find = |want: &dyn Fn(usize, usize) -> bool| {
        for (i, &(e, a)) in conn.iter().enumerate() {
            for &(f, b) in &conn[i + 1..] {
                if want(a, b) && disjoint(e, f) {
                    return Some((e, f, a));
                }
            }
        }
        None
    };
    let mut out = Vec::new();
    if let Some((e, f, a)) = find(&|a, b| a != b) {
        // Keep the edge leaving U_0 first.
        let (first, second) = if a == 0 { (e, f) } else { (f, e) };
        out.push(ConnectingEdges {
            first,
            second,
            shape: EdgeShape::Opposite,
        });
    }
    for from in 0..2 {
        if let Some((e, f, _)) = find(&|a, b| a == from && b == from) {
            out.push(ConnectingEdges {
                first: e,
                second: f,
                shape: EdgeShape::Same { from },
            });
        }
    }
    out
}

/// Two independent connecting edges, preferring the opposite shape.
pub fn find_connecting_edges(d: &Digraph, parts: &Parts4) -> Option<ConnectingEdges> {
    find_connecting_edges_all(d, parts).into_iter().next()
}

/// Halves that route each endpoint of `edges` correctly.
pub fn edge_preassignment(parts: &Parts4, edges: &ConnectingEdges) -> Vec<(usize, Slot)> {
    let mut out = Vec::new();
    for (u, v) in [edges.first, edges.second] {
        let a = connecting_direction(parts, u, v).expect("connecting edge");
        let b = 1 - a;
        let (ux, ui) = parts.locate(u).unwrap();
        out.push((
            u,
            Slot {
                is_x: ux,
                part: ui,
                half: a,
            },
        ));
        let (vx, vi) = parts.locate(v).unwrap();
        out.push((
            v,
            Slot {
                is_x: vx,
                part: vi,
                half: if vx { b } else { 1 - b },
            },
        ));
    }
    out
}

/// All target vectors inside the balance window whose side sizes fit
/// `shape`, that leave room for the preassigned vertices, most balanced
/// first, at most `limit` of them.
pub fn candidate_targets(
    parts: &Parts4,
    shape: EdgeShape,
    preassigned: &[(usize, Slot)],
    params: &Params,
    order: usize,
    limit: usize,
) -> Vec<SizeTargets> {
    let n = half(order);
    let range = |size: usize| {
        let lo = (size as f64 / 2.0 - params.beta * n - EPS).ceil().max(0.0) as usize;
        let hi = ((size as f64 / 2.0 + params.beta * n + EPS).floor() as usize).min(size);
        lo..=hi
    };
    let sizes = [parts.x[0].len(), parts.x[1].len(), parts.y[0].len(), parts.y[1].len()];
    let mut out: Vec<(usize, SizeTargets)> = Vec::new();
    for x0 in range(sizes[0]) {
        for x1 in range(sizes[1]) {
            for y0 in range(sizes[2]) {
                for y1 in range(sizes[3]) {
                    let t = SizeTargets {
                        x: [[x0, sizes[0] - x0], [x1, sizes[1] - x1]],
                        y: [[y0, sizes[2] - y0], [y1, sizes[3] - y1]],
                    };
                    let [u0, v0, u1, v1] = t.side_sizes();
                    let fits = match shape {
                        EdgeShape::Opposite => u0 == v0 && u1 == v1,
                        EdgeShape::Same { from: 0 } => u0 == v0 + 1 && v1 == u1 + 1,
                        EdgeShape::Same { .. } => u1 == v1 + 1 && v0 == u0 + 1,
                    };
                    let room = preassigned.iter().all(|&(_, s)| {
                        preassigned.iter().filter(|&&(_, r)| r == s).count() <= t.get(s)
                    });
                    if fits && room {
                        let skew = [x0 * 2, x1 * 2, y0 * 2, y1 * 2]
                            .iter()
                            .zip(sizes)
                            .map(|(&h, s)| h.abs_diff(s))
                            .sum();
                        out.push((skew, t));
                    }
                }
            }
        }
    }
    out.sort_by_key(|&(skew, t)| (skew, t.x, t.y));
    out.into_iter().take(limit).map(|(_, t)| t).collect()
}

/// Stitches Hamiltonian paths of `G_0` and `G_1` with prescribed ends and the
/// two connecting edges into an ADHC, verified before it is returned.
///
/// `None` means the bipartite engine found no path (for example when some
/// `G_i` is disconnected).
pub fn reduce_to_adhc(
    d: &Digraph,
    s: &Splitting,
    edges: [(usize, usize); 2],
    solver: &mut Solver,
) -> Result<Option<OrientedWalk>, LemmaError> {
    let u = [s.u(0), s.u(1)];
    let v = [s.v(0), s.v(1)];
    let mut dirs = [0; 2];
    for (k, &(a, b)) in edges.iter().enumerate() {
        if !d.has_arc(a, b) {
            return Err(LemmaError::Precondition(format!("({a}, {b}) is not an arc")));
        }
        dirs[k] = (0..2)
            .find(|&i| u[i].contains(a) && v[1 - i].contains(b))
            .ok_or_else(|| LemmaError::Precondition(format!("({a}, {b}) does not cross between the two halves")))?;
    }
    let [(p, q), (p2, q2)] = edges;
    if [p, q].contains(&p2) || [p, q].contains(&q2) {
        return Err(LemmaError::Precondition("the edges are not independent".into()));
    }
    let sizes = [u[0].len(), v[0].len(), u[1].len(), v[1].len()];
    let g = [s.graph(d, 0), s.graph(d, 1)];
    // Each path is listed from the vertex the cycle enters it at.
    let (first, second) = if dirs[0] != dirs[1] {
        if sizes[0] != sizes[1] || sizes[2] != sizes[3] {
            return Err(LemmaError::Precondition(format!("side sizes {sizes:?} need |U_i| = |V_i|")));
        }
        let ((t0, h1), (t1, h0)) = if dirs[0] == 0 { ((p, q), (p2, q2)) } else { ((p2, q2), (p, q)) };
        ((0, t0, h0), (1, t1, h1))
    } else {
        let a = dirs[0];
        let (ua, va, ub, vb) = if a == 0 { (sizes[0], sizes[1], sizes[2], sizes[3]) } else { (sizes[2], sizes[3], sizes[0], sizes[1]) };
        if ua != va + 1 || vb != ub + 1 {
            return Err(LemmaError::Precondition(format!(
                "side sizes {sizes:?} need |U_a| = |V_a| + 1 and |V_b| = |U_b| + 1"
            )));
        }
        ((a, p, p2), (1 - a, q2, q))
    };
    let mut cycle = Vec::with_capacity(d.order());
    for (i, from, to) in [first, second] {
        match solver.bip_ham_path(&g[i], from, to)? {
            Some(path) => cycle.extend(path),
            None => return Ok(None),
        }
    }
    let sources = u[0].union(&u[1]);
    let w = OrientedWalk::from_sources(cycle, |x| sources.contains(x), WalkKind::Cycle);
    verify_walk(d, &w, Requirements::ADHC)
        .map_err(|e| LemmaError::Precondition(format!("stitched cycle fails verification: {e}")))?;
    Ok(Some(w))
}
