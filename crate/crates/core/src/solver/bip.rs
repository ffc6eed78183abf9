//! Hamiltonian cycles and prescribed-end paths in bipartite graphs.
//!
//! Rotation-extension runs first; when it gives up, an exhaustive search
//! decides the instance (subset DP for small graphs, budgeted DFS otherwise).
//! Paths with ends `a`, `b` reduce to cycles by attaching a gadget: one new
//! vertex adjacent to both ends when they share a side, or two adjacent new
//! vertices hanging off `a` and `b` when they do not.

use super::{dp, Budget, SolveError};
use crate::bipartite::BipartiteGraph;
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Largest order handed to the subset DP.
const DP_ORDER: usize = 24;

/// Moon–Moser style degree condition on a balanced bipartite graph with sides
/// of size `n`: for every `1 ≤ k ≤ n/2`, fewer than `k` vertices in total
/// have degree at most `k`. Sufficient for Hamiltonicity when `n ≥ 2`.
pub fn moon_moser_condition(g: &BipartiteGraph) -> bool {
    let n = g.left().len();
    if g.right().len() != n || n < 2 {
        return false;
    }
    let degs = |s: &VertexSet| {
        let mut d: Vec<usize> = s.iter().map(|v| g.degree(v)).collect();
        d.sort_unstable();
        d
    };
    let (l, r) = (degs(g.left()), degs(g.right()));
    (1..=n / 2).all(|k| {
        let low = |d: &[usize]| d.iter().take_while(|&&x| x <= k).count();
        low(&l) + low(&r) < k
    })
}

pub(super) fn ham_cycle(
    g: &BipartiteGraph,
    restarts: usize,
    exhaustive: bool,
    budget: &mut Budget,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<usize>>, SolveError> {
    let n = g.left().len();
    if g.right().len() != n || n < 2 || g.min_degree() < 2 || !g.is_connected() {
        return Ok(None);
    }
    let verts = g.vertices().to_vec();
    let steps = 20 * verts.len() + 1000;
    for _ in 0..restarts.max(1) {
        if let Some(c) = rotation_extension(g, &verts, steps, rng) {
            return Ok(Some(c));
        }
    }
    if !exhaustive {
        return Ok(None);
    }
    if verts.len() <= DP_ORDER {
        let mut back = vec![usize::MAX; g.universe()];
        for (i, &v) in verts.iter().enumerate() {
            back[v] = i;
        }
        let arcs = verts
            .iter()
            .flat_map(|&a| g.nbrs(a).iter().map(move |b| (a, b)))
            .map(|(a, b)| (back[a], back[b]))
            .collect::<Vec<_>>();
        let d = Digraph::from_arcs(verts.len(), arcs).expect("valid arcs");
        return Ok(dp::directed_hc(&d, budget)?.map(|w| w.vertices.iter().map(|&i| verts[i]).collect()));
    }
    exhaustive_cycle(g, &verts, budget)
}

fn random_member(s: &VertexSet, rng: &mut ChaCha8Rng) -> Option<usize> {
    let k = s.len();
    (k > 0).then(|| s.iter().nth(rng.gen_range(0..k)).unwrap())
}

/// Pósa rotation-extension from a random start. Extends greedily (preferring
/// the sampled candidate with fewest free neighbours); at a dead end rotates
/// around a random neighbour of the endpoint.
fn rotation_extension(g: &BipartiteGraph, verts: &[usize], max_steps: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let n = verts.len();
    let mut pos = vec![usize::MAX; g.universe()];
    let mut free = g.vertices();
    let start = *verts.choose(rng)?;
    let mut path = Vec::with_capacity(n);
    path.push(start);
    pos[start] = 0;
    free.remove(start);
    for _ in 0..max_steps {
        let end = *path.last().unwrap();
        let cands = g.nbrs(end).intersection(&free);
        if !cands.is_empty() {
            let mut pick = random_member(&cands, rng).unwrap();
            let mut score = g.nbrs(pick).intersection_len(&free);
            for _ in 0..7.min(cands.len() - 1) {
                let c = random_member(&cands, rng).unwrap();
                let s = g.nbrs(c).intersection_len(&free);
                if s < score {
                    pick = c;
                    score = s;
                }
            }
            pos[pick] = path.len();
            path.push(pick);
            free.remove(pick);
            continue;
        }
        if path.len() == n && g.has_edge(end, path[0]) {
            return Some(path);
        }
        let len = path.len();
        let pivots: Vec<usize> = g
            .nbrs(end)
            .iter()
            .map(|y| pos[y])
            .filter(|&i| i + 2 < len)
            .collect();
        if pivots.is_empty() || rng.gen_ratio(1, 16) {
            path.reverse();
        } else {
            let i = pivots[rng.gen_range(0..pivots.len())];
            path[i + 1..].reverse();
            for (j, &v) in path.iter().enumerate().skip(i + 1) {
                pos[v] = j;
            }
            continue;
        }
        for (j, &v) in path.iter().enumerate() {
            pos[v] = j;
        }
    }
    None
}

/// Depth-first search for a Hamiltonian cycle from the lowest-degree vertex.
fn exhaustive_cycle(g: &BipartiteGraph, verts: &[usize], budget: &mut Budget) -> Result<Option<Vec<usize>>, SolveError> {
    let start = *verts.iter().min_by_key(|&&v| g.degree(v)).unwrap();
    let mut free = g.vertices();
    free.remove(start);
    let mut path = vec![start];
    Ok(cycle_dfs(g, &mut path, &mut free, budget)?.then_some(path))
}

fn cycle_dfs(g: &BipartiteGraph, path: &mut Vec<usize>, free: &mut VertexSet, budget: &mut Budget) -> Result<bool, SolveError> {
    budget.tick(1)?;
    let end = *path.last().unwrap();
    let start = path[0];
    if free.is_empty() {
        return Ok(path.len() >= 4 && g.has_edge(end, start));
    }
    if !g.nbrs(start).intersects(free) {
        return Ok(false);
    }
    let mut cands: Vec<(usize, usize)> = g
        .nbrs(end)
        .intersection(free)
        .iter()
        .map(|w| (g.nbrs(w).intersection_len(free), w))
        .collect();
    cands.sort_unstable();
    'next: for (_, w) in cands {
        free.remove(w);
        // Free neighbours of the old end lose it as a possible neighbour.
        for x in g.nbrs(end).intersection(free).iter() {
            let avail = g.nbrs(x).intersection_len(free) + g.has_edge(x, w) as usize + g.has_edge(x, start) as usize;
            if avail < 2 {
                free.insert(w);
                continue 'next;
            }
        }
        path.push(w);
        if cycle_dfs(g, path, free, budget)? {
            return Ok(true);
        }
        path.pop();
        free.insert(w);
    }
    Ok(false)
}

pub(super) fn ham_path(
    g: &BipartiteGraph,
    a: usize,
    b: usize,
    restarts: usize,
    budget: &mut Budget,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<usize>>, SolveError> {
    let in_left = |v: usize| g.left().contains(v);
    let in_right = |v: usize| g.right().contains(v);
    for v in [a, b] {
        if !in_left(v) && !in_right(v) {
            return Err(SolveError::Precondition(format!("end {v} is not a vertex of the graph")));
        }
    }
    let (l, r) = (g.left().len(), g.right().len());
    if a == b {
        return if l + r == 1 {
            Ok(Some(vec![a]))
        } else {
            Err(SolveError::Precondition("both ends coincide".into()))
        };
    }
    let same_side = in_left(a) == in_left(b);
    let placement_ok = match l as isize - r as isize {
        0 => !same_side,
        1 => same_side && in_left(a),
        -1 => same_side && in_right(a),
        _ => false,
    };
    if !placement_ok {
        return Err(SolveError::Precondition(format!(
            "sides of sizes {l} and {r} admit no Hamiltonian path with ends {a} and {b}"
        )));
    }
    let u = g.universe();
    let mut h = g.grow(2);
    let cycle = if same_side {
        let z = u;
        h.add_vertex(z, !in_left(a)).expect("new vertex");
        h.add_edge(z, a).expect("crossing");
        h.add_edge(z, b).expect("crossing");
        ham_cycle(&h, restarts, true, budget, rng)?
    } else {
        let (z1, z2) = (u, u + 1);
        h.add_vertex(z1, !in_left(a)).expect("new vertex");
        h.add_vertex(z2, in_left(a)).expect("new vertex");
        h.add_edge(z1, a).expect("crossing");
        h.add_edge(z2, b).expect("crossing");
        h.add_edge(z1, z2).expect("crossing");
        ham_cycle(&h, restarts, true, budget, rng)?
    };
    let Some(mut cycle) = cycle else {
        return Ok(None);
    };
    let zi = cycle.iter().position(|&v| v == u).expect("gadget on cycle");
    cycle.rotate_left(zi);
    let mut path: Vec<usize> = cycle.into_iter().skip(1).filter(|&v| v < u).collect();
    if path[0] != a {
        path.reverse();
    }
    debug_assert_eq!((path[0], *path.last().unwrap()), (a, b));
    Ok(Some(path))
}
