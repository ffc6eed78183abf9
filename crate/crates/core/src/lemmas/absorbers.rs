//! Absorbers, connectors and the absorbing path.
//!
//! An `(x, y)`-absorber is a proper ADP `a b c d` such that `a x c b y d` is
//! also a proper ADP; an `(x, y)`-connector is an arc `(a, b)` making
//! `x a b y` anti-directed. The absorbing path chains absorbers with
//! connectors, and any registered absorber can later swallow a pair of
//! outside vertices without moving the path's ends.

use super::LemmaError;
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use crate::walk::{verify_walk, OrientedWalk, Requirements, WalkKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, HashSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbsorberTuple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub target: (usize, usize),
}

impl AbsorberTuple {
    pub fn path(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Whether `(a, b, c, d)` absorbs `(x, y)` in `g`, checked arc by arc.
    pub fn absorbs(&self, g: &Digraph, x: usize, y: usize) -> bool {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let vs = [a, b, c, d, x, y];
        let distinct = (0..6).all(|i| (i + 1..6).all(|j| vs[i] != vs[j]));
        distinct
            && [(a, b), (c, b), (c, d), (a, x), (c, x), (y, b), (y, d)]
                .iter()
                .all(|&(u, v)| g.has_arc(u, v))
    }

    pub fn is_valid(&self, g: &Digraph) -> bool {
        self.absorbs(g, self.target.0, self.target.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConnectorPair {
    pub a: usize,
    pub b: usize,
    pub target: (usize, usize),
}

impl ConnectorPair {
    pub fn is_valid(&self, g: &Digraph) -> bool {
        let (x, y) = self.target;
        let vs = [self.a, self.b, x, y];
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| vs[i] != vs[j]));
        distinct && g.has_arc(self.a, x) && g.has_arc(self.a, self.b) && g.has_arc(y, self.b)
    }
}

fn without(s: &VertexSet, vs: &[usize]) -> VertexSet {
    let mut s = s.clone();
    for &v in vs {
        s.remove(v);
    }
    s
}

/// Calls `f` on every `(x, y)`-absorber with all four vertices in `allowed`,
/// in lexicographic order of `(a, b, c, d)`, until it returns `false`.
fn for_each_absorber(g: &Digraph, x: usize, y: usize, allowed: &VertexSet, mut f: impl FnMut(AbsorberTuple) -> bool) {
    let pool = without(allowed, &[x, y]);
    let into_x = g.in_nbrs(x).intersection(&pool);
    let from_y = g.out_nbrs(y).intersection(&pool);
    for a in into_x.iter() {
        for b in g.out_nbrs(a).intersection(&from_y).iter() {
            let cs = without(&into_x.intersection(g.in_nbrs(b)), &[a]);
            for c in cs.iter() {
                let ds = without(&g.out_nbrs(c).intersection(&from_y), &[a, b]);
                for d in ds.iter() {
                    if !f(AbsorberTuple {
                        a,
                        b,
                        c,
                        d,
                        target: (x, y),
                    }) {
                        return;
                    }
                }
            }
        }
    }
}

fn for_each_connector(g: &Digraph, x: usize, y: usize, allowed: &VertexSet, mut f: impl FnMut(ConnectorPair) -> bool) {
    let pool = without(allowed, &[x, y]);
    let from_y = g.out_nbrs(y).intersection(&pool);
    for a in g.in_nbrs(x).intersection(&pool).iter() {
        for b in without(&g.out_nbrs(a).intersection(&from_y), &[a]).iter() {
            if !f(ConnectorPair { a, b, target: (x, y) }) {
                return;
            }
        }
    }
}

/// All `(x, y)`-absorbers in lexicographic order, at most `limit` of them.
pub fn enumerate_absorbers(g: &Digraph, x: usize, y: usize, limit: Option<usize>) -> Vec<AbsorberTuple> {
    let mut out = Vec::new();
    if x == y {
        return out;
    }
    let cap = limit.unwrap_or(usize::MAX);
    if cap == 0 {
        return out;
    }
    for_each_absorber(g, x, y, &g.vertex_set(), |t| {
        out.push(t);
        out.len() < cap
    });
    out
}

pub fn enumerate_connectors(g: &Digraph, x: usize, y: usize, limit: Option<usize>) -> Vec<ConnectorPair> {
    let mut out = Vec::new();
    if x == y {
        return out;
    }
    let cap = limit.unwrap_or(usize::MAX);
    if cap == 0 {
        return out;
    }
    for_each_connector(g, x, y, &g.vertex_set(), |t| {
        out.push(t);
        out.len() < cap
    });
    out
}

/// `|f_abs(x, y)|` without listing: for each choice of `a` and `c`, the
/// choices of `b` and `d` are two sets counted with their overlap removed.
pub fn count_absorbers(g: &Digraph, x: usize, y: usize) -> u64 {
    if x == y {
        return 0;
    }
    let pool = without(&g.vertex_set(), &[x, y]);
    let into_x = g.in_nbrs(x).intersection(&pool);
    let from_y = g.out_nbrs(y).intersection(&pool);
    let mut total = 0u64;
    for a in into_x.iter() {
        let bs_a = g.out_nbrs(a).intersection(&from_y);
        for c in into_x.iter().filter(|&c| c != a) {
            let bs = without(&bs_a.intersection(g.out_nbrs(c)), &[a, c]);
            let ds = without(&g.out_nbrs(c).intersection(&from_y), &[a, c]);
            total += (bs.len() * ds.len() - bs.intersection_len(&ds)) as u64;
        }
    }
    total
}

pub fn count_connectors(g: &Digraph, x: usize, y: usize) -> u64 {
    if x == y {
        return 0;
    }
    let pool = without(&g.vertex_set(), &[x, y]);
    let from_y = g.out_nbrs(y).intersection(&pool);
    g.in_nbrs(x)
        .intersection(&pool)
        .iter()
        .map(|a| without(&g.out_nbrs(a).intersection(&from_y), &[a]).len() as u64)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusKind {
    Absorbers,
    Connectors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairCount {
    pub x: usize,
    pub y: usize,
    pub count: u64,
}

/// Counts for each listed pair, or for every ordered pair when `pairs` is
/// `None`. Pairs are processed in parallel; output follows input order.
pub fn census(g: &Digraph, kind: CensusKind, pairs: Option<&[(usize, usize)]>) -> Vec<PairCount> {
    let all: Vec<(usize, usize)> = match pairs {
        Some(p) => p.to_vec(),
        None => g.vertices().flat_map(|x| g.vertices().filter(move |&y| y != x).map(move |y| (x, y))).collect(),
    };
    all.par_iter()
        .map(|&(x, y)| PairCount {
            x,
            y,
            count: match kind {
                CensusKind::Absorbers => count_absorbers(g, x, y),
                CensusKind::Connectors => count_connectors(g, x, y),
            },
        })
        .collect()
}

/// A family of tuples with pairwise-disjoint images, with per-target counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    pub tuples: Vec<Vec<usize>>,
    /// For each target, how many of its candidates made it into the family.
    pub hits: Vec<usize>,
    /// Targets below the `c·n` floor, with their hit counts.
    pub shortfalls: Vec<(usize, usize)>,
    /// Tuples drawn before overlaps were removed.
    pub sampled: usize,
    /// Tuples dropped for sharing a vertex with another drawn tuple.
    pub overlapping: usize,
    /// Tuples added afterwards for targets left with no hits.
    pub repaired: usize,
    /// Members exchanged for a candidate of an uncovered target once the cap
    /// was reached.
    pub swapped: usize,
    /// The size cap `⌊b·n/k⌋`.
    pub cap: usize,
}

/// Random selection of disjoint `K`-tuples over a ground set of `universe`
/// vertices.
///
/// Every distinct candidate is drawn independently with probability
/// `p·n^{1−K}`, where `p = 0.9·b/K`. Drawn tuples meeting another drawn tuple
/// are all dropped, and the family is cut to `⌊b·n/K⌋`. Then each target with
/// no hits, in order, gets its first candidate disjoint from the family while
/// the cap allows. Once the cap binds, a member is exchanged for one of the
/// first [`SWAP_SCAN`] candidates of an uncovered target whenever that leaves
/// fewer targets uncovered. Shortfalls are reported, not treated as errors.
pub fn select_disjoint_family<const K: usize>(
    universe: usize,
    candidates: &[Vec<[usize; K]>],
    b: f64,
    c: f64,
    seed: u64,
) -> Family {
    let n = universe.max(1) as f64;
    let p = 0.9 * b / K as f64;
    let prob = (p * n.powi(1 - K as i32)).clamp(0.0, 1.0);
    let cap = (b * n / K as f64 + super::EPS).floor() as usize;
    let distinct: BTreeSet<[usize; K]> = candidates.iter().flatten().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drawn: Vec<[usize; K]> = distinct.into_iter().filter(|_| rng.gen_bool(prob)).collect();
    let mut uses = vec![0usize; universe];
    for t in &drawn {
        for &v in t {
            uses[v] += 1;
        }
    }
    let mut family: Vec<[usize; K]> = drawn.iter().copied().filter(|t| t.iter().all(|&v| uses[v] == 1)).collect();
    let overlapping = drawn.len() - family.len();
    family.truncate(cap);
    let mut taken = VertexSet::new(universe);
    for t in &family {
        for &v in t {
            taken.insert(v);
        }
    }
    let mut chosen: HashSet<[usize; K]> = family.iter().copied().collect();
    let mut repaired = 0;
    for list in candidates {
        if family.len() >= cap {
            break;
        }
        if list.iter().any(|t| chosen.contains(t)) {
            continue;
        }
        if let Some(t) = list.iter().find(|t| t.iter().all(|&v| !taken.contains(v))) {
            for &v in t {
                taken.insert(v);
            }
            chosen.insert(*t);
            family.push(*t);
            repaired += 1;
        }
    }
    let swapped = swap_uncovered(candidates, &mut family);
    let chosen: HashSet<[usize; K]> = family.iter().copied().collect();
    let hits: Vec<usize> = candidates
        .iter()
        .map(|list| list.iter().collect::<HashSet<_>>().into_iter().filter(|t| chosen.contains(*t)).count())
        .collect();
    let floor = (c * n - super::EPS).ceil() as usize;
    let shortfalls = hits.iter().enumerate().filter(|(_, &h)| h < floor.max(1)).map(|(i, &h)| (i, h)).collect();
    Family {
        tuples: family.iter().map(|t| t.to_vec()).collect(),
        hits,
        shortfalls,
        sampled: drawn.len(),
        overlapping,
        repaired,
        swapped,
        cap,
    }
}

/// Candidates of an uncovered target tried per exchange round.
pub const SWAP_SCAN: usize = 32;

/// Exchanges members of a full family for candidates of uncovered targets
/// while that strictly reduces the number of uncovered targets.
fn swap_uncovered<const K: usize>(candidates: &[Vec<[usize; K]>], family: &mut [[usize; K]]) -> usize {
    let mut index: HashMap<[usize; K], Vec<usize>> = HashMap::new();
    for (i, list) in candidates.iter().enumerate() {
        for t in list.iter().collect::<HashSet<_>>() {
            index.entry(*t).or_default().push(i);
        }
    }
    let mut hits = vec![0usize; candidates.len()];
    for t in family.iter() {
        for &i in index.get(t).map(Vec::as_slice).unwrap_or(&[]) {
            hits[i] += 1;
        }
    }
    let mut stuck = vec![false; candidates.len()];
    let mut mark = vec![false; candidates.len()];
    let mut swaps = 0;
    while let Some(target) = (0..candidates.len()).find(|&i| hits[i] == 0 && !stuck[i] && !candidates[i].is_empty()) {
        // (net change in uncovered targets, member slot, replacement)
        let mut best: Option<(isize, usize, [usize; K])> = None;
        for cand in candidates[target].iter().take(SWAP_SCAN) {
            let clashes: Vec<usize> = (0..family.len())
                .filter(|&m| family[m].iter().any(|v| cand.contains(v)))
                .collect();
            let slots: Vec<usize> = match clashes.len() {
                0 => (0..family.len()).collect(),
                1 => clashes,
                _ => continue,
            };
            let covers = &index[cand];
            for &i in covers {
                mark[i] = true;
            }
            let gained = covers.iter().filter(|&&i| hits[i] == 0).count() as isize;
            for m in slots {
                let lost = index[&family[m]].iter().filter(|&&i| hits[i] == 1 && !mark[i]).count() as isize;
                let delta = lost - gained;
                if delta < 0 && best.is_none_or(|(d, _, _)| delta < d) {
                    best = Some((delta, m, *cand));
                }
            }
            for &i in covers {
                mark[i] = false;
            }
        }
        match best {
            Some((_, m, cand)) => {
                for &i in &index[&family[m]] {
                    hits[i] -= 1;
                }
                for &i in &index[&cand] {
                    hits[i] += 1;
                }
                family[m] = cand;
                swaps += 1;
            }
            None => stuck[target] = true,
        }
    }
    swaps
}

/// The path `A_1 x_1 y_1 A_2 … A_ℓ` and the absorbers on it, in path order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorbingPath {
    pub path: OrientedWalk,
    pub registry: Vec<AbsorberTuple>,
}

/// Chains `ell` vertex-disjoint absorbers by connectors into a proper ADP on
/// `6·ell − 2` vertices.
///
/// Works on a seeded relabelling of `g` so that different seeds pick
/// different absorbers. Each absorber is the first one found, over targets in
/// order, among unused vertices; each link takes the first connector among
/// unused vertices.
pub fn build_absorbing_path(g: &Digraph, ell: usize, seed: u64) -> Result<AbsorbingPath, LemmaError> {
    if ell == 0 {
        return Ok(AbsorbingPath {
            path: OrientedWalk::empty_path(),
            registry: Vec::new(),
        });
    }
    let n = g.order();
    if 6 * ell - 2 > n {
        return Err(LemmaError::Precondition(format!(
            "{ell} absorbers need {} vertices but the digraph has {n}",
            6 * ell - 2
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut back = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        back[p] = v;
    }
    let h = g.relabel(&perm);
    let mut free = h.vertex_set();
    let mut absorbers = Vec::with_capacity(ell);
    for i in 0..ell {
        let mut found = None;
        'targets: for x in 0..n {
            for y in (0..n).filter(|&y| y != x) {
                for_each_absorber(&h, x, y, &free, |t| {
                    found = Some(t);
                    false
                });
                if found.is_some() {
                    break 'targets;
                }
            }
        }
        let t = found.ok_or(LemmaError::SupplyExhausted { what: "absorbers", index: i })?;
        for v in t.path() {
            free.remove(v);
        }
        absorbers.push(t);
    }
    let mut verts = Vec::with_capacity(6 * ell - 2);
    for i in 0..ell {
        verts.extend(absorbers[i].path());
        if i + 1 < ell {
            let mut found = None;
            for_each_connector(&h, absorbers[i].d, absorbers[i + 1].a, &free, |t| {
                found = Some(t);
                false
            });
            let t = found.ok_or(LemmaError::SupplyExhausted { what: "connectors", index: i })?;
            free.remove(t.a);
            free.remove(t.b);
            verts.extend([t.a, t.b]);
        }
    }
    let registry = absorbers
        .iter()
        .map(|t| AbsorberTuple {
            a: back[t.a],
            b: back[t.b],
            c: back[t.c],
            d: back[t.d],
            target: (back[t.target.0], back[t.target.1]),
        })
        .collect();
    let path = OrientedWalk::alternating(verts.into_iter().map(|v| back[v]).collect(), true, WalkKind::Path);
    debug_assert!(verify_walk(g, &path, Requirements::PROPER_ADP).is_ok());
    Ok(AbsorbingPath { path, registry })
}

/// Inserts the vertices of `w` into the absorbing path, two at a time.
///
/// `w` is paired up in ascending order; each pair, in either orientation, is
/// matched to a distinct registry entry that absorbs it (augmenting paths),
/// and the entry's segment `a b c d` becomes `a x c b y d`.
pub fn absorb(g: &Digraph, ap: &AbsorbingPath, w: &VertexSet) -> Result<OrientedWalk, LemmaError> {
    if w.len() % 2 == 1 {
        return Err(LemmaError::OddSet(w.len()));
    }
    if let Some(v) = ap.path.vertices.iter().find(|&&v| w.contains(v)) {
        return Err(LemmaError::Precondition(format!("vertex {v} is already on the path")));
    }
    let members = w.to_vec();
    let pairs: Vec<(usize, usize)> = members.chunks(2).map(|p| (p[0], p[1])).collect();
    if pairs.len() > ap.registry.len() {
        return Err(LemmaError::Capacity {
            pairs: pairs.len(),
            capacity: ap.registry.len(),
        });
    }
    let mut start = vec![usize::MAX; ap.registry.len()];
    for (r, t) in ap.registry.iter().enumerate() {
        let pos = ap.path.vertices.iter().position(|&v| v == t.a);
        match pos {
            Some(p) if ap.path.vertices.get(p..p + 4) == Some(&t.path()[..]) => start[r] = p,
            _ => return Err(LemmaError::Precondition(format!("registry entry {r} is not a segment of the path"))),
        }
    }
    let options: Vec<Vec<(usize, (usize, usize))>> = pairs
        .iter()
        .map(|&(x, y)| {
            ap.registry
                .iter()
                .enumerate()
                .filter_map(|(r, t)| {
                    if t.absorbs(g, x, y) {
                        Some((r, (x, y)))
                    } else if t.absorbs(g, y, x) {
                        Some((r, (y, x)))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; ap.registry.len()];
    for (i, &(x, y)) in pairs.iter().enumerate() {
        let mut seen = vec![false; ap.registry.len()];
        if !augment(i, &options, &mut owner, &mut seen) {
            return Err(LemmaError::NotAbsorbable(x, y));
        }
    }
    let mut insert_at: Vec<Option<(usize, usize)>> = vec![None; ap.path.len()];
    for (r, o) in owner.iter().enumerate() {
        if let Some(i) = *o {
            let (_, xy) = options[i].iter().find(|(rr, _)| *rr == r).unwrap();
            insert_at[start[r]] = Some(*xy);
        }
    }
    let mut verts = Vec::with_capacity(ap.path.len() + w.len());
    let mut i = 0;
    while i < ap.path.len() {
        match insert_at[i] {
            Some((x, y)) => {
                let s = &ap.path.vertices[i..i + 4];
                verts.extend([s[0], x, s[2], s[1], y, s[3]]);
                i += 4;
            }
            None => {
                verts.push(ap.path.vertices[i]);
                i += 1;
            }
        }
    }
    let out = OrientedWalk::alternating(verts, true, WalkKind::Path);
    debug_assert!(verify_walk(g, &out, Requirements::PROPER_ADP).is_ok());
    Ok(out)
}

fn augment(
    i: usize,
    options: &[Vec<(usize, (usize, usize))>],
    owner: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &(r, _) in &options[i] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if owner[r].is_none() || augment(owner[r].unwrap(), options, owner, seen) {
            owner[r] = Some(i);
            return true;
        }
    }
    false
}
