//! Extremal witnesses and the five-part partition derived from one.
//!
//! `D` on `2n` vertices is α-extremal when some `A`, `B` with
//! `(1−α)n ≤ |A|, |B| ≤ (1+α)n` have `Δ⁺(A, B) ≤ αn` and `Δ⁻(B, A) ≤ αn`.
//! Shrinking `A` or `B` never raises either maximum, so a witness exists iff
//! one exists at the smallest admissible size.

use super::{half, LemmaError, EPS};
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Largest order accepted by the exhaustive scan.
pub const EXACT_LIMIT: usize = 16;
const LOCAL_RESTARTS: usize = 64;
const LOCAL_ROUNDS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMode {
    Exact,
    LocalSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalWitness {
    pub a: VertexSet,
    pub b: VertexSet,
    pub alpha: f64,
    /// `Δ⁺(A, B)`.
    pub max_out: usize,
    /// `Δ⁻(B, A)`.
    pub max_in: usize,
}

fn max_out(d: &Digraph, a: &VertexSet, b: &VertexSet) -> usize {
    a.iter().map(|v| d.out_degree_in(v, b)).max().unwrap_or(0)
}

fn max_in(d: &Digraph, a: &VertexSet, b: &VertexSet) -> usize {
    b.iter().map(|v| d.in_degree_in(v, a)).max().unwrap_or(0)
}

struct Window {
    lo: usize,
    hi: usize,
    slack: usize,
}

fn window(order: usize, alpha: f64) -> Option<Window> {
    let n = half(order);
    let lo = ((1.0 - alpha) * n - EPS).ceil().max(0.0) as usize;
    let hi = (((1.0 + alpha) * n + EPS).floor() as usize).min(order);
    let slack = (alpha * n + EPS).floor() as usize;
    (lo <= hi).then_some(Window { lo, hi, slack })
}

impl ExtremalWitness {
    /// Builds the witness record if `(a, b)` satisfies every condition.
    pub fn check(d: &Digraph, a: &VertexSet, b: &VertexSet, alpha: f64) -> Option<Self> {
        let w = window(d.order(), alpha)?;
        let (mo, mi) = (max_out(d, a, b), max_in(d, a, b));
        let sized = |s: &VertexSet| (w.lo..=w.hi).contains(&s.len());
        (sized(a) && sized(b) && mo <= w.slack && mi <= w.slack).then(|| ExtremalWitness {
            a: a.clone(),
            b: b.clone(),
            alpha,
            max_out: mo,
            max_in: mi,
        })
    }

    pub fn is_valid(&self, d: &Digraph) -> bool {
        ExtremalWitness::check(d, &self.a, &self.b, self.alpha).as_ref() == Some(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessSearch {
    pub witness: Option<ExtremalWitness>,
    /// True when `witness == None` proves that no witness exists.
    pub exhaustive: bool,
}

/// Searches for an α-extremal pair.
///
/// Exact mode tries thresholds `t = 0, 1, …, ⌊αn⌋` and returns the first pair
/// at the smallest size with both maxima at most `t`, then grows it. Local
/// search alternates between best responses from seeded random starts; a
/// `None` from it is inconclusive.
pub fn extremal_witness(d: &Digraph, alpha: f64, mode: WitnessMode, seed: u64) -> Result<WitnessSearch, LemmaError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(LemmaError::Precondition(format!("alpha = {alpha} is not in (0, 1]")));
    }
    let Some(w) = window(d.order(), alpha) else {
        return Ok(WitnessSearch {
            witness: None,
            exhaustive: mode == WitnessMode::Exact,
        });
    };
    let found = match mode {
        WitnessMode::Exact => {
            if d.order() > EXACT_LIMIT {
                return Err(LemmaError::Precondition(format!(
                    "exact mode handles at most {EXACT_LIMIT} vertices, got {}",
                    d.order()
                )));
            }
            (0..=w.slack).find_map(|t| exact_pair(d, w.lo, t).map(|(a, b)| grow(d, a, b, t, w.hi)))
        }
        WitnessMode::LocalSearch => local_search(d, &w, seed),
    };
    Ok(WitnessSearch {
        witness: found.map(|(a, b)| ExtremalWitness::check(d, &a, &b, alpha).expect("search returns valid pairs")),
        exhaustive: mode == WitnessMode::Exact,
    })
}

/// Pairs of `size`-sets with both maxima at most `t`, by depth-first search
/// over `A` and then `B`. A vertex of `A` has at most `t` out-neighbours in
/// `B`, hence out-degree at most `order − size + t`; likewise for `B`.
fn exact_pair(d: &Digraph, size: usize, t: usize) -> Option<(VertexSet, VertexSet)> {
    let n = d.order();
    let cap = n - size + t;
    let cand_a: Vec<usize> = d.vertices().filter(|&v| d.out_degree(v) <= cap).collect();
    let cand_b = VertexSet::from_indices(n, d.vertices().filter(|&v| d.in_degree(v) <= cap));
    if cand_a.len() < size || cand_b.len() < size {
        return None;
    }
    let mut a = VertexSet::new(n);
    pick_a(d, &cand_a, 0, size, t, &mut a, &cand_b)
}

fn pick_a(
    d: &Digraph,
    cand: &[usize],
    from: usize,
    size: usize,
    t: usize,
    a: &mut VertexSet,
    cand_b: &VertexSet,
) -> Option<(VertexSet, VertexSet)> {
    if a.len() == size {
        let mut b = VertexSet::new(d.order());
        let pool = cand_b.to_vec();
        let mut load = vec![0usize; d.order()];
        return pick_b(d, &pool, 0, size, t, a, &mut b, &mut load).then(|| (a.clone(), b));
    }
    for i in from..cand.len() {
        if cand.len() - i < size - a.len() {
            break;
        }
        let v = cand[i];
        a.insert(v);
        // Members of B may receive at most t arcs from A.
        let narrowed = VertexSet::from_indices(d.order(), cand_b.iter().filter(|&u| d.in_degree_in(u, a) <= t));
        if narrowed.len() >= size {
            if let Some(found) = pick_a(d, cand, i + 1, size, t, a, &narrowed) {
                return Some(found);
            }
        }
        a.remove(v);
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn pick_b(
    d: &Digraph,
    pool: &[usize],
    from: usize,
    size: usize,
    t: usize,
    a: &VertexSet,
    b: &mut VertexSet,
    load: &mut [usize],
) -> bool {
    if b.len() == size {
        return true;
    }
    for i in from..pool.len() {
        if pool.len() - i < size - b.len() {
            break;
        }
        let v = pool[i];
        let preds = d.in_nbrs(v).intersection(a);
        if preds.iter().any(|u| load[u] == t) {
            continue;
        }
        for u in preds.iter() {
            load[u] += 1;
        }
        b.insert(v);
        if pick_b(d, pool, i + 1, size, t, a, b, load) {
            return true;
        }
        b.remove(v);
        for u in preds.iter() {
            load[u] -= 1;
        }
    }
    false
}

/// Adds vertices in ascending order, to `A` then to `B`, while both maxima
/// stay at most `t` and both sizes at most `hi`.
fn grow(d: &Digraph, mut a: VertexSet, mut b: VertexSet, t: usize, hi: usize) -> (VertexSet, VertexSet) {
    loop {
        let mut changed = false;
        for v in d.vertices() {
            if a.len() < hi
                && !a.contains(v)
                && d.out_degree_in(v, &b) <= t
                && d.out_nbrs(v).intersection(&b).iter().all(|u| d.in_degree_in(u, &a) < t)
            {
                a.insert(v);
                changed = true;
            }
            if b.len() < hi
                && !b.contains(v)
                && d.in_degree_in(v, &a) <= t
                && d.in_nbrs(v).intersection(&a).iter().all(|u| d.out_degree_in(u, &b) < t)
            {
                b.insert(v);
                changed = true;
            }
        }
        if !changed {
            return (a, b);
        }
    }
}

/// The `size` vertices with the smallest scores, random tie-breaks.
fn smallest(scores: impl Iterator<Item = usize>, size: usize, rng: &mut ChaCha8Rng, n: usize) -> VertexSet {
    let mut keyed: Vec<(usize, u64, usize)> = scores.enumerate().map(|(v, s)| (s, rng.gen(), v)).collect();
    keyed.sort_unstable();
    VertexSet::from_indices(n, keyed.into_iter().take(size).map(|(_, _, v)| v))
}

fn local_search(d: &Digraph, w: &Window, seed: u64) -> Option<(VertexSet, VertexSet)> {
    let n = d.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = d.vertices().collect();
    for restart in 0..LOCAL_RESTARTS {
        let mut a = if restart == 0 {
            smallest(d.vertices().map(|v| d.out_degree(v)), w.lo, &mut rng, n)
        } else {
            order.shuffle(&mut rng);
            VertexSet::from_indices(n, order[..w.lo].iter().copied())
        };
        for _ in 0..LOCAL_ROUNDS {
            let b = smallest(d.vertices().map(|v| d.in_degree_in(v, &a)), w.lo, &mut rng, n);
            let next = smallest(d.vertices().map(|v| d.out_degree_in(v, &b)), w.lo, &mut rng, n);
            let t = max_out(d, &next, &b).max(max_in(d, &next, &b));
            if t <= w.slack {
                return Some(grow(d, next, b, t, w.hi));
            }
            if next == a {
                break;
            }
            a = next;
        }
    }
    None
}

/// Named minimum degree between two parts, against the size of the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeFloor {
    pub name: String,
    /// `None` when the source part is empty.
    pub min: Option<usize>,
    pub target_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Partition5 {
    pub x1: VertexSet,
    pub x2: VertexSet,
    pub y1: VertexSet,
    pub y2: VertexSet,
    pub z: VertexSet,
    /// The deficiency threshold `α^{1/3}·n`.
    pub threshold: f64,
    pub floors: Vec<DegreeFloor>,
}

impl Partition5 {
    pub fn parts(&self) -> [&VertexSet; 5] {
        [&self.x1, &self.x2, &self.y1, &self.y2, &self.z]
    }

    pub fn is_partition(&self, order: usize) -> bool {
        let mut seen = VertexSet::new(order);
        for p in self.parts() {
            if p.intersects(&seen) {
                return false;
            }
            seen.union_with(p);
        }
        seen.len() == order
    }
}

/// Splits `V` by membership in `A` and `B`, then moves vertices whose degree
/// into a part they should be almost complete to falls short by more than
/// `α^{1/3}·n` into `Z`.
pub fn preprocess(d: &Digraph, w: &ExtremalWitness, alpha: f64) -> Result<Partition5, LemmaError> {
    if ExtremalWitness::check(d, &w.a, &w.b, alpha).is_none() {
        return Err(LemmaError::Precondition("the witness is not valid at this alpha".into()));
    }
    let (a, b) = (&w.a, &w.b);
    let tx1 = a.union(b).complement();
    let tx2 = a.intersection(b);
    let ty1 = a.difference(b);
    let ty2 = b.difference(a);
    let tau = alpha.cbrt() * half(d.order());
    let short = |deg: usize, s: &VertexSet| (deg as f64) + EPS < s.len() as f64 - tau;
    let hat_y1 = VertexSet::from_indices(
        d.order(),
        ty1.iter().filter(|&v| short(d.in_degree_in(v, &tx2), &tx2) || short(d.in_degree_in(v, &ty1), &ty1)),
    );
    let hat_y2 = VertexSet::from_indices(
        d.order(),
        ty2.iter().filter(|&v| short(d.out_degree_in(v, &tx2), &tx2) || short(d.out_degree_in(v, &ty2), &ty2)),
    );
    let hat_x1 = VertexSet::from_indices(
        d.order(),
        tx1.iter().filter(|&v| {
            short(d.in_degree_in(v, &ty1), &ty1)
                || short(d.out_degree_in(v, &ty2), &ty2)
                || short(d.semi_degree_in(v, &tx2), &tx2)
        }),
    );
    let x1 = tx1.difference(&hat_x1);
    let y1 = ty1.difference(&hat_y1);
    let y2 = ty2.difference(&hat_y2);
    let z = hat_x1.union(&hat_y1).union(&hat_y2);
    let floors = degree_floors(d, [&x1, &tx2], [&y1, &y2]);
    Ok(Partition5 {
        x1,
        x2: tx2,
        y1,
        y2,
        z,
        threshold: tau,
        floors,
    })
}

fn degree_floors(d: &Digraph, x: [&VertexSet; 2], y: [&VertexSet; 2]) -> Vec<DegreeFloor> {
    #[derive(Clone, Copy)]
    enum Kind {
        Semi,
        In,
        Out,
    }
    let mut out = Vec::new();
    let mut push = |kind: Kind, src: (&VertexSet, String), dst: (&VertexSet, String)| {
        let min = src
            .0
            .iter()
            .map(|v| match kind {
                Kind::Semi => d.semi_degree_in(v, dst.0),
                Kind::In => d.in_degree_in(v, dst.0),
                Kind::Out => d.out_degree_in(v, dst.0),
            })
            .min();
        let tag = match kind {
            Kind::Semi => "semi",
            Kind::In => "in",
            Kind::Out => "out",
        };
        out.push(DegreeFloor {
            name: format!("{tag}({},{})", src.1, dst.1),
            min,
            target_size: dst.0.len(),
        });
    };
    for i in 0..2 {
        let j = 1 - i;
        let (xi, xj, yi, yj) = (x[i], x[j], y[i], y[j]);
        let name = |p: &str, k: usize| format!("{p}{}", k + 1);
        push(Kind::Semi, (xj, name("X", j)), (xi, name("X", i)));
        push(Kind::In, (yj, name("Y", j)), (xi, name("X", i)));
        push(Kind::Out, (yi, name("Y", i)), (xi, name("X", i)));
        push(Kind::Semi, (yi, name("Y", i)), (yi, name("Y", i)));
        push(Kind::In, (xi, name("X", i)), (yi, name("Y", i)));
        push(Kind::Out, (xj, name("X", j)), (yi, name("Y", i)));
    }
    out
}
