//! End-to-end ADHC search: random balanced bipartitions, then the extremal
//! route, then the exact solver; plus a seeded search for small ADHC-free
//! digraphs above a semi-degree floor.

use crate::bipartite::bipartite_view;
use crate::bitset::VertexSet;
use crate::digraph::Digraph;
use crate::families::{gen_random_min_semidegree, recognize_exception, ExceptionKind, FamilyError};
use crate::lemmas::{
    candidate_targets, distribute_z, edge_preassignment, extremal_witness, find_connecting_edges_all,
    good_splitting, preprocess, reduce_to_adhc, EdgeShape, LemmaError, Params, WitnessMode,
};
use crate::lemmas::extremal::EXACT_LIMIT;
use crate::solver::{SolveError, Solver, SolverConfig};
use crate::walk::{verify_walk, OrientedWalk, Requirements, WalkKind};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub params: Params,
    /// Random bipartitions tried before leaving the first route.
    pub retries: usize,
    /// Redraws per size vector in the splitting step.
    pub split_retries: usize,
    /// Size vectors tried per pair of connecting edges.
    pub target_limit: usize,
    pub solver: SolverConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            params: Params::default(),
            retries: 50,
            split_retries: 20,
            target_limit: 8,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Adhc,
    Exception,
    AbsentProven,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    RandomSplit,
    Extremal,
    Exact,
}

/// What happened on the extremal route.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExtremalTrace {
    pub witness_found: bool,
    /// Whether the witness search was exhaustive.
    pub exhaustive: bool,
    pub z_size: Option<usize>,
    /// `|X_1|, |X_2|, |Y_1|, |Y_2|` after distributing `Z`.
    pub part_sizes: Option<[usize; 4]>,
    pub edge_shapes: Vec<EdgeShape>,
    pub splittings_tried: usize,
    pub splittings_good: usize,
    pub stopped: Option<String>,
}

/// Seed-determined part of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Deterministic {
    pub order: usize,
    pub arcs: usize,
    pub outcome: Outcome,
    pub route: Option<Route>,
    pub exception: Option<ExceptionKind>,
    pub certificate: Option<OrientedWalk>,
    pub bipartitions_tried: usize,
    pub extremal: Option<ExtremalTrace>,
    pub exact_nodes: Option<u64>,
    pub notes: Vec<String>,
}

/// Wall-clock times in milliseconds.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Measured {
    pub total_ms: f64,
    pub random_split_ms: f64,
    pub extremal_ms: f64,
    pub exact_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub deterministic: Deterministic,
    pub measured: Measured,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// A balanced bipartition by Fisher–Yates shuffle, split at the middle.
fn random_halves(n: usize, rng: &mut ChaCha8Rng) -> (VertexSet, VertexSet) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    (
        VertexSet::from_indices(n, order[..n / 2].iter().copied()),
        VertexSet::from_indices(n, order[n / 2..].iter().copied()),
    )
}

/// Runs the three routes in order and reports the first decisive result.
/// Every reported cycle has passed the verifier.
pub fn heuristic_adhc(d: &Digraph, cfg: &PipelineConfig, seed: u64) -> PipelineReport {
    let start = Instant::now();
    let n = d.order();
    let mut det = Deterministic {
        order: n,
        arcs: d.num_arcs(),
        outcome: Outcome::Inconclusive,
        route: None,
        exception: None,
        certificate: None,
        bipartitions_tried: 0,
        extremal: None,
        exact_nodes: None,
        notes: Vec::new(),
    };
    let mut measured = Measured::default();
    let finish = |mut det: Deterministic, mut measured: Measured| {
        if let Some(c) = &det.certificate {
            assert!(verify_walk(d, c, Requirements::ADHC).is_ok(), "unverified certificate");
            det.outcome = Outcome::Adhc;
        }
        measured.total_ms = ms(start);
        PipelineReport {
            deterministic: det,
            measured,
        }
    };
    if n % 2 == 1 || n < 4 {
        det.outcome = Outcome::AbsentProven;
        det.route = Some(Route::Exact);
        det.notes.push(format!("an ADHC needs an even order of at least 4, got {n}"));
        return finish(det, measured);
    }

    let t = Instant::now();
    let mut solver = Solver::new(SolverConfig { seed, ..cfg.solver.clone() }).expect("positive node limit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cfg.retries {
        det.bipartitions_tried += 1;
        let (s, sinks) = random_halves(n, &mut rng);
        let g = bipartite_view(d, &s, &sinks).expect("halves are disjoint");
        if let Some(c) = solver.bip_ham_cycle_heuristic(&g) {
            det.certificate = Some(OrientedWalk::from_sources(c, |v| s.contains(v), WalkKind::Cycle));
            det.route = Some(Route::RandomSplit);
            measured.random_split_ms = ms(t);
            return finish(det, measured);
        }
    }
    measured.random_split_ms = ms(t);

    let t = Instant::now();
    let exception = recognize_exception(d).map(|m| m.kind);
    det.exception = exception;
    if exception.is_none() {
        let mut trace = ExtremalTrace::default();
        let found = extremal_route(d, cfg, seed, &mut trace);
        det.extremal = Some(trace);
        match found {
            Ok(Some(c)) => {
                det.certificate = Some(c);
                det.route = Some(Route::Extremal);
                measured.extremal_ms = ms(t);
                return finish(det, measured);
            }
            Ok(None) => {}
            Err(e) => det.notes.push(format!("extremal route stopped: {e}")),
        }
    }
    measured.extremal_ms = ms(t);

    let t = Instant::now();
    let cutoff = cfg.solver.exact_cutoff;
    if n <= cutoff {
        let mut exact = Solver::new(SolverConfig { seed, ..cfg.solver.clone() }).expect("positive node limit");
        let result = exact.adhc(d);
        det.exact_nodes = Some(exact.nodes());
        det.route = Some(Route::Exact);
        match result {
            Ok(Some(c)) => det.certificate = Some(c),
            Ok(None) => det.outcome = Outcome::AbsentProven,
            Err(e) => det.notes.push(format!("exact solver stopped: {e}")),
        }
    } else if let Some(kind) = exception {
        det.outcome = Outcome::Exception;
        det.route = Some(Route::Extremal);
        det.notes.push(format!("isomorphic to {kind:?}, which has no ADHC"));
    } else {
        det.notes.push(format!("order {n} exceeds the exact cutoff {cutoff}"));
    }
    measured.exact_ms = ms(t);
    finish(det, measured)
}

fn extremal_route(
    d: &Digraph,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut ExtremalTrace,
) -> Result<Option<OrientedWalk>, LemmaError> {
    let p = &cfg.params;
    let mode = if d.order() <= EXACT_LIMIT {
        WitnessMode::Exact
    } else {
        WitnessMode::LocalSearch
    };
    let search = extremal_witness(d, p.alpha, mode, seed)?;
    trace.exhaustive = search.exhaustive;
    let Some(w) = search.witness else {
        trace.stopped = Some("no extremal witness".into());
        return Ok(None);
    };
    trace.witness_found = true;
    let part = preprocess(d, &w, p.alpha)?;
    trace.z_size = Some(part.z.len());
    let parts = distribute_z(d, &part, p.gamma)?;
    trace.part_sizes = Some([parts.x[0].len(), parts.x[1].len(), parts.y[0].len(), parts.y[1].len()]);
    let mut solver = Solver::new(SolverConfig { seed, ..cfg.solver.clone() })?;
    for edges in find_connecting_edges_all(d, &parts) {
        trace.edge_shapes.push(edges.shape);
        let pre = edge_preassignment(&parts, &edges);
        for targets in candidate_targets(&parts, edges.shape, &pre, p, d.order(), cfg.target_limit) {
            trace.splittings_tried += 1;
            let report = match good_splitting(d, &parts, &pre, &targets, p, seed, cfg.split_retries) {
                Ok(r) => r,
                Err(LemmaError::RetriesExhausted(_)) => continue,
                Err(e) => return Err(e),
            };
            trace.splittings_good += 1;
            match reduce_to_adhc(d, &report.splitting, [edges.first, edges.second], &mut solver) {
                Ok(Some(c)) => return Ok(Some(c)),
                Ok(None) => {}
                Err(LemmaError::Solve(SolveError::BudgetExceeded { .. })) => {
                    trace.stopped = Some("bipartite path search ran out of budget".into());
                    return Ok(None);
                }
                Err(e) => return Err(e),
            }
        }
    }
    trace.stopped = Some("no splitting led to an ADHC".into());
    Ok(None)
}

/// Per-trial seed: trial `t` is independent of which thread runs it.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    pub trial: u64,
    pub seed: u64,
    #[serde(skip)]
    pub digraph: Digraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub size: usize,
    pub trials: u64,
    pub floor: usize,
    pub with_adhc: u64,
    /// ADHC-free instances recognized as one of the two exceptions.
    pub exceptions: u64,
    /// Trials where the solver gave up.
    pub undecided: u64,
    pub hits: Vec<SearchHit>,
}

/// Samples `trials` digraphs of the given even order with minimum
/// semi-degree at least `floor`, decides each exactly, and keeps those with
/// no ADHC that are not one of the two exceptions. Trials run in parallel;
/// the result depends only on the arguments.
pub fn counterexample_search(
    size: usize,
    trials: u64,
    floor: usize,
    seed: u64,
    solver: &SolverConfig,
) -> Result<SearchReport, FamilyError> {
    if size % 2 == 1 {
        return Err(FamilyError::OddOrder(size));
    }
    gen_random_min_semidegree(size, floor, seed, None)?;
    enum Verdict {
        Has,
        Exception,
        Undecided,
        Free(Digraph),
    }
    let verdicts: Vec<(u64, u64, Verdict)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let s = trial_seed(seed, trial);
            let d = gen_random_min_semidegree(size, floor, s, None).expect("parameters checked above");
            let mut solver = Solver::new(SolverConfig { seed: s, ..solver.clone() }).expect("positive node limit");
            let v = match solver.adhc(&d) {
                Ok(Some(_)) => Verdict::Has,
                Ok(None) if recognize_exception(&d).is_some() => Verdict::Exception,
                Ok(None) => Verdict::Free(d),
                Err(_) => Verdict::Undecided,
            };
            (trial, s, v)
        })
        .collect();
    let mut report = SearchReport {
        size,
        trials,
        floor,
        with_adhc: 0,
        exceptions: 0,
        undecided: 0,
        hits: Vec::new(),
    };
    for (trial, s, v) in verdicts {
        match v {
            Verdict::Has => report.with_adhc += 1,
            Verdict::Exception => report.exceptions += 1,
            Verdict::Undecided => report.undecided += 1,
            Verdict::Free(digraph) => report.hits.push(SearchHit { trial, seed: s, digraph }),
        }
    }
    Ok(report)
}
