use crate::report::{parse_set, read_input, read_text, write_output, Report, Status};
use crate::{CensusWhat, Cli, Command, ExtremalMode, Family, GenArgs, PipelineArgs, SolveArgs, SolveMode, What};
use adhc::families::{
    gen_anti_ladder, gen_f, gen_f1, gen_f2, gen_ladder, gen_oriented_cycle, gen_random_min_semidegree,
    recognize_exception, symmetric_digraph, CyclePattern,
};
use adhc::io::{parse_certificate, parse_digraph_bytes, serialize_certificate, serialize_digraph, to_dot, verify_certificate, Certificate};
use adhc::lemmas::{
    census, extremal_witness, maxcut_partition, preprocess, proper_adp_from_dense_pair, two_in_star_packing, CensusKind,
    LemmaError, WitnessMode,
};
use adhc::pipeline::{counterexample_search, heuristic_adhc, trial_seed, Outcome, PipelineConfig};
use adhc::solver::{solve_adhc_naive, SolveError, Solver, SolverConfig};
use adhc::{Digraph, OrientedWalk, VertexSet};
use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;
use std::time::Instant;

/// The naive oracle has no node budget, so it is capped by order instead.
const NAIVE_LIMIT: usize = 14;

/// Runs one subcommand. `Ok(None)` means the command already wrote its
/// payload to standard output and has no report.
pub fn run(cli: &Cli) -> Result<Option<Report>> {
    match &cli.command {
        Command::Gen(a) => gen(a, cli.seed),
        Command::Solve(a) => solve(a, cli.seed).map(Some),
        Command::Verify { file, cert } => verify(file, cert).map(Some),
        Command::Census { file, what, pair } => census_cmd(file, *what, pair).map(Some),
        Command::Extremal { file, alpha, mode } => extremal(file, *alpha, *mode, cli.seed).map(Some),
        Command::Stars { file } => stars(file).map(Some),
        Command::Maxcut { file, x, y, c } => maxcut(file, x, y, *c).map(Some),
        Command::Pipeline(a) => pipeline(a, cli.seed).map(Some),
        Command::Search { size, trials, floor } => search(*size, *trials, *floor, cli.seed).map(Some),
        Command::Bench { suite, runs } => bench(suite, *runs, cli.seed).map(Some),
        Command::Dot { file, cert } => dot(file, cert.as_deref()),
    }
}

fn load(path: &str) -> Result<Digraph> {
    let bytes = read_input(path)?;
    parse_digraph_bytes(&bytes).with_context(|| format!("parsing {path}"))
}

fn require(v: Option<usize>, flag: &str, family: Family) -> Result<usize> {
    v.ok_or_else(|| anyhow!("--{flag} is required for family {family:?}"))
}

fn gen(a: &GenArgs, seed: u64) -> Result<Option<Report>> {
    let n = || require(a.n, "n", a.family);
    let d = match a.family {
        Family::F => gen_f(n()?, require(a.k, "k", a.family)?)?.0,
        Family::F1 => gen_f1(n()?)?,
        Family::F2 => gen_f2(n()?)?,
        Family::Ladder => symmetric_digraph(&gen_ladder(n()?)),
        Family::Aladder => gen_anti_ladder(n()?),
        Family::Cycle => {
            let pattern = match (&a.pattern, a.n) {
                (Some(p), _) => CyclePattern::parse_bits(p).ok_or_else(|| anyhow!("bad pattern {p:?}, use 1/0 or +/-"))?,
                (None, Some(n)) => CyclePattern::Alternating(n),
                (None, None) => bail!("family cycle needs --pattern or --n"),
            };
            gen_oriented_cycle(&pattern)?.0
        }
        Family::Complete => Digraph::complete(n()?),
        Family::Random => gen_random_min_semidegree(n()?, require(a.d, "d", a.family)?, seed, a.density)?,
    };
    let text = serialize_digraph(&d);
    match a.output.as_deref() {
        None | Some("-") => {
            write_output("-", &text)?;
            Ok(None)
        }
        Some(path) => {
            write_output(path, &text)?;
            let det = json!({
                "family": format!("{:?}", a.family).to_lowercase(),
                "order": d.order(),
                "arcs": d.num_arcs(),
                "min_semi_degree": d.min_semi_degree(),
                "output": path,
            });
            Ok(Some(Report::new(det, Status::Positive)?))
        }
    }
}

fn walk_arcs(c: &Certificate) -> Vec<(usize, usize)> {
    match c {
        Certificate::Adhc(w) | Certificate::Adp(w) | Certificate::Dhc(w) => w.arcs().collect(),
        Certificate::TwoFactor(t) => t.cycles.iter().flat_map(|w| w.arcs()).collect(),
    }
}

fn solver_config(seed: u64, budget: Option<u64>) -> SolverConfig {
    let mut cfg = SolverConfig { seed, ..SolverConfig::default() };
    if let Some(b) = budget {
        cfg.node_limit = b;
    }
    cfg
}

fn solve(a: &SolveArgs, seed: u64) -> Result<Report> {
    let d = load(&a.file)?;
    let what = format!("{:?}", a.what).to_lowercase();
    let mut solver = Solver::new(solver_config(seed, a.budget))?;
    let started = Instant::now();
    let found: Result<Option<Certificate>, SolveError> = match (a.mode, a.what) {
        (SolveMode::Naive, What::Adhc) => {
            if d.order() > NAIVE_LIMIT {
                bail!("naive mode is limited to {NAIVE_LIMIT} vertices, got {}", d.order());
            }
            Ok(solve_adhc_naive(&d).map(Certificate::Adhc))
        }
        (SolveMode::Naive, _) => bail!("naive mode only decides adhc"),
        (SolveMode::Exact, What::Adhc) => solver.adhc(&d).map(|w| w.map(Certificate::Adhc)),
        (SolveMode::Exact, What::Adhp) => solver.adhp(&d).map(|w| w.map(Certificate::Adp)),
        (SolveMode::Exact, What::Dhc) => solver.directed_hc(&d).map(|w| w.map(Certificate::Dhc)),
        (SolveMode::Exact, What::TwoFactor) => solver.anti_two_factor(&d, a.max_cycles).map(|t| t.map(Certificate::TwoFactor)),
    };
    let solve_ms = started.elapsed().as_secs_f64() * 1e3;
    let mode = format!("{:?}", a.mode).to_lowercase();
    let (status, det) = match found {
        Ok(Some(cert)) => {
            verify_certificate(&d, &cert).map_err(|v| anyhow!("internal error: solver output fails verification: {v}"))?;
            let text = serialize_certificate(&cert);
            if let Some(path) = &a.cert {
                write_output(path, &text)?;
            }
            let det = json!({
                "what": what, "mode": mode, "order": d.order(), "arcs": d.num_arcs(),
                "found": true, "certificate": text, "nodes": solver.nodes(),
            });
            (Status::Positive, det)
        }
        Ok(None) => {
            let det = json!({
                "what": what, "mode": mode, "order": d.order(), "arcs": d.num_arcs(),
                "found": false, "nodes": solver.nodes(),
            });
            (Status::Negative, det)
        }
        Err(e @ (SolveError::BudgetExceeded { .. } | SolveError::TooLarge { .. })) => {
            let det = json!({
                "what": what, "mode": mode, "order": d.order(), "arcs": d.num_arcs(),
                "found": null, "stopped": e.to_string(), "nodes": solver.nodes(),
            });
            (Status::Inconclusive, det)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Report::new(det, status)?.measure("solve_ms", solve_ms))
}

fn verify(file: &str, cert: &str) -> Result<Report> {
    let d = load(file)?;
    let c = parse_certificate(&read_text(cert)?).with_context(|| format!("parsing {cert}"))?;
    let det = match verify_certificate(&d, &c) {
        Ok(()) => json!({ "kind": c.kind(), "valid": true }),
        Err(v) => json!({ "kind": c.kind(), "valid": false, "violation": v.to_string() }),
    };
    let status = if det["valid"] == json!(true) { Status::Positive } else { Status::Negative };
    Report::new(det, status)
}

fn census_cmd(file: &str, what: CensusWhat, pairs: &[(usize, usize)]) -> Result<Report> {
    let d = load(file)?;
    for &(x, y) in pairs {
        if x >= d.order() || y >= d.order() || x == y {
            bail!("pair ({x}, {y}) needs two distinct vertices below {}", d.order());
        }
    }
    let kind = match what {
        CensusWhat::Absorbers => CensusKind::Absorbers,
        CensusWhat::Connectors => CensusKind::Connectors,
    };
    let started = Instant::now();
    let counts = census(&d, kind, (!pairs.is_empty()).then_some(pairs));
    let ms = started.elapsed().as_secs_f64() * 1e3;
    let det = json!({
        "what": kind,
        "order": d.order(),
        "min": counts.iter().map(|p| p.count).min(),
        "max": counts.iter().map(|p| p.count).max(),
        "pairs": counts,
    });
    Ok(Report::new(det, Status::Positive)?.measure("census_ms", ms))
}

fn extremal(file: &str, alpha: f64, mode: ExtremalMode, seed: u64) -> Result<Report> {
    let d = load(file)?;
    let mode = match mode {
        ExtremalMode::Exact => WitnessMode::Exact,
        ExtremalMode::Search => WitnessMode::LocalSearch,
    };
    let started = Instant::now();
    let found = extremal_witness(&d, alpha, mode, seed)?;
    let ms = started.elapsed().as_secs_f64() * 1e3;
    let partition = match &found.witness {
        Some(w) => match preprocess(&d, w, alpha) {
            Ok(p) => json!(p),
            Err(e) => json!({ "error": e.to_string() }),
        },
        None => json!(null),
    };
    let status = match (&found.witness, found.exhaustive) {
        (Some(_), _) => Status::Positive,
        (None, true) => Status::Negative,
        (None, false) => Status::Inconclusive,
    };
    let det = json!({
        "order": d.order(),
        "alpha": alpha,
        "mode": mode,
        "witness": found.witness,
        "exhaustive": found.exhaustive,
        "partition": partition,
    });
    Ok(Report::new(det, status)?.measure("search_ms", ms))
}

fn stars(file: &str) -> Result<Report> {
    let d = load(file)?;
    match two_in_star_packing(&d) {
        Ok(p) => {
            let det = json!({ "order": d.order(), "count": p.stars.len(), "packing": p });
            Report::new(det, Status::Positive)
        }
        Err(LemmaError::NoIndependentArcs) => {
            Report::new(json!({ "order": d.order(), "count": null, "reason": "no two independent arcs" }), Status::Negative)
        }
        Err(e) => Err(e.into()),
    }
}

fn maxcut(file: &str, x: &str, y: &str, c: f64) -> Result<Report> {
    let d = load(file)?;
    let n = d.order();
    let xs = VertexSet::from_indices(n, parse_set(x, n)?);
    let ys = VertexSet::from_indices(n, parse_set(y, n)?);
    let (xp, yp) = maxcut_partition(&d, &xs, &ys, c)?;
    let path: OrientedWalk = proper_adp_from_dense_pair(&d, &xs, &ys, c)?;
    let status = if xp.is_empty() || yp.is_empty() { Status::Negative } else { Status::Positive };
    let det = json!({
        "order": n,
        "c": c,
        "x_prime": xp,
        "y_prime": yp,
        "floor_x": c / 8.0 * ys.len() as f64,
        "floor_y": c / 8.0 * xs.len() as f64,
        "path": path,
    });
    Report::new(det, status)
}

fn pipeline(a: &PipelineArgs, seed: u64) -> Result<Report> {
    let d = load(&a.file)?;
    let mut cfg = PipelineConfig::default();
    if let Some(r) = a.retries {
        cfg.retries = r;
    }
    for (slot, v) in [
        (&mut cfg.params.alpha, a.alpha),
        (&mut cfg.params.beta, a.beta),
        (&mut cfg.params.gamma, a.gamma),
        (&mut cfg.params.lambda, a.lambda),
    ] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    cfg.params.validate()?;
    cfg.solver = solver_config(seed, a.budget);
    if cfg.solver.node_limit == 0 {
        bail!("--budget must be positive");
    }
    let report = heuristic_adhc(&d, &cfg, seed);
    let det = &report.deterministic;
    if let (Some(path), Some(w)) = (&a.cert, &det.certificate) {
        write_output(path, &serialize_certificate(&Certificate::Adhc(w.clone())))?;
    }
    let status = match det.outcome {
        Outcome::Adhc => Status::Positive,
        Outcome::Exception | Outcome::AbsentProven => Status::Negative,
        Outcome::Inconclusive => Status::Inconclusive,
    };
    let m = &report.measured;
    Ok(Report::new(det, status)?
        .measure("total_ms", m.total_ms)
        .measure("random_split_ms", m.random_split_ms)
        .measure("extremal_ms", m.extremal_ms)
        .measure("exact_ms", m.exact_ms))
}

fn search(size: usize, trials: u64, floor: usize, seed: u64) -> Result<Report> {
    let r = counterexample_search(size, trials, floor, seed, &solver_config(seed, None))?;
    let hits: Vec<_> = r
        .hits
        .iter()
        .map(|h| json!({ "trial": h.trial, "seed": h.seed, "digraph": serialize_digraph(&h.digraph) }))
        .collect();
    let status = if !r.hits.is_empty() {
        Status::Positive
    } else if r.undecided > 0 {
        Status::Inconclusive
    } else {
        Status::Negative
    };
    let det = json!({
        "size": r.size,
        "trials": r.trials,
        "floor": r.floor,
        "with_adhc": r.with_adhc,
        "exceptions": r.exceptions,
        "undecided": r.undecided,
        "hits": hits,
    });
    Report::new(det, status)
}

fn bench(suite: &str, runs: usize, seed: u64) -> Result<Report> {
    match suite {
        "route1-2000" => bench_route1(runs, seed),
        "exact-12" => bench_exact12(seed),
        "" => bail!("empty suite name; known suites: route1-2000, exact-12"),
        other => bail!("unknown suite {other:?}; known suites: route1-2000, exact-12"),
    }
}

fn bench_route1(runs: usize, seed: u64) -> Result<Report> {
    const ORDER: usize = 2000;
    const DENSITY: f64 = 0.75;
    let cfg = PipelineConfig::default();
    let mut det = Vec::new();
    let mut times = Vec::new();
    for run in 0..runs as u64 {
        let s = trial_seed(seed, run);
        let d = gen_random_min_semidegree(ORDER, ORDER / 2, s, Some(DENSITY))?;
        let r = heuristic_adhc(&d, &cfg, s);
        det.push(json!({
            "run": run,
            "seed": s,
            "success": r.deterministic.outcome == Outcome::Adhc,
            "route": r.deterministic.route,
            "bipartitions_tried": r.deterministic.bipartitions_tried,
        }));
        times.push(r.measured.total_ms);
    }
    let all = det.iter().all(|r| r["success"] == json!(true));
    let status = if all { Status::Positive } else { Status::Negative };
    Ok(Report::new(json!({ "suite": "route1-2000", "order": ORDER, "density": DENSITY, "runs": det }), status)?
        .measure("run_ms", times))
}

fn bench_exact12(seed: u64) -> Result<Report> {
    const ORDER: usize = 12;
    let mut cases: Vec<(String, Digraph)> = (1..=ORDER / 2)
        .map(|k| Ok((format!("F({ORDER},{k})"), gen_f(ORDER, k)?.0)))
        .collect::<Result<_>>()?;
    cases.push((format!("F1({ORDER})"), gen_f1(ORDER)?));
    cases.push((format!("F2({ORDER})"), gen_f2(ORDER)?));
    let mut det = Vec::new();
    let mut times = Vec::new();
    for (name, d) in &cases {
        let mut solver = Solver::new(solver_config(seed, None))?;
        let started = Instant::now();
        let found = solver.adhc(d)?.is_some();
        times.push(started.elapsed().as_secs_f64() * 1e3);
        det.push(json!({
            "instance": name,
            "adhc": found,
            "exception": recognize_exception(d).map(|m| m.kind),
            "nodes": solver.nodes(),
        }));
    }
    let none_found = det.iter().all(|r| r["adhc"] == json!(false));
    let status = if none_found { Status::Positive } else { Status::Negative };
    Ok(Report::new(json!({ "suite": "exact-12", "cases": det }), status)?.measure("case_ms", times))
}

fn dot(file: &str, cert: Option<&str>) -> Result<Option<Report>> {
    let d = load(file)?;
    let highlight = match cert {
        Some(path) => {
            let c = parse_certificate(&read_text(path)?).with_context(|| format!("parsing {path}"))?;
            walk_arcs(&c)
        }
        None => Vec::new(),
    };
    write_output("-", &to_dot(&d, &highlight))?;
    Ok(None)
}
