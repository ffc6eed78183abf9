use adhc::families::gen_random_min_semidegree;
use adhc::lemmas::{
    absorb, build_absorbing_path, count_absorbers, count_connectors, enumerate_absorbers, enumerate_connectors,
    extremal_witness, maxcut_partition, select_disjoint_family, star_bound, two_in_star_packing, WitnessMode,
};
use adhc::pipeline::{counterexample_search, heuristic_adhc, Outcome, PipelineConfig, Route};
use adhc::solver::SolverConfig;
use adhc::walk::{verify_walk, Requirements};
use adhc::{Digraph, VertexSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random(n: usize, p: f64, seed: u64) -> Digraph {
    gen_random_min_semidegree(n, 0, seed, Some(p)).unwrap()
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    (0u32..1 << n).filter(move |m| m.count_ones() as usize == k)
}

fn mask_set(n: usize, m: u32) -> VertexSet {
    VertexSet::from_indices(n, (0..n).filter(|&v| m >> v & 1 == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn enumerated_tuples_satisfy_their_arcs(n in 6usize..12, p in 0.4f64..0.95, seed in any::<u64>()) {
        let d = random(n, p, seed);
        let (x, y) = (0, 1);
        let absorbers = enumerate_absorbers(&d, x, y, None);
        prop_assert_eq!(absorbers.len() as u64, count_absorbers(&d, x, y));
        for t in &absorbers {
            let vs = [t.a, t.b, t.c, t.d, x, y];
            prop_assert!((0..6).all(|i| (i + 1..6).all(|j| vs[i] != vs[j])));
            for (u, v) in [(t.a, t.b), (t.c, t.b), (t.c, t.d), (t.a, x), (t.c, x), (y, t.b), (y, t.d)] {
                prop_assert!(d.has_arc(u, v));
            }
        }
        let connectors = enumerate_connectors(&d, x, y, None);
        prop_assert_eq!(connectors.len() as u64, count_connectors(&d, x, y));
        for c in &connectors {
            prop_assert!(c.a != c.b && ![c.a, c.b].contains(&x) && ![c.a, c.b].contains(&y));
            prop_assert!(d.has_arc(c.a, x) && d.has_arc(c.a, c.b) && d.has_arc(y, c.b));
        }
    }

    #[test]
    fn absorbing_keeps_ends_and_properness(n in 10usize..=40, ell in 1usize..=6, seed in any::<u64>()) {
        prop_assume!(6 * ell - 2 <= n);
        let d = Digraph::complete(n);
        let ap = build_absorbing_path(&d, ell, seed).unwrap();
        let mut free: Vec<usize> = d.vertices().filter(|v| !ap.path.vertices.contains(v)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        free.shuffle(&mut rng);
        let pairs = (seed as usize) % (ell.min(free.len() / 2) + 1);
        let w = VertexSet::from_indices(n, free[..2 * pairs].iter().copied());
        let p = absorb(&d, &ap, &w).unwrap();
        prop_assert!(verify_walk(&d, &p, Requirements::PROPER_ADP).is_ok());
        prop_assert_eq!(p.first(), ap.path.first());
        prop_assert_eq!(p.last(), ap.path.last());
        prop_assert_eq!(p.len(), ap.path.len() + 2 * pairs);
    }

    #[test]
    fn maxcut_degree_floors(n in 8usize..30, p in 0.2f64..0.9, c in 0.05f64..0.5, seed in any::<u64>()) {
        let d = random(n, p, seed);
        let mut order: Vec<usize> = d.vertices().collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let x = VertexSet::from_indices(n, order[..n * 2 / 3].iter().copied());
        let y = VertexSet::from_indices(n, order[n / 3..].iter().copied());
        if let Ok((xp, yp)) = maxcut_partition(&d, &x, &y, c) {
            prop_assert!(!xp.intersects(&yp));
            prop_assert!(xp.is_subset(&x) && yp.is_subset(&y));
            for v in xp.iter() {
                prop_assert!(d.out_degree_in(v, &yp) as f64 >= c / 8.0 * y.len() as f64 - 1e-9);
            }
            for v in yp.iter() {
                prop_assert!(d.in_degree_in(v, &xp) as f64 >= c / 8.0 * x.len() as f64 - 1e-9);
            }
        }
    }

    #[test]
    fn star_packing_is_disjoint_maximal_and_above_floor(n in 20usize..=60, p in 0.05f64..0.3, seed in any::<u64>()) {
        let d = random(n, p, seed);
        let min_out = d.vertices().map(|v| d.out_degree(v)).min().unwrap();
        prop_assume!(min_out >= 2 && 3 * d.max_in_degree() <= n);
        let packing = two_in_star_packing(&d).unwrap();
        let floor = star_bound(min_out, d.max_in_degree(), n).ceil().max(0.0) as usize;
        prop_assert!(packing.stars.len() >= floor);
        let mut used = VertexSet::new(n);
        for &(c, a, b) in &packing.stars {
            prop_assert!(d.has_arc(a, c) && d.has_arc(b, c));
            for v in [c, a, b] {
                prop_assert!(used.insert(v));
            }
        }
        for (u, v) in packing.edges {
            prop_assert!(d.has_arc(u, v));
            prop_assert!(used.insert(u) && used.insert(v));
        }
        let free = used.complement();
        for v in free.iter() {
            prop_assert!(d.in_nbrs(v).intersection_len(&free) < 2);
        }
    }

    #[test]
    fn pipeline_claims_are_backed(n in 4usize..=14, p in 0.3f64..0.9, seed in any::<u64>()) {
        let d = random(n, p, seed);
        let r = heuristic_adhc(&d, &PipelineConfig { retries: 3, ..PipelineConfig::default() }, seed);
        let det = &r.deterministic;
        match det.outcome {
            Outcome::Adhc => {
                let w = det.certificate.as_ref().unwrap();
                prop_assert!(verify_walk(&d, w, Requirements::ADHC).is_ok());
            }
            Outcome::AbsentProven => prop_assert_eq!(det.route, Some(Route::Exact)),
            _ => prop_assert!(det.certificate.is_none()),
        }
    }
}

/// Every way to delete at most `budget` vertices from a non-extremal digraph
/// leaves it non-extremal at the weaker parameter.
#[test]
fn extremality_is_robust_under_deletion() {
    let mut checked = 0;
    for (alpha, lambda) in [(0.3, 0.15), (0.4, 0.3)] {
        for (i, n) in [8usize, 10, 12, 14].into_iter().cycle().take(24).enumerate() {
            let d = random(n, 0.45 + 0.02 * i as f64, i as u64);
            let base = extremal_witness(&d, alpha, WitnessMode::Exact, 0).unwrap();
            if base.witness.is_some() {
                continue;
            }
            let budget = (lambda * n as f64 / 2.0 + 1e-9).floor() as usize;
            for k in 1..=budget {
                for m in subsets_of_size(n, k) {
                    let (rest, _) = d.remove_vertices(&mask_set(n, m));
                    let after = extremal_witness(&rest, alpha - lambda, WitnessMode::Exact, 0).unwrap();
                    assert!(after.witness.is_none(), "N={n} alpha={alpha} deleting {m:b} exposes {:?}", after.witness);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

/// Non-extremal digraphs have many arcs from every large set to every large
/// set. For fixed `A` the sparsest `B` takes the vertices with fewest
/// in-neighbours in `A`, so only `A` needs enumerating.
#[test]
fn non_extremal_pairs_meet_the_edge_floor() {
    let alpha = 0.3;
    let mut checked = 0;
    for (i, n) in [8usize, 10, 12, 14].into_iter().cycle().take(16).enumerate() {
        let d = random(n, 0.5 + 0.02 * i as f64, 100 + i as u64);
        if extremal_witness(&d, alpha, WitnessMode::Exact, 0).unwrap().witness.is_some() {
            continue;
        }
        let half = n as f64 / 2.0;
        let lo = ((1.0 - alpha / 2.0) * half - 1e-9).ceil() as usize;
        let hi = ((1.0 + alpha / 2.0) * half + 1e-9).floor() as usize;
        if lo > hi {
            continue;
        }
        let floor = alpha * alpha / 2.0 * half * half;
        for m in subsets_of_size(n, lo) {
            let a = mask_set(n, m);
            let mut ins: Vec<usize> = d.vertices().map(|v| d.in_degree_in(v, &a)).collect();
            ins.sort_unstable();
            let least: usize = ins[..lo].iter().sum();
            assert!(least as f64 >= floor, "N={n} A={m:b}: {least} arcs < {floor}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn connector_reservoir_hits_every_target() {
    let cases = [40usize, 48, 56].into_iter().flat_map(|n| [0.0, 0.03, 0.05].into_iter().flat_map(move |p| (0..3u64).map(move |s| (n, p, s))));
    for (n, drop, seed) in cases {
        let full = Digraph::complete(n);
        let d = if drop > 0.0 {
            let thin = random(n, drop, seed);
            full.without_arcs(thin.arcs().collect::<Vec<_>>())
        } else {
            full
        };
        let targets: Vec<(usize, usize)> = d.vertices().flat_map(|x| d.vertices().filter(move |&y| y != x).map(move |y| (x, y))).collect();
        let lists: Vec<Vec<[usize; 2]>> = targets
            .iter()
            .map(|&(x, y)| enumerate_connectors(&d, x, y, None).into_iter().map(|c| [c.a, c.b]).collect())
            .collect();
        let family = select_disjoint_family(n, &lists, 0.2, 0.01, seed);
        let min_hit = family.hits.iter().copied().min().unwrap();
        assert!(min_hit > 0, "N={n} drop={drop} seed={seed}: a target has no connector in the reservoir");
    }
}

#[test]
fn search_is_reproducible_across_thread_counts() {
    let cfg = SolverConfig::default();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| counterexample_search(8, 60, 3, 17, &cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
    assert_eq!(one.with_adhc + one.exceptions + one.undecided + one.hits.len() as u64, 60);
}

/// A single random bipartition succeeds more often on denser digraphs.
#[test]
fn route_one_success_grows_with_density() {
    let n = 200;
    let seeds = 50;
    let cfg = PipelineConfig { retries: 1, ..PipelineConfig::default() };
    let rates: Vec<f64> = [0.6, 0.7, 0.8, 0.9]
        .iter()
        .map(|&p| {
            let wins = (0..seeds)
                .filter(|&s| {
                    let d = random(n, p, s);
                    heuristic_adhc(&d, &cfg, s).deterministic.route == Some(Route::RandomSplit)
                })
                .count();
            wins as f64 / seeds as f64
        })
        .collect();
    for w in rates.windows(2) {
        let se = |r: f64| (r * (1.0 - r) / seeds as f64).sqrt();
        assert!(w[1] + 2.0 * (se(w[0]) + se(w[1])) >= w[0], "rates {rates:?}");
    }
}
