//! Exact and heuristic search for Hamiltonian anti-directed structures.
//!
//! Up to `exact_cutoff` vertices the ADHC, ADHP, proper-ADP, 2-factor and
//! directed-HC questions are answered by a subset dynamic program indexed by
//! position parity (see [`dp`]). Above the cutoff, ADHC falls back to
//! branching over source/sink roles with a bipartite Hamiltonicity check at
//! each leaf. Every search charges a node budget; running out is reported as
//! [`SolveError::BudgetExceeded`], never as a negative answer.

mod bip;
mod dp;
mod embed;
mod naive;
mod role;

pub use bip::moon_moser_condition;
pub use naive::solve_adhc_naive;

use crate::bipartite::BipartiteGraph;
use crate::digraph::Digraph;
use crate::walk::{OrientedWalk, TwoFactorCert, WalkKind};
use dp::{Orientation, PathTable, Start};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Largest order the subset tables are ever built for, whatever the cutoff.
pub const DP_HARD_LIMIT: usize = 28;

/// The 2-factor search keeps three tables of `2^N` words.
pub const TWO_FACTOR_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchRule {
    /// Fewest role options first, ties by index.
    #[default]
    MinDomain,
    Index,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Subset DP within the cutoff, role branching above it.
    #[default]
    Auto,
    SubsetDp,
    RoleBranch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolverConfig {
    pub node_limit: u64,
    pub exact_cutoff: usize,
    pub branch_rule: BranchRule,
    /// Rotation-extension restarts before exhaustive search engages.
    pub restarts: usize,
    pub strategy: Strategy,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_limit: 100_000_000,
            exact_cutoff: 24,
            branch_rule: BranchRule::MinDomain,
            restarts: 20,
            strategy: Strategy::Auto,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("search budget of {limit} nodes exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("node limit must be positive")]
    ZeroBudget,
    #[error("{0}")]
    Precondition(String),
    #[error("exact {what} search is limited to {limit} vertices, got {order}")]
    TooLarge { what: &'static str, order: usize, limit: usize },
}

/// Counts search nodes against a limit.
#[derive(Clone, Debug)]
pub struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { used: 0, limit }
    }

    #[inline]
    pub fn tick(&mut self, nodes: u64) -> Result<(), SolveError> {
        self.used += nodes;
        if self.used > self.limit {
            Err(SolveError::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

/// A solver instance: configuration, node counter and private RNG.
pub struct Solver {
    cfg: SolverConfig,
    budget: Budget,
    rng: ChaCha8Rng,
}

impl Solver {
    pub fn new(cfg: SolverConfig) -> Result<Self, SolveError> {
        if cfg.node_limit == 0 {
            return Err(SolveError::ZeroBudget);
        }
        Ok(Solver {
            budget: Budget::new(cfg.node_limit),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Search nodes charged so far.
    pub fn nodes(&self) -> u64 {
        self.budget.used()
    }

    fn use_dp(&self, order: usize) -> bool {
        match self.cfg.strategy {
            Strategy::Auto => order <= self.cfg.exact_cutoff.min(DP_HARD_LIMIT),
            Strategy::SubsetDp => order <= DP_HARD_LIMIT,
            Strategy::RoleBranch => false,
        }
    }

    /// Anti-directed Hamiltonian cycle, or `None` if there is none.
    pub fn adhc(&mut self, d: &Digraph) -> Result<Option<OrientedWalk>, SolveError> {
        let n = d.order();
        if n < 4 || n % 2 == 1 || !role_counts_feasible(d) {
            return Ok(None);
        }
        if self.use_dp(n) {
            return dp::adhc(d, &mut self.budget);
        }
        if self.cfg.strategy == Strategy::SubsetDp {
            return Err(SolveError::TooLarge {
                what: "subset-DP",
                order: n,
                limit: DP_HARD_LIMIT,
            });
        }
        role::adhc(d, &self.cfg, &mut self.budget, &mut self.rng)
    }

    /// Anti-directed Hamiltonian path.
    pub fn adhp(&mut self, d: &Digraph) -> Result<Option<OrientedWalk>, SolveError> {
        let n = d.order();
        if n == 0 {
            return Ok(Some(OrientedWalk::empty_path()));
        }
        if n > DP_HARD_LIMIT {
            return Err(SolveError::TooLarge {
                what: "ADHP",
                order: n,
                limit: DP_HARD_LIMIT,
            });
        }
        for first_source in [true, false] {
            let t = PathTable::build(d, Orientation::Alternating { first_source }, Start::Any, &mut self.budget)?;
            let ends = t.ends(t.full());
            if ends != 0 {
                let path = t.trace(t.full(), ends.trailing_zeros() as usize);
                return Ok(Some(OrientedWalk::alternating(path, first_source, WalkKind::Path)));
            }
        }
        Ok(None)
    }

    /// A proper ADP of maximum length; the empty path if `d` has no arcs.
    pub fn longest_proper_adp(&mut self, d: &Digraph) -> Result<OrientedWalk, SolveError> {
        if self.use_dp(d.order()) {
            dp::longest_proper_adp(d, &mut self.budget)
        } else {
            naive::longest_proper_adp_dfs(d, &mut self.budget)
        }
    }

    /// An anti-directed 2-factor with at most `max_cycles` cycles, preferring
    /// fewer cycles.
    pub fn anti_two_factor(&mut self, d: &Digraph, max_cycles: usize) -> Result<Option<TwoFactorCert>, SolveError> {
        let n = d.order();
        if n % 2 == 1 {
            return Ok(None);
        }
        if n == 0 {
            return Ok(Some(TwoFactorCert { cycles: Vec::new() }));
        }
        if max_cycles == 0 {
            return Ok(None);
        }
        if max_cycles == 1 {
            return Ok(self.adhc(d)?.map(|c| TwoFactorCert { cycles: vec![c] }));
        }
        if n > TWO_FACTOR_LIMIT {
            return Err(SolveError::TooLarge {
                what: "2-factor",
                order: n,
                limit: TWO_FACTOR_LIMIT,
            });
        }
        dp::anti_two_factor(d, max_cycles, &mut self.budget)
    }

    /// Directed Hamiltonian cycle.
    pub fn directed_hc(&mut self, d: &Digraph) -> Result<Option<OrientedWalk>, SolveError> {
        let n = d.order();
        if n < 3 || d.semi_degrees().min_semi == 0 {
            return Ok(None);
        }
        if self.use_dp(n) {
            dp::directed_hc(d, &mut self.budget)
        } else {
            naive::directed_hc_dfs(d, &mut self.budget)
        }
    }

    /// Hamiltonian cycle of a bipartite graph, as a vertex sequence.
    pub fn bip_ham_cycle(&mut self, g: &BipartiteGraph) -> Result<Option<Vec<usize>>, SolveError> {
        bip::ham_cycle(g, self.cfg.restarts, true, &mut self.budget, &mut self.rng)
    }

    /// Rotation-extension only; `None` means the heuristic gave up.
    pub fn bip_ham_cycle_heuristic(&mut self, g: &BipartiteGraph) -> Option<Vec<usize>> {
        bip::ham_cycle(g, self.cfg.restarts, false, &mut self.budget, &mut self.rng)
            .ok()
            .flatten()
    }

    /// Hamiltonian path from `a` to `b`.
    ///
    /// With equal sides the ends must lie on opposite sides; with one side
    /// larger by one, both ends must lie on the larger side.
    pub fn bip_ham_path(&mut self, g: &BipartiteGraph, a: usize, b: usize) -> Result<Option<Vec<usize>>, SolveError> {
        bip::ham_path(g, a, b, self.cfg.restarts, &mut self.budget, &mut self.rng)
    }

    /// An injective map `f` with `(f(u), f(v))` a host arc for every pattern
    /// arc `(u, v)`; `f[u]` is the image of pattern vertex `u`.
    pub fn embed_spanning(&mut self, host: &Digraph, pattern: &Digraph) -> Result<Option<Vec<usize>>, SolveError> {
        if host.order() != pattern.order() {
            return Err(SolveError::Precondition(format!(
                "host has {} vertices but pattern has {}",
                host.order(),
                pattern.order()
            )));
        }
        embed::embed(host, pattern, &mut self.budget)
    }
}

/// Every vertex must be able to play one role and both roles must be
/// fillable by half the vertices.
fn role_counts_feasible(d: &Digraph) -> bool {
    let n = d.order();
    let mut can_source = 0;
    let mut can_sink = 0;
    for v in d.vertices() {
        let s = d.out_degree(v) >= 2;
        let t = d.in_degree(v) >= 2;
        if !s && !t {
            return false;
        }
        can_source += s as usize;
        can_sink += t as usize;
    }
    can_source >= n / 2 && can_sink >= n / 2
}

fn run<T>(cfg: &SolverConfig, f: impl FnOnce(&mut Solver) -> Result<T, SolveError>) -> Result<T, SolveError> {
    f(&mut Solver::new(cfg.clone())?)
}

pub fn solve_adhc(d: &Digraph, cfg: &SolverConfig) -> Result<Option<OrientedWalk>, SolveError> {
    run(cfg, |s| s.adhc(d))
}

pub fn solve_adhp(d: &Digraph, cfg: &SolverConfig) -> Result<Option<OrientedWalk>, SolveError> {
    run(cfg, |s| s.adhp(d))
}

pub fn longest_proper_adp(d: &Digraph, cfg: &SolverConfig) -> Result<OrientedWalk, SolveError> {
    run(cfg, |s| s.longest_proper_adp(d))
}

pub fn solve_anti_two_factor(d: &Digraph, max_cycles: usize, cfg: &SolverConfig) -> Result<Option<TwoFactorCert>, SolveError> {
    run(cfg, |s| s.anti_two_factor(d, max_cycles))
}

pub fn solve_directed_hc(d: &Digraph, cfg: &SolverConfig) -> Result<Option<OrientedWalk>, SolveError> {
    run(cfg, |s| s.directed_hc(d))
}

pub fn bip_ham_cycle(g: &BipartiteGraph, cfg: &SolverConfig) -> Result<Option<Vec<usize>>, SolveError> {
    run(cfg, |s| s.bip_ham_cycle(g))
}

pub fn bip_ham_path(g: &BipartiteGraph, a: usize, b: usize, cfg: &SolverConfig) -> Result<Option<Vec<usize>>, SolveError> {
    run(cfg, |s| s.bip_ham_path(g, a, b))
}

pub fn embed_spanning(host: &Digraph, pattern: &Digraph, cfg: &SolverConfig) -> Result<Option<Vec<usize>>, SolveError> {
    run(cfg, |s| s.embed_spanning(host, pattern))
}
