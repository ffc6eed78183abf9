//! Constructive versions of the structural lemmas behind the extremal and
//! non-extremal cases: dense-pair partitioning, absorbers and connectors,
//! 2-in-star packings, extremal witnesses, and the reduction of an extremal
//! digraph to two bipartite Hamiltonian path problems.
//!
//! The asymptotic constants become explicit [`Params`]. Engines measure the
//! quantities the lemmas bound instead of assuming them.

pub mod absorbers;
pub mod extremal;
pub mod maxcut;
pub mod splitting;
pub mod stars;

pub use absorbers::{
    absorb, build_absorbing_path, census, count_absorbers, count_connectors, enumerate_absorbers,
    enumerate_connectors, select_disjoint_family, AbsorberTuple, AbsorbingPath, CensusKind, ConnectorPair, Family,
    PairCount,
};
pub use extremal::{extremal_witness, preprocess, ExtremalWitness, Partition5, WitnessMode, WitnessSearch};
pub use maxcut::{maxcut_partition, proper_adp_from_dense_pair};
pub use splitting::{
    candidate_targets, connecting_direction, distribute_z, edge_preassignment, find_connecting_edges,
    find_connecting_edges_all, good_splitting, reduce_to_adhc, ConnectingEdges, EdgeShape, Parts4,
    Slot, SizeTargets, Splitting, SplittingReport,
};
pub use stars::{star_bound, two_in_star_packing, StarPacking};

use crate::solver::SolveError;
use serde::Serialize;
use thiserror::Error;

/// The constant hierarchy as explicit configuration.
///
/// `alpha` is the extremality parameter, `gamma` the splitting degree floor,
/// `beta` the splitting balance slack, `lambda` the deletion budget in the
/// robustness check and `c` the hit floor of disjoint-family selection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub c: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            alpha: 0.3,
            beta: 0.1,
            gamma: 0.05,
            lambda: 0.15,
            c: 0.01,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<(), LemmaError> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("lambda", self.lambda),
            ("c", self.c),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(LemmaError::Precondition(format!("{name} = {v} is not in (0, 1)")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum LemmaError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("ran out of {what} while building link {index}")]
    SupplyExhausted { what: &'static str, index: usize },
    #[error("{pairs} pairs to absorb but only {capacity} registry entries")]
    Capacity { pairs: usize, capacity: usize },
    #[error("W has odd size {0}")]
    OddSet(usize),
    #[error("no free registry entry absorbs the pair ({0}, {1})")]
    NotAbsorbable(usize, usize),
    #[error("no two independent arcs")]
    NoIndependentArcs,
    #[error("vertex {0} belongs to no distribution class")]
    Unplaced(usize),
    #[error("infeasible targets: {0}")]
    Infeasible(String),
    #[error("no good splitting after {0} attempts")]
    RetriesExhausted(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Half the order; the scale of all degree thresholds in the extremal case.
pub(crate) fn half(order: usize) -> f64 {
    order as f64 / 2.0
}

/// Float comparisons against thresholds tolerate this much rounding.
pub(crate) const EPS: f64 = 1e-9;
