pub mod bipartite;
pub mod bitset;
pub mod digraph;
pub mod families;
pub mod io;
pub mod lemmas;
pub mod pipeline;
pub mod solver;
pub mod walk;

pub use bipartite::{bipartite_view, BipartiteGraph};
pub use bitset::VertexSet;
pub use digraph::{Digraph, GraphError, SemiDegrees};
pub use walk::{OrientedWalk, Requirements, TwoFactorCert, Violation, WalkKind};
