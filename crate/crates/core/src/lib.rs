//! Exact solvers, oracles and hardness-reduction generators for Capacitated
//! Vertex Cover in its orientation formulation.

pub mod assign;
pub mod bench;
pub mod cutwidth;
pub mod detecting;
pub mod error;
pub mod fes;
pub mod gen;
pub mod flow;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod reductions;
pub mod subsets;
pub mod vi;

pub use error::{CvcError, Result};
pub use graph::{verify_orientation, CapacitatedGraph, EdgeId, FeasReport, Orientation, Vertex};
