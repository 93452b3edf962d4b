//! Generators for the hardness constructions, each producing a CVC instance
//! with the canonical-solution metadata and side certificates needed to
//! check it.

mod builder;
pub mod cnf;
pub mod cw;
pub mod mcc;
pub mod sat_natural;
pub mod smc;
pub mod td;

pub use cnf::{group_formula, verify_grouping, Cnf1in3, Grouping, GroupingMode, Literal};
pub use cw::{reduce_sat_cw, verify_cw_expression, CliquewidthExpression, ExprOp, MAX_LABELS};
pub use mcc::MccInstance;
pub use sat_natural::{default_families, reduce_sat_natural};
pub use smc::{reduce_smc, SmcInstance};
pub use td::{reduce_mcc_td, verify_td_witness, TdLayout, TreedepthWitness};

use crate::detecting::DetectingFamily;
use crate::graph::CapacitatedGraph;
use crate::oracle::ChoiceGroups;

/// A reduced instance. The graph carries the budget; `demand[v]` is
/// `deg(v) - capacity(v)` as intended by the construction.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub graph: CapacitatedGraph,
    pub budget: usize,
    pub meta: ChoiceGroups,
    pub demand: Vec<usize>,
    pub expression: Option<CliquewidthExpression>,
    pub witness: Option<TreedepthWitness>,
    pub families: Vec<DetectingFamily>,
}

/// Recomputes degrees from the edge list and checks `capacity = degree -
/// demand` with the demand never above the degree. Returns the first
/// offending vertex.
pub fn check_demands(g: &CapacitatedGraph, demand: &[usize]) -> Result<(), usize> {
    let mut deg = vec![0usize; g.n()];
    for &(u, v) in g.edges() {
        deg[u] += 1;
        deg[v] += 1;
    }
    for v in 0..g.n() {
        if demand[v] > deg[v] || g.capacity(v) != deg[v] - demand[v] {
            return Err(v);
        }
    }
    Ok(())
}
