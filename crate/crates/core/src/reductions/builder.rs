//! Incremental graph construction where capacities follow from demands.

use crate::error::Result;
use crate::graph::{CapacitatedGraph, Vertex};

/// Vertices carry a demand; the capacity of `v` becomes `deg(v) - demand(v)`
/// once all edges are in.
#[derive(Clone, Debug, Default)]
pub(crate) struct GraphBuilder {
    pub demand: Vec<usize>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl GraphBuilder {
    pub fn vertex(&mut self, demand: usize) -> Vertex {
        self.demand.push(demand);
        self.demand.len() - 1
    }

    pub fn edge(&mut self, u: Vertex, v: Vertex) {
        self.edges.push((u, v));
    }

    /// Attaches `count` pendant leaves of capacity 0 to `v`. Their edges must
    /// point into `v`, so `v` is selected and its demand still has to be met
    /// by non-leaf edges. A leaf of capacity 1 could absorb one unit of that
    /// demand at the price of one selected vertex, which breaks the SMC
    /// reduction when an element lies in fewer than `b` sets.
    pub fn leaves(&mut self, v: Vertex, count: usize) -> std::ops::Range<Vertex> {
        let start = self.demand.len();
        for _ in 0..count {
            let leaf = self.vertex(1);
            self.edge(v, leaf);
        }
        start..self.demand.len()
    }

    /// Builds the graph. A demand above the degree yields capacity 0.
    pub fn finish(self, budget: usize) -> Result<(CapacitatedGraph, Vec<usize>)> {
        let mut deg = vec![0usize; self.demand.len()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let capacity = deg
            .iter()
            .zip(&self.demand)
            .map(|(d, x)| d.saturating_sub(*x))
            .collect();
        let g = CapacitatedGraph::new(capacity, self.edges)?.with_budget(Some(budget));
        Ok((g, self.demand))
    }
}
