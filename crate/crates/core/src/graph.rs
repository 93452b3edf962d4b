//! Capacitated graphs and edge orientations.
//!
//! Vertices are `0..n` internally; every file format and every user-facing
//! message uses 1-based ids. Edges are stored as `(u, v)` with `u < v` in
//! insertion order, and an edge id is its index in that order.

use crate::error::{CvcError, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// A simple undirected graph with a capacity on every vertex and an optional
/// decision budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacitatedGraph {
    capacity: Vec<usize>,
    edges: Vec<(Vertex, Vertex)>,
    // neighbor lists sorted by neighbor id
    adj: Vec<Vec<(Vertex, EdgeId)>>,
    budget: Option<usize>,
}

impl CapacitatedGraph {
    /// Builds a graph, rejecting loops, parallel edges and out-of-range ids.
    pub fn new<I>(capacity: Vec<usize>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let n = capacity.len();
        let mut adj: Vec<Vec<(Vertex, EdgeId)>> = vec![Vec::new(); n];
        let mut stored = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(CvcError::structural(format!(
                    "edge {{{}, {}}} references a vertex outside 1..{}",
                    u + 1,
                    v + 1,
                    n
                )));
            }
            if u == v {
                return Err(CvcError::structural(format!("loop at vertex {}", u + 1)));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            let id = stored.len();
            stored.push((a, b));
            adj[a].push((b, id));
            adj[b].push((a, id));
        }
        for list in &mut adj {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
                let (a, b) = stored[w[0].1];
                return Err(CvcError::structural(format!(
                    "duplicate edge {{{}, {}}}",
                    a + 1,
                    b + 1
                )));
            }
        }
        Ok(CapacitatedGraph {
            capacity,
            edges: stored,
            adj,
            budget: None,
        })
    }

    pub fn with_budget(mut self, budget: Option<usize>) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_capacities(mut self, capacity: Vec<usize>) -> Self {
        assert_eq!(capacity.len(), self.capacity.len());
        self.capacity = capacity;
        self
    }

    pub fn n(&self) -> usize {
        self.capacity.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    pub fn capacity(&self, v: Vertex) -> usize {
        self.capacity[v]
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacity
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// `(neighbor, edge id)` pairs in increasing neighbor order.
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v]
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Clamps every capacity to the vertex degree (isolated vertices get 0).
    /// In-degree never exceeds degree, so this changes no answer.
    pub fn normalize_capacities(&self) -> CapacitatedGraph {
        let capacity = (0..self.n())
            .map(|v| self.capacity[v].min(self.degree(v)))
            .collect();
        self.clone().with_capacities(capacity)
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.n()).all(|v| self.capacity[v] <= self.degree(v))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        self.components_avoiding(&vec![false; self.n()])
    }

    /// Components of the graph after deleting the vertices flagged in `removed`.
    pub fn components_avoiding(&self, removed: &[bool]) -> Vec<Vec<Vertex>> {
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for &(w, _) in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// One arc per edge: `heads[e]` is the endpoint edge `e` points into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    heads: Vec<Vertex>,
}

impl Orientation {
    pub fn from_heads(g: &CapacitatedGraph, heads: Vec<Vertex>) -> Result<Self> {
        let o = Orientation { heads };
        o.check_against(g)?;
        Ok(o)
    }

    /// Builds an orientation from `(tail, head)` arcs in any order.
    pub fn from_arcs(g: &CapacitatedGraph, arcs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut heads = vec![usize::MAX; g.m()];
        for &(t, h) in arcs {
            let e = g.edge_id(t, h).ok_or_else(|| {
                CvcError::structural(format!("arc ({}, {}) is not an edge", t + 1, h + 1))
            })?;
            if heads[e] != usize::MAX {
                return Err(CvcError::structural(format!(
                    "edge {{{}, {}}} oriented twice",
                    t + 1,
                    h + 1
                )));
            }
            heads[e] = h;
        }
        if let Some(e) = heads.iter().position(|&h| h == usize::MAX) {
            let (a, b) = g.edge(e);
            return Err(CvcError::structural(format!(
                "edge {{{}, {}}} has no arc",
                a + 1,
                b + 1
            )));
        }
        Ok(Orientation { heads })
    }

    fn check_against(&self, g: &CapacitatedGraph) -> Result<()> {
        if self.heads.len() != g.m() {
            return Err(CvcError::structural(format!(
                "orientation has {} arcs but the graph has {} edges",
                self.heads.len(),
                g.m()
            )));
        }
        for (e, &h) in self.heads.iter().enumerate() {
            let (a, b) = g.edge(e);
            if h != a && h != b {
                return Err(CvcError::structural(format!(
                    "arc of edge {{{}, {}}} points into {}",
                    a + 1,
                    b + 1,
                    h + 1
                )));
            }
        }
        Ok(())
    }

    pub fn head(&self, e: EdgeId) -> Vertex {
        self.heads[e]
    }

    pub fn heads(&self) -> &[Vertex] {
        &self.heads
    }

    pub fn arcs<'a>(
        &'a self,
        g: &'a CapacitatedGraph,
    ) -> impl Iterator<Item = (Vertex, Vertex)> + 'a {
        self.heads
            .iter()
            .enumerate()
            .map(move |(e, &h)| (g.other_end(e, h), h))
    }

    pub fn indegrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for &h in &self.heads {
            deg[h] += 1;
        }
        deg
    }

    /// Number of vertices with positive in-degree.
    pub fn size(&self, n: usize) -> usize {
        self.indegrees(n).iter().filter(|&&d| d > 0).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: Vertex,
    pub indeg: usize,
    pub capacity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasReport {
    pub feasible: bool,
    pub size: usize,
    pub violations: Vec<Violation>,
}

pub fn verify_orientation(g: &CapacitatedGraph, o: &Orientation) -> Result<FeasReport> {
    o.check_against(g)?;
    let indeg = o.indegrees(g.n());
    let violations: Vec<Violation> = (0..g.n())
        .filter(|&v| indeg[v] > g.capacity(v))
        .map(|v| Violation {
            vertex: v,
            indeg: indeg[v],
            capacity: g.capacity(v),
        })
        .collect();
    Ok(FeasReport {
        feasible: violations.is_empty(),
        size: indeg.iter().filter(|&&d| d > 0).count(),
        violations,
    })
}
