//! Edge-to-endpoint assignment for a fixed set of selected vertices.
//!
//! Given `S`, every edge must point into an endpoint in `S` without any vertex
//! exceeding its capacity. Edges with exactly one endpoint in `S` are forced;
//! the rest form a bipartite b-matching solved as a unit-capacity flow
//! `source -> edge -> endpoint -> sink` where `endpoint -> sink` carries the
//! capacity left after the forced edges.

use crate::flow::Dinic;
use crate::graph::{CapacitatedGraph, Orientation, Vertex};

/// Returns an orientation with in-degree 0 outside `in_s` and capacities
/// respected inside, or `None` if none exists.
pub fn assign_edges(g: &CapacitatedGraph, in_s: &[bool]) -> Option<Orientation> {
    assert_eq!(in_s.len(), g.n());
    let mut load = vec![0usize; g.n()];
    let mut heads = vec![usize::MAX; g.m()];
    let mut flexible = Vec::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        match (in_s[a], in_s[b]) {
            (false, false) => return None,
            (true, false) => {
                heads[e] = a;
                load[a] += 1;
            }
            (false, true) => {
                heads[e] = b;
                load[b] += 1;
            }
            (true, true) => flexible.push(e),
        }
    }
    if (0..g.n()).any(|v| load[v] > g.capacity(v)) {
        return None;
    }
    if !flexible.is_empty() {
        // node layout: 0 = source, 1 = sink, then one node per flexible edge,
        // then one node per endpoint touched by a flexible edge
        let mut vnode = vec![usize::MAX; g.n()];
        let mut touched = Vec::new();
        for &e in &flexible {
            let (a, b) = g.edge(e);
            for v in [a, b] {
                if vnode[v] == usize::MAX {
                    vnode[v] = 2 + flexible.len() + touched.len();
                    touched.push(v);
                }
            }
        }
        let mut net = Dinic::new(2 + flexible.len() + touched.len());
        let mut handles = Vec::with_capacity(flexible.len());
        for (i, &e) in flexible.iter().enumerate() {
            let (a, _) = g.edge(e);
            net.add_edge(0, 2 + i, 1);
            let to_a = net.add_edge(2 + i, vnode[a], 1);
            net.add_edge(2 + i, vnode[g.other_end(e, a)], 1);
            handles.push(to_a);
        }
        for &v in &touched {
            let spare = g.capacity(v) - load[v];
            if spare > 0 {
                net.add_edge(vnode[v], 1, spare);
            }
        }
        if net.max_flow(0, 1) < flexible.len() {
            return None;
        }
        for (i, &e) in flexible.iter().enumerate() {
            let (a, b) = g.edge(e);
            heads[e] = if net.flow_on(handles[i]) == 1 { a } else { b };
        }
    }
    Some(Orientation::from_heads(g, heads).expect("assignment covers every edge"))
}

/// [`assign_edges`] with the selection given as a vertex list.
pub fn assign_edges_to(g: &CapacitatedGraph, s: &[Vertex]) -> Option<Orientation> {
    let mut in_s = vec![false; g.n()];
    for &v in s {
        in_s[v] = true;
    }
    assign_edges(g, &in_s)
}
