//! Exponential only in the feedback edge number: fix the direction of every
//! edge outside a spanning forest, then solve the forest exactly.

use rayon::prelude::*;

use crate::error::{CvcError, Result};
use crate::graph::{CapacitatedGraph, EdgeId, Orientation, Vertex};
use crate::oracle::Solution;

pub const DEFAULT_FES_CAP: usize = 22;

/// Edges outside the BFS spanning forest rooted at the smallest id of each
/// component, neighbors taken in id order. Sorted by edge id.
pub fn feedback_edge_set(g: &CapacitatedGraph) -> Vec<EdgeId> {
    let mut in_tree = vec![false; g.m()];
    let mut seen = vec![false; g.n()];
    let mut queue = Vec::with_capacity(g.n());
    for root in 0..g.n() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.clear();
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &(w, e) in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    in_tree[e] = true;
                    queue.push(w);
                }
            }
        }
    }
    (0..g.m()).filter(|&e| !in_tree[e]).collect()
}

/// A forest whose vertices already carry `preload` arcs from elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestInstance {
    pub capacity: Vec<usize>,
    pub edges: Vec<(Vertex, Vertex)>,
    pub preload: Vec<usize>,
}

impl ForestInstance {
    pub fn new(
        capacity: Vec<usize>,
        edges: Vec<(Vertex, Vertex)>,
        preload: Vec<usize>,
    ) -> Result<Self> {
        let n = capacity.len();
        if preload.len() != n {
            return Err(CvcError::structural("preload length differs from vertex count"));
        }
        // union-find rejects cycles and loops
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(CvcError::structural("forest edge out of range"));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(CvcError::structural("forest edges contain a cycle"));
            }
            parent[ra] = rb;
        }
        Ok(ForestInstance {
            capacity,
            edges,
            preload,
        })
    }

    pub fn n(&self) -> usize {
        self.capacity.len()
    }
}

/// Minimum size with the chosen head of every forest edge, parallel to
/// `ForestInstance::edges`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestSolution {
    pub size: usize,
    pub heads: Vec<Vertex>,
}

/// Best choice of which child edges point into a vertex.
///
/// `children[c]` holds the subtree cost when edge `c` points into the child
/// and when it points into this vertex, `None` meaning impossible. The
/// vertex already has `base` arcs and capacity `cap`, and costs 1 if it ends
/// with any arc. Returns the cost and, per child, whether its edge points
/// in. Children are taken greedily by ascending cost difference; ties go to
/// fewer inward edges, then to lower child index.
pub fn select_children(
    children: &[(Option<usize>, Option<usize>)],
    base: usize,
    cap: usize,
) -> Option<(usize, Vec<bool>)> {
    let mut inward = vec![false; children.len()];
    let mut total = 0usize;
    let mut forced_in = 0usize;
    let mut free: Vec<(isize, usize)> = Vec::new();
    for (c, &(out, inn)) in children.iter().enumerate() {
        match (out, inn) {
            (None, None) => return None,
            (None, Some(i)) => {
                inward[c] = true;
                forced_in += 1;
                total += i;
            }
            (Some(o), None) => total += o,
            (Some(o), Some(i)) => {
                total += o;
                free.push((i as isize - o as isize, c));
            }
        }
    }
    let fixed = base + forced_in;
    if fixed > cap {
        return None;
    }
    free.sort_unstable();
    let room = (cap - fixed).min(free.len());
    let mut best: Option<(isize, usize)> = None;
    let mut prefix = 0isize;
    for t in 0..=room {
        if t > 0 {
            prefix += free[t - 1].0;
        }
        let cost = prefix + isize::from(fixed + t > 0);
        if best.is_none_or(|(b, _)| cost < b) {
            best = Some((cost, t));
        }
    }
    let (extra, t) = best.expect("t = 0 always fits");
    for &(_, c) in &free[..t] {
        inward[c] = true;
    }
    Some(((total as isize + extra) as usize, inward))
}

/// Reference for [`select_children`] trying every subset of children.
pub fn select_children_exhaustive(
    children: &[(Option<usize>, Option<usize>)],
    base: usize,
    cap: usize,
) -> Option<usize> {
    assert!(children.len() < 24);
    (0..1u32 << children.len())
        .filter_map(|mask| {
            let t = mask.count_ones() as usize;
            if base + t > cap {
                return None;
            }
            let mut cost = usize::from(base + t > 0);
            for (c, &(out, inn)) in children.iter().enumerate() {
                cost += if mask >> c & 1 == 1 { inn? } else { out? };
            }
            Some(cost)
        })
        .min()
}

/// Exact minimum size for a forest with preloads, or `None` if infeasible.
///
/// Each tree is rooted at its smallest vertex and evaluated leaves first.
/// `cost[v][s]` is the best cost of the subtree at `v` when the edge to the
/// parent points into `v` (`s = 1`) or into the parent (`s = 0`).
pub fn forest_dp(fi: &ForestInstance) -> Option<ForestSolution> {
    let n = fi.n();
    if (0..n).any(|v| fi.preload[v] > fi.capacity[v]) {
        return None;
    }
    let mut adj: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in fi.edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    // BFS order and parent links
    let mut order = Vec::with_capacity(n);
    let mut parent: Vec<Option<(Vertex, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut roots = Vec::new();
    for r in 0..n {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        roots.push(r);
        let start = order.len();
        order.push(r);
        let mut head = start;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    order.push(w);
                }
            }
        }
    }
    let mut kids_of: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); n];
    for v in 0..n {
        if let Some((p, e)) = parent[v] {
            kids_of[p].push((v, e));
        }
    }

    type Choice = Option<(usize, Vec<bool>)>;
    let mut best: Vec<[Choice; 2]> = vec![[None, None]; n];
    for &v in order.iter().rev() {
        let kids: Vec<(Option<usize>, Option<usize>)> = kids_of[v]
            .iter()
            .map(|&(c, _)| {
                (
                    best[c][1].as_ref().map(|x| x.0),
                    best[c][0].as_ref().map(|x| x.0),
                )
            })
            .collect();
        for s in 0..2 {
            if s == 1 && parent[v].is_none() {
                continue;
            }
            best[v][s] = select_children(&kids, fi.preload[v] + s, fi.capacity[v]);
        }
    }

    let mut size = 0;
    for &r in &roots {
        size += best[r][0].as_ref()?.0;
    }
    let mut heads = vec![usize::MAX; fi.edges.len()];
    let mut state = vec![0usize; n];
    for &v in &order {
        let (_, inward) = best[v][state[v]].as_ref().expect("reachable state is feasible");
        for (&(c, e), &inn) in kids_of[v].iter().zip(inward) {
            if inn {
                heads[e] = v;
                state[c] = 0;
            } else {
                heads[e] = c;
                state[c] = 1;
            }
        }
    }
    Some(ForestSolution { size, heads })
}

/// Minimum-size feasible orientation by trying all `2^fes` directions of a
/// feedback edge set and solving each forest remainder.
pub fn solve_fes(g: &CapacitatedGraph, cap: usize) -> Result<Option<Solution>> {
    let g = g.normalize_capacities();
    let fes = feedback_edge_set(&g);
    CvcError::check_cap("feedback edge set size", fes.len(), cap)?;
    let mut is_fes = vec![false; g.m()];
    for &e in &fes {
        is_fes[e] = true;
    }
    let tree_ids: Vec<EdgeId> = (0..g.m()).filter(|&e| !is_fes[e]).collect();
    let base = ForestInstance {
        capacity: g.capacities().to_vec(),
        edges: tree_ids.iter().map(|&e| g.edge(e)).collect(),
        preload: vec![0; g.n()],
    };
    // bit t set: fes[t] points into its larger endpoint
    let instance = |mask: u64| {
        let mut fi = base.clone();
        for (t, &e) in fes.iter().enumerate() {
            let (a, b) = g.edge(e);
            fi.preload[if mask >> t & 1 == 1 { b } else { a }] += 1;
        }
        fi
    };
    let best = (0..1u64 << fes.len())
        .into_par_iter()
        .filter_map(|mask| forest_dp(&instance(mask)).map(|s| (s.size, mask)))
        .min();
    let Some((size, mask)) = best else {
        return Ok(None);
    };
    let forest = forest_dp(&instance(mask)).expect("feasible on replay");
    let mut heads = vec![usize::MAX; g.m()];
    for (t, &e) in fes.iter().enumerate() {
        let (a, b) = g.edge(e);
        heads[e] = if mask >> t & 1 == 1 { b } else { a };
    }
    for (&e, &h) in tree_ids.iter().zip(&forest.heads) {
        heads[e] = h;
    }
    Ok(Some(Solution {
        size,
        orientation: Orientation::from_heads(&g, heads)?,
    }))
}
