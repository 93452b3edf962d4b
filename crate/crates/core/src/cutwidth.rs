//! Dynamic programming over a linear arrangement, exponential only in the
//! cutwidth of that arrangement.
//!
//! Cut `i` separates the first `i` vertices of the arrangement from the rest.
//! A signature on cut `i` fixes the direction of every crossing edge; bit `t`
//! of a signature is 1 when the `t`-th crossing edge points left-to-right.
//! Crossing edges are kept ordered by `(pos(left), pos(right))`, so the edges
//! that survive from cut `i-1` to cut `i` keep their relative order and come
//! first, followed by the edges leaving the newly placed vertex.

use std::fmt::Write as _;
use std::num::NonZeroU32;

use crate::error::{CvcError, Result};
use crate::graph::{CapacitatedGraph, EdgeId, Orientation, Vertex};
use crate::io::{join_ids, lines};
use crate::oracle::Solution;

pub const DEFAULT_EXACT_ARRANGEMENT_CAP: usize = 16;
/// Widest cut the DP accepts; a layer table has `2^width` entries.
pub const MAX_DP_CUTWIDTH: usize = 26;

/// A bijection from vertices to positions `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearArrangement {
    order: Vec<Vertex>,
    pos: Vec<usize>,
}

impl LinearArrangement {
    pub fn new(order: Vec<Vertex>) -> Result<Self> {
        let n = order.len();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != 0 {
                return Err(CvcError::structural(
                    "arrangement is not a permutation of the vertices",
                ));
            }
            pos[v] = i + 1;
        }
        Ok(LinearArrangement { order, pos })
    }

    pub fn identity(n: usize) -> Self {
        LinearArrangement {
            order: (0..n).collect(),
            pos: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    /// 1-based position of `v`.
    pub fn pos(&self, v: Vertex) -> usize {
        self.pos[v]
    }

    /// Vertex at 1-based position `i`.
    pub fn at(&self, i: usize) -> Vertex {
        self.order[i - 1]
    }

    /// `arrangement <n>` followed by `n` vertex ids in order.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut it = lines(text);
        let header = it
            .next()
            .ok_or_else(|| CvcError::parse(1, "empty arrangement file"))?;
        if header.keyword() != "arrangement" {
            return Err(header.error("expected header `arrangement <n>`"));
        }
        header.expect_len(2)?;
        let declared: usize = header.num(1)?;
        if declared != n {
            return Err(header.error(format!(
                "arrangement has {declared} vertices, instance has {n}"
            )));
        }
        let mut order = Vec::with_capacity(n);
        let mut last = header.no;
        for line in it {
            last = line.no;
            for i in 0..line.tokens.len() {
                order.push(line.vertex(i, n)?);
            }
        }
        if order.len() != n {
            return Err(CvcError::parse(
                last,
                format!("expected {n} vertex ids, found {}", order.len()),
            ));
        }
        Self::new(order)
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "arrangement {}", self.len()).unwrap();
        writeln!(out, "{}", join_ids(self.order.iter().copied())).unwrap();
        out
    }

    fn check_for(&self, g: &CapacitatedGraph) -> Result<()> {
        if self.len() != g.n() {
            return Err(CvcError::structural(format!(
                "arrangement covers {} vertices, graph has {}",
                self.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// Edges crossing cut `i`, in canonical order.
pub fn cut_edges(g: &CapacitatedGraph, pi: &LinearArrangement, i: usize) -> Vec<EdgeId> {
    let mut cut: Vec<(usize, usize, EdgeId)> = g
        .edges()
        .iter()
        .enumerate()
        .filter_map(|(e, &(a, b))| {
            let (l, r) = ordered(pi.pos(a), pi.pos(b));
            (l <= i && i < r).then_some((l, r, e))
        })
        .collect();
    cut.sort_unstable();
    cut.into_iter().map(|(_, _, e)| e).collect()
}

fn ordered(x: usize, y: usize) -> (usize, usize) {
    if x < y {
        (x, y)
    } else {
        (y, x)
    }
}

pub fn cutwidth_of(g: &CapacitatedGraph, pi: &LinearArrangement) -> usize {
    cut_sizes(g, pi).into_iter().max().unwrap_or(0)
}

/// `|δ_i|` for `i = 0..=n`.
pub fn cut_sizes(g: &CapacitatedGraph, pi: &LinearArrangement) -> Vec<usize> {
    let n = g.n();
    let mut diff = vec![0isize; n + 2];
    for &(a, b) in g.edges() {
        let (l, r) = ordered(pi.pos(a), pi.pos(b));
        diff[l] += 1;
        diff[r] -= 1;
    }
    let mut sizes = Vec::with_capacity(n + 1);
    let mut cur = 0isize;
    for d in diff.iter().take(n + 1) {
        cur += d;
        sizes.push(cur as usize);
    }
    sizes
}

/// Directions of every edge crossing one cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSignature {
    pub cut_index: usize,
    pub edges: Vec<EdgeId>,
    pub bits: u64,
}

impl CutSignature {
    /// True when edge `t` of the cut points left-to-right.
    pub fn rightward(&self, t: usize) -> bool {
        self.bits >> t & 1 == 1
    }
}

/// Table entry: minimum size, or `None` for infeasible.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpValue(Option<NonZeroU32>);

impl DpValue {
    pub const INFEASIBLE: DpValue = DpValue(None);

    pub fn finite(v: u32) -> Self {
        DpValue(NonZeroU32::new(v + 1))
    }

    pub fn get(self) -> Option<u32> {
        self.0.map(|x| x.get() - 1)
    }
}

/// The DP table for one cut.
#[derive(Clone, Debug)]
pub struct DpLayer {
    pub cut_index: usize,
    pub edges: Vec<EdgeId>,
    pub table: Vec<DpValue>,
    /// Predecessor signature on cut `i-1` for every entry.
    pub pred: Option<Vec<u32>>,
}

impl DpLayer {
    pub fn base() -> Self {
        DpLayer {
            cut_index: 0,
            edges: Vec::new(),
            table: vec![DpValue::finite(0)],
            pred: None,
        }
    }

    pub fn get(&self, sig: &CutSignature) -> Option<DpValue> {
        (sig.cut_index == self.cut_index && sig.edges == self.edges)
            .then(|| self.table.get(sig.bits as usize).copied())
            .flatten()
    }
}

/// Scatters the low bits of `bits` onto the set positions of `mask`.
fn deposit(mut bits: u64, positions: &[usize]) -> u64 {
    let mut out = 0;
    for &p in positions {
        out |= (bits & 1) << p;
        bits >>= 1;
    }
    out
}

/// Computes the table for cut `i` from the one for cut `i-1`.
///
/// Predecessors are grouped by their restriction `τ` to the edges common to
/// both cuts. For each `τ` one pass over the predecessors buckets the best
/// value by the number `t` of edges entering the new vertex from the left,
/// and one pass over the targets combines each target's right-hand in-degree
/// with every bucket. Returns the layer and the number of elementary steps.
pub fn process_layer(
    prev: &DpLayer,
    g: &CapacitatedGraph,
    pi: &LinearArrangement,
    i: usize,
    keep_pred: bool,
) -> (DpLayer, u64) {
    assert_eq!(prev.cut_index + 1, i, "layers must be processed in order");
    let v = pi.at(i);
    let cap = g.capacity(v);

    let mut common_pos = Vec::new();
    let mut left_pos = Vec::new();
    let mut edges = Vec::with_capacity(prev.edges.len() + g.degree(v));
    for (t, &e) in prev.edges.iter().enumerate() {
        let (a, b) = g.edge(e);
        if a == v || b == v {
            left_pos.push(t);
        } else {
            common_pos.push(t);
            edges.push(e);
        }
    }
    let mut right: Vec<(usize, EdgeId)> = g
        .neighbors(v)
        .iter()
        .filter(|&&(w, _)| pi.pos(w) > i)
        .map(|&(w, e)| (pi.pos(w), e))
        .collect();
    right.sort_unstable();
    edges.extend(right.iter().map(|&(_, e)| e));

    let (c, l, r) = (common_pos.len(), left_pos.len(), right.len());
    let mut table = vec![DpValue::INFEASIBLE; 1 << (c + r)];
    let mut pred = keep_pred.then(|| vec![0u32; 1 << (c + r)]);
    let left_patterns: Vec<u64> = (0..1u64 << l).map(|x| deposit(x, &left_pos)).collect();
    let mut work = 0u64;
    // best (value, predecessor) per number of arcs entering v from the left
    let mut bucket: Vec<Option<(u32, u64)>> = vec![None; l + 1];

    for tau in 0..1u64 << c {
        let base = deposit(tau, &common_pos);
        bucket.iter_mut().for_each(|b| *b = None);
        work += (l + 1) as u64;
        for (lambda, &pattern) in left_patterns.iter().enumerate() {
            work += 1;
            let sig = base | pattern;
            let Some(val) = prev.table[sig as usize].get() else {
                continue;
            };
            let t = (lambda as u64).count_ones() as usize;
            if bucket[t].is_none_or(|best| (val, sig) < best) {
                bucket[t] = Some((val, sig));
            }
        }
        for rho in 0..1u64 << r {
            work += (l + 1) as u64;
            // right edges with bit 0 point back into v
            let from_right = r - rho.count_ones() as usize;
            let mut best: Option<(u32, u64)> = None;
            for (t, b) in bucket.iter().enumerate() {
                let Some((val, sig)) = *b else { continue };
                let indeg = t + from_right;
                if indeg > cap {
                    continue;
                }
                let cand = (val + u32::from(indeg > 0), sig);
                if best.is_none_or(|x| cand < x) {
                    best = Some(cand);
                }
            }
            if let Some((val, sig)) = best {
                let target = (tau | rho << c) as usize;
                table[target] = DpValue::finite(val);
                if let Some(p) = pred.as_mut() {
                    p[target] = sig as u32;
                }
            }
        }
    }
    (
        DpLayer {
            cut_index: i,
            edges,
            table,
            pred,
        },
        work,
    )
}

/// Per-layer instrumentation of one DP run.
#[derive(Clone, Debug, Default)]
pub struct LayerStats {
    pub cut_index: usize,
    pub width: usize,
    pub table_len: usize,
    pub work: u64,
}

/// Result of a full DP pass.
#[derive(Clone, Debug)]
pub struct CutDpRun {
    /// Optimum, `None` when infeasible.
    pub value: Option<usize>,
    /// Present only when a certificate was requested.
    pub solution: Option<Solution>,
    pub stats: Vec<LayerStats>,
    /// The signature used at every cut `0..=n` by the reconstructed
    /// certificate (empty when no certificate was requested or none exists).
    pub trace: Vec<CutSignature>,
}

/// Runs the DP along `pi`; with `certificate` set, predecessor links are kept
/// and an optimal orientation is rebuilt from them.
pub fn run_cutdp(
    g: &CapacitatedGraph,
    pi: &LinearArrangement,
    certificate: bool,
) -> Result<CutDpRun> {
    pi.check_for(g)?;
    let width = cutwidth_of(g, pi);
    CvcError::check_cap("arrangement cutwidth", width, MAX_DP_CUTWIDTH)?;
    let n = g.n();
    let mut layer = DpLayer::base();
    let mut stats = vec![LayerStats {
        cut_index: 0,
        width: 0,
        table_len: 1,
        work: 0,
    }];
    let mut history: Vec<(Vec<EdgeId>, Vec<u32>)> = Vec::new();
    for i in 1..=n {
        let (mut next, work) = process_layer(&layer, g, pi, i, certificate);
        stats.push(LayerStats {
            cut_index: i,
            width: next.edges.len(),
            table_len: next.table.len(),
            work,
        });
        if let Some(p) = next.pred.take() {
            history.push((next.edges.clone(), p));
        }
        layer = next;
    }
    let Some(value) = layer.table[0].get() else {
        return Ok(CutDpRun {
            value: None,
            solution: None,
            stats,
            trace: Vec::new(),
        });
    };
    if !certificate {
        return Ok(CutDpRun {
            value: Some(value as usize),
            solution: None,
            stats,
            trace: Vec::new(),
        });
    }

    // walk the predecessor links back from the empty signature on cut n
    let mut sigs = vec![0u64; n + 1];
    for i in (1..=n).rev() {
        sigs[i - 1] = u64::from(history[i - 1].1[sigs[i] as usize]);
    }
    let mut trace = vec![CutSignature {
        cut_index: 0,
        edges: Vec::new(),
        bits: 0,
    }];
    let mut heads = vec![usize::MAX; g.m()];
    for i in 1..=n {
        let edges = &history[i - 1].0;
        for (t, &e) in edges.iter().enumerate() {
            let (a, b) = g.edge(e);
            let (left, right) = if pi.pos(a) < pi.pos(b) { (a, b) } else { (b, a) };
            if left == pi.at(i) {
                heads[e] = if sigs[i] >> t & 1 == 1 { right } else { left };
            }
        }
        trace.push(CutSignature {
            cut_index: i,
            edges: edges.clone(),
            bits: sigs[i],
        });
    }
    let orientation = Orientation::from_heads(g, heads)?;
    Ok(CutDpRun {
        value: Some(value as usize),
        solution: Some(Solution {
            size: value as usize,
            orientation,
        }),
        stats,
        trace,
    })
}

/// Minimum size of a feasible orientation, with certificate, or `None` if the
/// instance is infeasible.
pub fn solve_cutdp(g: &CapacitatedGraph, pi: &LinearArrangement) -> Result<Option<Solution>> {
    Ok(run_cutdp(g, pi, true)?.solution)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrangementMode {
    Exact,
    Heuristic,
}

pub fn find_arrangement(
    g: &CapacitatedGraph,
    mode: ArrangementMode,
    exact_cap: usize,
) -> Result<LinearArrangement> {
    match mode {
        ArrangementMode::Exact => {
            CvcError::check_cap("vertex count for exact arrangement", g.n(), exact_cap)?;
            Ok(exact_arrangement(g))
        }
        ArrangementMode::Heuristic => Ok(heuristic_arrangement(g)),
    }
}

/// Minimum-cutwidth arrangement by DP over prefix sets:
/// `best(S) = max(|δ(S)|, min_{v ∈ S} best(S - v))`.
fn exact_arrangement(g: &CapacitatedGraph) -> LinearArrangement {
    let n = g.n();
    assert!(n < 32);
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &(w, _)| m | 1 << w))
        .collect();
    let full = (1usize << n) - 1;
    let mut cut = vec![0u16; full + 1];
    let mut best = vec![u16::MAX; full + 1];
    let mut last = vec![0u8; full + 1];
    best[0] = 0;
    for s in 1..=full {
        let low = s.trailing_zeros() as usize;
        let rest = s & !(1 << low);
        let inside = (nbr[low] & rest as u32).count_ones() as u16;
        cut[s] = cut[rest] + g.degree(low) as u16 - 2 * inside;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let cand = best[s & !(1 << v)].max(cut[s]);
            if cand < best[s] {
                best[s] = cand;
                last[s] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    LinearArrangement::new(order).expect("reconstructed a permutation")
}

/// Greedy placement followed by adjacent-swap improvement. No optimality
/// guarantee.
fn heuristic_arrangement(g: &CapacitatedGraph) -> LinearArrangement {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut to_placed = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let mut cut = 0usize;
    while order.len() < n {
        // pick the vertex whose placement leaves the smallest cut
        let v = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let after = cut + g.degree(v) - 2 * to_placed[v];
                (after, usize::MAX - to_placed[v], v)
            })
            .expect("unplaced vertex");
        cut = cut + g.degree(v) - 2 * to_placed[v];
        placed[v] = true;
        order.push(v);
        for &(w, _) in g.neighbors(v) {
            to_placed[w] += 1;
        }
    }

    let score = |order: &[Vertex]| {
        let pi = LinearArrangement::new(order.to_vec()).expect("permutation");
        let sizes = cut_sizes(g, &pi);
        (
            sizes.iter().copied().max().unwrap_or(0),
            sizes.iter().sum::<usize>(),
        )
    };
    let mut current = score(&order);
    for _ in 0..4 * n.max(1) {
        let mut improved = false;
        for i in 0..n.saturating_sub(1) {
            order.swap(i, i + 1);
            let s = score(&order);
            if s < current {
                current = s;
                improved = true;
            } else {
                order.swap(i, i + 1);
            }
        }
        if !improved {
            break;
        }
    }
    LinearArrangement::new(order).expect("permutation")
}
