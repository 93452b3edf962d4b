//! Solving by vertex integrity: guess how a solution behaves on a small
//! modulator `U`, list what every component of `G - U` can do, then pick one
//! option per component subject to the residual capacities on `U`.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{CvcError, Result};
use crate::flow::Dinic;
use crate::graph::{CapacitatedGraph, EdgeId, Orientation, Vertex};
use crate::io::{join_ids, lines};
use crate::oracle::Solution;
use crate::subsets::find_combination;

pub const DEFAULT_MODULATOR_CAP: usize = 18;
/// Largest edge count a literal catalog will enumerate orientations of.
pub const MAX_LITERAL_CATALOG_EDGES: usize = 22;
/// Largest component the flow-based catalog will enumerate vertex subsets of.
pub const MAX_COMPONENT: usize = 20;

/// A vertex set `U` whose removal leaves components of size at most
/// `vi - |U|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulator {
    pub u: Vec<Vertex>,
    pub vi: usize,
}

impl Modulator {
    /// Wraps `u` and computes the integrity it witnesses.
    pub fn new(g: &CapacitatedGraph, mut u: Vec<Vertex>) -> Result<Self> {
        u.sort_unstable();
        u.dedup();
        if u.iter().any(|&v| v >= g.n()) {
            return Err(CvcError::structural("modulator vertex out of range"));
        }
        let largest = components_without(g, &u)
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0);
        Ok(Modulator {
            vi: u.len() + largest,
            u,
        })
    }

    /// `modulator <ids...>`, possibly with no ids.
    pub fn parse(text: &str, g: &CapacitatedGraph) -> Result<Self> {
        let mut ids = Vec::new();
        let mut seen_header = false;
        for line in lines(text) {
            if line.keyword() != "modulator" || seen_header {
                return Err(line.error("expected a single `modulator <ids...>` line"));
            }
            seen_header = true;
            for i in 1..line.tokens.len() {
                ids.push(line.vertex(i, g.n())?);
            }
        }
        if !seen_header {
            return Err(CvcError::parse(1, "missing `modulator` line"));
        }
        Self::new(g, ids)
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "modulator {}", join_ids(self.u.iter().copied())).unwrap();
        out
    }
}

fn components_without(g: &CapacitatedGraph, u: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut removed = vec![false; g.n()];
    for &v in u {
        removed[v] = true;
    }
    g.components_avoiding(&removed)
}

/// Minimum-integrity modulator by exhaustive search: for `vi = 1, 2, ...`
/// try every `U` with `|U| < vi`, smallest first.
pub fn compute_modulator(g: &CapacitatedGraph, cap: usize) -> Result<Modulator> {
    CvcError::check_cap("vertex count for modulator search", g.n(), cap)?;
    let n = g.n();
    if n == 0 {
        return Ok(Modulator { u: Vec::new(), vi: 0 });
    }
    let mut removed = vec![false; n];
    for vi in 1..=n {
        for size in 0..vi.min(n + 1) {
            let found = find_combination(n, size, |u| {
                removed.iter_mut().for_each(|x| *x = false);
                for &v in u {
                    removed[v] = true;
                }
                let largest = g
                    .components_avoiding(&removed)
                    .iter()
                    .map(Vec::len)
                    .max()
                    .unwrap_or(0);
                (size + largest <= vi).then(|| u.to_vec())
            });
            if let Some(u) = found {
                return Ok(Modulator { u, vi });
            }
        }
    }
    unreachable!("U = V always works with vi = n")
}

/// Precomputed structure of `G` around a modulator.
#[derive(Clone, Debug)]
pub struct ViLayout {
    pub u: Vec<Vertex>,
    /// Index into `u` for modulator vertices.
    pub u_index: Vec<Option<usize>>,
    /// Edges with both endpoints in `U`, by id.
    pub u_edges: Vec<EdgeId>,
    pub components: Vec<Vec<Vertex>>,
    /// Edges with at least one endpoint in each component, by id.
    pub component_edges: Vec<Vec<EdgeId>>,
}

impl ViLayout {
    pub fn new(g: &CapacitatedGraph, m: &Modulator) -> Self {
        let mut u_index = vec![None; g.n()];
        for (i, &v) in m.u.iter().enumerate() {
            u_index[v] = Some(i);
        }
        let components = components_without(g, &m.u);
        let mut owner = vec![usize::MAX; g.n()];
        for (j, c) in components.iter().enumerate() {
            for &v in c {
                owner[v] = j;
            }
        }
        let mut u_edges = Vec::new();
        let mut component_edges = vec![Vec::new(); components.len()];
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            match (u_index[a], u_index[b]) {
                (Some(_), Some(_)) => u_edges.push(e),
                (None, _) => component_edges[owner[a]].push(e),
                (Some(_), None) => component_edges[owner[b]].push(e),
            }
        }
        ViLayout {
            u: m.u.clone(),
            u_index,
            u_edges,
            components,
            component_edges,
        }
    }
}

/// One guess: which modulator vertices may receive arcs (`S`), how the edges
/// inside `U` are oriented, and the capacity left on each modulator vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulatorGuess {
    /// `S` as a sorted vertex list.
    pub s: Vec<Vertex>,
    /// Membership in `S`, indexed like `ViLayout::u`.
    pub in_s: Vec<bool>,
    /// Head of every edge of `G[U]`, parallel to `ViLayout::u_edges`.
    pub heads: Vec<Vertex>,
    /// Remaining capacity per modulator vertex; 0 outside `S`.
    pub residual: Vec<usize>,
}

/// Visits every valid guess: subsets `S` by size then lexicographically, and
/// for each the orientations of `G[U]` depth-first in edge order, smaller
/// endpoint first. Stops at the first `Some`.
pub fn visit_guesses<T>(
    g: &CapacitatedGraph,
    layout: &ViLayout,
    mut f: impl FnMut(&ModulatorGuess) -> Option<T>,
) -> Option<T> {
    let k = layout.u.len();
    (0..=k).find_map(|size| {
        find_combination(k, size, |chosen| {
            let mut in_s = vec![false; k];
            for &i in chosen {
                in_s[i] = true;
            }
            let mut guess = ModulatorGuess {
                s: chosen.iter().map(|&i| layout.u[i]).collect(),
                in_s,
                heads: vec![usize::MAX; layout.u_edges.len()],
                residual: vec![0; k],
            };
            let mut indeg = vec![0usize; k];
            orient_u(g, layout, 0, &mut guess, &mut indeg, &mut f)
        })
    })
}

fn orient_u<T>(
    g: &CapacitatedGraph,
    layout: &ViLayout,
    t: usize,
    guess: &mut ModulatorGuess,
    indeg: &mut [usize],
    f: &mut impl FnMut(&ModulatorGuess) -> Option<T>,
) -> Option<T> {
    if t == layout.u_edges.len() {
        for (i, &u) in layout.u.iter().enumerate() {
            guess.residual[i] = if guess.in_s[i] {
                g.capacity(u) - indeg[i]
            } else {
                0
            };
        }
        return f(guess);
    }
    let (a, b) = g.edge(layout.u_edges[t]);
    for head in [a, b] {
        let i = layout.u_index[head].expect("edge inside U");
        if !guess.in_s[i] || indeg[i] >= g.capacity(head) {
            continue;
        }
        indeg[i] += 1;
        guess.heads[t] = head;
        let found = orient_u(g, layout, t + 1, guess, indeg, f);
        indeg[i] -= 1;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// All valid guesses, in visiting order.
pub fn enumerate_guesses(g: &CapacitatedGraph, layout: &ViLayout) -> Vec<ModulatorGuess> {
    let mut out = Vec::new();
    visit_guesses::<()>(g, layout, |guess| {
        out.push(guess.clone());
        None
    });
    out
}

/// Load a component option puts on each modulator vertex, and how many of
/// the component's own vertices it gives positive in-degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockOption {
    pub a: Vec<usize>,
    pub d: usize,
}

/// Options for one component, each with the orientation realizing it.
#[derive(Clone, Debug)]
pub struct ComponentCatalog {
    pub component: usize,
    /// Parallel to `ViLayout::component_edges[component]`.
    pub edges: Vec<EdgeId>,
    pub options: Vec<BlockOption>,
    /// `heads[q][t]` is the head of `edges[t]` under option `q`.
    pub heads: Vec<Vec<Vertex>>,
}

impl AsRef<[BlockOption]> for ComponentCatalog {
    fn as_ref(&self) -> &[BlockOption] {
        &self.options
    }
}

/// Option of an orientation of `F^j`, or `None` if it points an edge into
/// `U \ S` or overloads a component vertex.
fn evaluate(
    g: &CapacitatedGraph,
    layout: &ViLayout,
    guess: &ModulatorGuess,
    edges: &[EdgeId],
    heads: &[Vertex],
    load: &mut HashMap<Vertex, usize>,
) -> Option<BlockOption> {
    load.clear();
    let mut a = vec![0; layout.u.len()];
    for (&e, &h) in edges.iter().zip(heads) {
        debug_assert!(g.edge(e).0 == h || g.edge(e).1 == h);
        match layout.u_index[h] {
            Some(i) if !guess.in_s[i] => return None,
            Some(i) => a[i] += 1,
            None => *load.entry(h).or_insert(0) += 1,
        }
    }
    if load.iter().any(|(&v, &l)| l > g.capacity(v)) {
        return None;
    }
    Some(BlockOption {
        a,
        d: load.len(),
    })
}

/// Every valid orientation of the edges touching component `j`, in order of
/// the bitmask over those edges (bit set: head is the edge's larger endpoint).
pub fn component_catalog(
    g: &CapacitatedGraph,
    layout: &ViLayout,
    guess: &ModulatorGuess,
    j: usize,
) -> Result<ComponentCatalog> {
    let edges = layout.component_edges[j].clone();
    CvcError::check_cap("component edge count", edges.len(), MAX_LITERAL_CATALOG_EDGES)?;
    let mut options = Vec::new();
    let mut all_heads = Vec::new();
    let mut load = HashMap::new();
    let mut heads = vec![0; edges.len()];
    for mask in 0..1u64 << edges.len() {
        for (t, &e) in edges.iter().enumerate() {
            let (a, b) = g.edge(e);
            heads[t] = if mask >> t & 1 == 1 { b } else { a };
        }
        if let Some(opt) = evaluate(g, layout, guess, &edges, &heads, &mut load) {
            options.push(opt);
            all_heads.push(heads.clone());
        }
    }
    Ok(ComponentCatalog {
        component: j,
        edges,
        options,
        heads: all_heads,
    })
}

/// The Pareto-minimal options of component `j` (no other option is at most
/// as large in `d` and every load), each with a realizing orientation.
///
/// Rather than listing orientations, this fixes the set `D` of component
/// vertices allowed positive in-degree and an upper bound on every load,
/// then asks a flow network for an orientation within those limits. Every
/// valid orientation is dominated by the answer for its own `D` and loads, so
/// the block selection optimum is the same as over the literal catalog.
pub fn compact_catalog(
    g: &CapacitatedGraph,
    layout: &ViLayout,
    guess: &ModulatorGuess,
    j: usize,
) -> Result<ComponentCatalog> {
    let comp = &layout.components[j];
    CvcError::check_cap("component size", comp.len(), MAX_COMPONENT)?;
    let edges = layout.component_edges[j].clone();
    let mut local = HashMap::new();
    for (x, &v) in comp.iter().enumerate() {
        local.insert(v, x);
    }
    // component vertices that must lie in D, and the S-vertices reachable
    let mut required = 0u64;
    let mut touch: Vec<usize> = Vec::new();
    let mut touch_edges: HashMap<usize, usize> = HashMap::new();
    for &e in &edges {
        let (a, b) = g.edge(e);
        let (inner, outer) = if local.contains_key(&a) { (a, b) } else { (b, a) };
        if let Some(i) = layout.u_index[outer] {
            if guess.in_s[i] {
                *touch_edges.entry(i).or_insert_with(|| {
                    touch.push(i);
                    0
                }) += 1;
            } else {
                required |= 1 << local[&inner];
            }
        }
    }
    touch.sort_unstable();
    let limit: Vec<usize> = touch
        .iter()
        .map(|&i| touch_edges[&i].min(guess.residual[i]))
        .collect();

    let mut found: HashMap<BlockOption, Vec<Vertex>> = HashMap::new();
    let mut order = Vec::new();
    let mut load = HashMap::new();
    for d_mask in 0..1u64 << comp.len() {
        if d_mask & required != required
            || (0..comp.len()).any(|x| d_mask >> x & 1 == 1 && g.capacity(comp[x]) == 0)
        {
            continue;
        }
        if orient_within(g, layout, comp, &local, &edges, d_mask, &touch, &limit).is_none() {
            continue;
        }
        let mut caps = vec![0usize; touch.len()];
        loop {
            if let Some(heads) =
                orient_within(g, layout, comp, &local, &edges, d_mask, &touch, &caps)
            {
                let opt = evaluate(g, layout, guess, &edges, &heads, &mut load)
                    .expect("flow respects validity");
                if let Entry::Vacant(slot) = found.entry(opt.clone()) {
                    slot.insert(heads);
                    order.push(opt);
                }
            }
            // odometer over the load bounds
            let mut t = 0;
            while t < caps.len() && caps[t] == limit[t] {
                caps[t] = 0;
                t += 1;
            }
            if t == caps.len() {
                break;
            }
            caps[t] += 1;
        }
    }

    order.sort_by(|x, y| (x.d, &x.a).cmp(&(y.d, &y.a)));
    let mut kept: Vec<BlockOption> = Vec::new();
    for opt in order {
        let dominated = kept
            .iter()
            .any(|k| k.d <= opt.d && k.a.iter().zip(&opt.a).all(|(p, q)| p <= q));
        if !dominated {
            kept.push(opt);
        }
    }
    let heads = kept.iter().map(|o| found[o].clone()).collect();
    Ok(ComponentCatalog {
        component: j,
        edges,
        options: kept,
        heads,
    })
}

/// An orientation of `edges` where only vertices in `d_mask` or in `touch`
/// receive arcs, component vertices within capacity and `touch[t]` at most
/// `caps[t]` arcs.
#[allow(clippy::too_many_arguments)]
fn orient_within(
    g: &CapacitatedGraph,
    layout: &ViLayout,
    comp: &[Vertex],
    local: &HashMap<Vertex, usize>,
    edges: &[EdgeId],
    d_mask: u64,
    touch: &[usize],
    caps: &[usize],
) -> Option<Vec<Vertex>> {
    // nodes: 0 source, 1 sink, edges, component vertices, touched U vertices
    let base_c = 2 + edges.len();
    let base_u = base_c + comp.len();
    let mut net = Dinic::new(base_u + touch.len());
    let node_of = |v: Vertex| -> Option<usize> {
        if let Some(&x) = local.get(&v) {
            return (d_mask >> x & 1 == 1).then_some(base_c + x);
        }
        let i = layout.u_index[v]?;
        touch.iter().position(|&t| t == i).map(|p| base_u + p)
    };
    let mut handles = Vec::with_capacity(edges.len());
    for (t, &e) in edges.iter().enumerate() {
        let (a, b) = g.edge(e);
        net.add_edge(0, 2 + t, 1);
        let ha = node_of(a).map(|n| net.add_edge(2 + t, n, 1));
        let hb = node_of(b).map(|n| net.add_edge(2 + t, n, 1));
        if ha.is_none() && hb.is_none() {
            return None;
        }
        handles.push((ha, hb));
    }
    for (x, &v) in comp.iter().enumerate() {
        if d_mask >> x & 1 == 1 {
            net.add_edge(base_c + x, 1, g.capacity(v));
        }
    }
    for (p, &c) in caps.iter().enumerate() {
        net.add_edge(base_u + p, 1, c);
    }
    if net.max_flow(0, 1) < edges.len() {
        return None;
    }
    Some(
        edges
            .iter()
            .zip(handles)
            .map(|(&e, (ha, _))| {
                let (a, b) = g.edge(e);
                match ha {
                    Some(h) if net.flow_on(h) == 1 => a,
                    _ => b,
                }
            })
            .collect(),
    )
}

/// One option index per catalog and the total `d` it achieves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSelection {
    pub total_d: usize,
    pub choice: Vec<usize>,
}

/// Minimum total `d` over one option per catalog with the summed loads
/// within `residual`, or `None` if no selection fits (or none fits within
/// `budget`, when one is given).
///
/// Dynamic programming over the vector of loads used so far; a coordinate
/// never exceeds its residual, which bounds the state space.
pub fn solve_block_selection<C: AsRef<[BlockOption]>>(
    catalogs: &[C],
    residual: &[usize],
    budget: Option<usize>,
) -> Option<BlockSelection> {
    struct State {
        load: Vec<usize>,
        d: usize,
        parent: usize,
        option: usize,
    }
    let mut layers: Vec<Vec<State>> = vec![vec![State {
        load: vec![0; residual.len()],
        d: 0,
        parent: 0,
        option: 0,
    }]];
    for cat in catalogs {
        let prev = layers.last().expect("nonempty");
        let mut next: Vec<State> = Vec::new();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        for (p, st) in prev.iter().enumerate() {
            for (q, opt) in cat.as_ref().iter().enumerate() {
                let d = st.d + opt.d;
                if budget.is_some_and(|b| d > b) {
                    continue;
                }
                let load: Vec<usize> = st.load.iter().zip(&opt.a).map(|(x, y)| x + y).collect();
                if load.iter().zip(residual).any(|(l, r)| l > r) {
                    continue;
                }
                match index.get(&load) {
                    Some(&i) if next[i].d <= d => {}
                    Some(&i) => {
                        next[i] = State {
                            load,
                            d,
                            parent: p,
                            option: q,
                        }
                    }
                    None => {
                        index.insert(load.clone(), next.len());
                        next.push(State {
                            load,
                            d,
                            parent: p,
                            option: q,
                        });
                    }
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        layers.push(next);
    }
    let last = layers.last().expect("nonempty");
    let (mut at, best) = last
        .iter()
        .enumerate()
        .min_by_key(|(i, st)| (st.d, *i))
        .map(|(i, st)| (i, st.d))?;
    let mut choice = vec![0; catalogs.len()];
    for j in (0..catalogs.len()).rev() {
        let st = &layers[j + 1][at];
        choice[j] = st.option;
        at = st.parent;
    }
    Some(BlockSelection {
        total_d: best,
        choice,
    })
}

/// Reference answer by trying every combination of options.
pub fn block_selection_exhaustive<C: AsRef<[BlockOption]>>(
    catalogs: &[C],
    residual: &[usize],
) -> Option<usize> {
    if catalogs.iter().any(|c| c.as_ref().is_empty()) {
        return None;
    }
    let mut pick = vec![0usize; catalogs.len()];
    let mut best: Option<usize> = None;
    loop {
        let mut load = vec![0usize; residual.len()];
        let mut d = 0;
        for (cat, &q) in catalogs.iter().zip(&pick) {
            let opt = &cat.as_ref()[q];
            d += opt.d;
            for (l, x) in load.iter_mut().zip(&opt.a) {
                *l += x;
            }
        }
        if load.iter().zip(residual).all(|(l, r)| l <= r) && best.is_none_or(|b| d < b) {
            best = Some(d);
        }
        let mut j = 0;
        while j < pick.len() && pick[j] + 1 == catalogs[j].as_ref().len() {
            pick[j] = 0;
            j += 1;
        }
        if j == pick.len() {
            return best;
        }
        pick[j] += 1;
    }
}

/// Outcome of a run, with the instrumentation the tests check.
#[derive(Clone, Debug)]
pub struct ViReport {
    pub solution: Option<Solution>,
    pub modulator: Modulator,
    /// Valid guesses visited.
    pub guesses: usize,
    /// `|U| + |E(G[U])|`, the exponent of the guess bound.
    pub guess_exponent: usize,
}

/// Decides whether a feasible orientation of size at most `k` exists. Uses
/// `modulator` when given, otherwise computes one.
pub fn solve_vi(g: &CapacitatedGraph, k: usize, modulator: Option<&Modulator>) -> Result<ViReport> {
    run(g, Some(k), modulator)
}

/// Minimum size of a feasible orientation via the same pipeline.
pub fn solve_vi_min(g: &CapacitatedGraph, modulator: Option<&Modulator>) -> Result<ViReport> {
    run(g, None, modulator)
}

fn run(g: &CapacitatedGraph, k: Option<usize>, modulator: Option<&Modulator>) -> Result<ViReport> {
    let g = g.normalize_capacities();
    let m = match modulator {
        Some(m) => Modulator::new(&g, m.u.clone())?,
        None => compute_modulator(&g, DEFAULT_MODULATOR_CAP)?,
    };
    let layout = ViLayout::new(&g, &m);
    let mut guesses = 0usize;
    let mut seen: HashSet<(Vec<bool>, Vec<usize>)> = HashSet::new();
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    let mut error = None;

    visit_guesses(&g, &layout, |guess| {
        guesses += 1;
        let s = guess.s.len();
        let limit = match (k, &best) {
            (Some(k), _) => k,
            (None, Some((b, _))) => b.saturating_sub(1),
            (None, None) => usize::MAX,
        };
        if s > limit {
            // sizes only grow from here on; stop the search
            return Some(());
        }
        // guesses with the same S and residuals behave identically
        if !seen.insert((guess.in_s.clone(), guess.residual.clone())) {
            return None;
        }
        let mut catalogs = Vec::with_capacity(layout.components.len());
        for j in 0..layout.components.len() {
            match compact_catalog(&g, &layout, guess, j) {
                Ok(c) if c.options.is_empty() => return None,
                Ok(c) => catalogs.push(c),
                Err(e) => {
                    error = Some(e);
                    return Some(());
                }
            }
        }
        let sel = solve_block_selection(&catalogs, &guess.residual, Some(limit - s))?;
        let mut heads = vec![usize::MAX; g.m()];
        for (&e, &h) in layout.u_edges.iter().zip(&guess.heads) {
            heads[e] = h;
        }
        for (cat, &q) in catalogs.iter().zip(&sel.choice) {
            for (&e, &h) in cat.edges.iter().zip(&cat.heads[q]) {
                heads[e] = h;
            }
        }
        best = Some((s + sel.total_d, heads));
        k.map(|_| ())
    });
    if let Some(e) = error {
        return Err(e);
    }
    let solution = match best {
        Some((_, heads)) => {
            let orientation = Orientation::from_heads(&g, heads)?;
            Some(Solution {
                size: orientation.size(g.n()),
                orientation,
            })
        }
        None => None,
    };
    Ok(ViReport {
        solution,
        guess_exponent: layout.u.len() + layout.u_edges.len(),
        modulator: m,
        guesses,
    })
}
