//! Multicolored clique to CVC on graphs of tree-depth `O(k)`.
//!
//! Every class is represented by many choice-gadget instances; copy gadgets
//! force neighboring instances to agree, and the recursion over pairs of
//! class intervals bottoms out in one adjacency check per ordered pair of
//! classes. Only `O(k)` copy vertices separate a gadget from its four
//! subgadgets, which is what keeps the tree-depth linear.

use std::fmt::Write as _;

use super::builder::GraphBuilder;
use super::mcc::MccInstance;
use super::ReductionOutput;
use crate::assign::assign_edges_to;
use crate::error::{CvcError, Result};
use crate::graph::{CapacitatedGraph, Orientation, Vertex};
use crate::io::lines;
use crate::oracle::ChoiceGroups;

/// An elimination forest given by parent pointers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreedepthWitness {
    pub parent: Vec<Option<Vertex>>,
}

impl TreedepthWitness {
    /// One `parent <v> <p>` line per vertex, `p = 0` for roots.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut last = 0;
        for line in lines(text) {
            last = line.no;
            if line.keyword() != "parent" {
                return Err(line.error("expected `parent <v> <p>`"));
            }
            line.expect_len(3)?;
            let v = line.vertex(1, n)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(line.error(format!("vertex {} listed twice", v + 1)));
            }
            let p: usize = line.num(2)?;
            parent[v] = match p {
                0 => None,
                _ => Some(line.vertex(2, n)?),
            };
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(CvcError::parse(last, format!("no parent line for vertex {}", v + 1)));
        }
        Ok(TreedepthWitness { parent })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        for (v, p) in self.parent.iter().enumerate() {
            writeln!(out, "parent {} {}", v + 1, p.map_or(0, |p| p + 1)).unwrap();
        }
        out
    }
}

/// Whether `w` is an elimination forest of `g`, and its depth counted in
/// vertices. A cycle in the parent map is reported as invalid.
pub fn verify_td_witness(g: &CapacitatedGraph, w: &TreedepthWitness) -> Result<(bool, usize)> {
    let n = g.n();
    if w.parent.len() != n {
        return Err(CvcError::structural(format!(
            "witness covers {} vertices, graph has {n}",
            w.parent.len()
        )));
    }
    if let Some(p) = w.parent.iter().flatten().find(|&&p| p >= n) {
        return Err(CvcError::structural(format!("parent {} out of range", p + 1)));
    }
    // 0 means unknown; depths are 1-based
    let mut depth = vec![0usize; n];
    let mut on_path = vec![false; n];
    for start in 0..n {
        let mut path = Vec::new();
        let mut v = start;
        let base = loop {
            if depth[v] != 0 {
                break depth[v];
            }
            if on_path[v] {
                return Ok((false, 0));
            }
            on_path[v] = true;
            path.push(v);
            match w.parent[v] {
                Some(p) => v = p,
                None => break 0,
            }
        };
        for (t, &u) in path.iter().rev().enumerate() {
            depth[u] = base + t + 1;
            on_path[u] = false;
        }
    }
    let related = |u: Vertex, v: Vertex| {
        let (mut deep, high) = if depth[u] >= depth[v] { (u, v) } else { (v, u) };
        while depth[deep] > depth[high] {
            deep = w.parent[deep].expect("non-root has a parent");
        }
        deep == high
    };
    let valid = g.edges().iter().all(|&(u, v)| related(u, v));
    Ok((valid, depth.iter().copied().max().unwrap_or(0)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceInstance {
    pub class: usize,
    pub x_hat: Vertex,
    /// `v[j]` stands for the class vertex with 0-based index `j`.
    pub v: Vec<Vertex>,
}

/// The adjacency check for the ordered class pair `(i, i2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafGadget {
    pub i: usize,
    pub i2: usize,
    pub x_hat: Vertex,
    /// 0-based index pairs `(j, j2)` of the edges between the two classes,
    /// parallel to `v_e`.
    pub pairs: Vec<(usize, usize)>,
    pub v_e: Vec<Vertex>,
    /// `alpha, beta, kappa, lambda`
    pub validation: [Vertex; 4],
}

/// Where the gadgets ended up, for building certificates.
#[derive(Clone, Debug)]
pub struct TdLayout {
    /// Number of classes after padding.
    pub k: usize,
    pub n: usize,
    pub gamma: usize,
    pub delta: usize,
    pub budget: usize,
    pub instances: Vec<ChoiceInstance>,
    pub leaf_gadgets: Vec<LeafGadget>,
    pub marked: Vec<Vertex>,
}

impl TdLayout {
    /// The canonical solution for a clique given as a 0-based index per
    /// class (padding classes may be omitted). `None` if some pair of
    /// chosen vertices is not adjacent.
    pub fn selection(&self, clique: &[usize]) -> Option<Vec<Vertex>> {
        let pick = |i: usize| clique.get(i).copied().unwrap_or(0);
        let mut s = self.marked.clone();
        for inst in &self.instances {
            s.push(*inst.v.get(pick(inst.class))?);
        }
        for leaf in &self.leaf_gadgets {
            let want = (pick(leaf.i), pick(leaf.i2));
            let t = leaf.pairs.iter().position(|&p| p == want)?;
            s.push(leaf.v_e[t]);
        }
        Some(s)
    }

    /// [`TdLayout::selection`] completed to an orientation by flow.
    pub fn forward_certificate(&self, g: &CapacitatedGraph, clique: &[usize]) -> Option<Orientation> {
        assign_edges_to(g, &self.selection(clique)?)
    }
}

struct Gadget {
    side1: Vec<usize>,
    side2: Vec<usize>,
    top: Vertex,
}

struct Ctor<'a> {
    n: usize,
    adj: &'a dyn Fn((usize, usize), (usize, usize)) -> bool,
    b: GraphBuilder,
    parent: Vec<Option<Vertex>>,
    marked: Vec<Vertex>,
    instances: Vec<ChoiceInstance>,
    leaf_gadgets: Vec<LeafGadget>,
    /// choice groups in creation order
    groups: Vec<Vec<Vertex>>,
}

impl Ctor<'_> {
    fn vertex(&mut self, demand: usize, parent: Option<Vertex>) -> Vertex {
        let v = self.b.vertex(demand);
        self.parent.push(parent);
        v
    }

    fn marked(&mut self, demand: usize, parent: Option<Vertex>) -> Vertex {
        let v = self.vertex(demand, parent);
        self.marked.push(v);
        v
    }

    fn set_parent(&mut self, v: Vertex, p: Vertex) {
        self.parent[v] = Some(p);
    }

    /// `count` marked vertices of demand 1 adjacent to `u` and `w`, placed
    /// under `anchor` in the witness.
    fn a_edge(&mut self, u: Vertex, w: Vertex, count: usize, anchor: Vertex) {
        for _ in 0..count {
            let a = self.marked(1, Some(anchor));
            self.b.edge(a, u);
            self.b.edge(a, w);
        }
    }

    fn instance(&mut self, class: usize) -> usize {
        let x_hat = self.marked(1, None);
        let v: Vec<_> = (0..self.n).map(|_| self.vertex(0, Some(x_hat))).collect();
        for &u in &v {
            self.b.edge(x_hat, u);
        }
        self.groups.push(v.clone());
        self.instances.push(ChoiceInstance { class, x_hat, v });
        self.instances.len() - 1
    }

    fn copy_gadget(&mut self, orig: usize, sub: usize) -> [Vertex; 2] {
        let n = self.n;
        let g1 = self.marked(n, None);
        let g2 = self.marked(n, None);
        for (inst, flip) in [(orig, false), (sub, true)] {
            let vs = self.instances[inst].v.clone();
            for (j, &v) in vs.iter().enumerate() {
                let (to_g1, to_g2) = if flip { (n - j - 1, j + 1) } else { (j + 1, n - j - 1) };
                self.a_edge(v, g1, to_g1, v);
                self.a_edge(v, g2, to_g2, v);
            }
        }
        [g1, g2]
    }

    fn leaf(&mut self, i: usize, i2: usize) -> Gadget {
        let n = self.n;
        let inst1 = self.instance(i);
        let inst2 = self.instance(i2);
        let x_hat = self.marked(1, None);
        let mut pairs = Vec::new();
        for j in 0..n {
            for j2 in 0..n {
                if (self.adj)((i, j), (i2, j2)) {
                    pairs.push((j, j2));
                }
            }
        }
        let v_e: Vec<_> = pairs.iter().map(|_| self.vertex(0, Some(x_hat))).collect();
        for &v in &v_e {
            self.b.edge(x_hat, v);
        }
        self.groups.push(v_e.clone());
        let alpha = self.marked(n, None);
        let beta = self.marked(n, Some(alpha));
        let kappa = self.marked(n, Some(beta));
        let lambda = self.marked(n, Some(kappa));
        for x in [self.instances[inst1].x_hat, self.instances[inst2].x_hat, x_hat] {
            self.set_parent(x, lambda);
        }
        let vs = self.instances[inst1].v.clone();
        for (j, &v) in vs.iter().enumerate() {
            self.a_edge(v, alpha, j + 1, v);
            self.a_edge(v, beta, n - j - 1, v);
        }
        let vs = self.instances[inst2].v.clone();
        for (j, &v) in vs.iter().enumerate() {
            self.a_edge(v, kappa, j + 1, v);
            self.a_edge(v, lambda, n - j - 1, v);
        }
        for (&(j, j2), &v) in pairs.iter().zip(&v_e) {
            self.a_edge(v, alpha, n - j - 1, v);
            self.a_edge(v, beta, j + 1, v);
            self.a_edge(v, kappa, n - j2 - 1, v);
            self.a_edge(v, lambda, j2 + 1, v);
        }
        self.leaf_gadgets.push(LeafGadget {
            i,
            i2,
            x_hat,
            pairs,
            v_e,
            validation: [alpha, beta, kappa, lambda],
        });
        Gadget {
            side1: vec![inst1],
            side2: vec![inst2],
            top: alpha,
        }
    }

    /// The gadget for classes `lo1..=hi1` against `lo2..=hi2`; both
    /// intervals have the same power-of-two length.
    fn gadget(&mut self, lo1: usize, hi1: usize, lo2: usize, hi2: usize) -> Gadget {
        if lo1 == hi1 {
            return self.leaf(lo1, lo2);
        }
        let side1: Vec<_> = (lo1..=hi1).map(|p| self.instance(p)).collect();
        let side2: Vec<_> = (lo2..=hi2).map(|p| self.instance(p)).collect();
        let (m1, m2) = ((lo1 + hi1) / 2, (lo2 + hi2) / 2);
        let subs = [
            self.gadget(lo1, m1, lo2, m2),
            self.gadget(lo1, m1, m2 + 1, hi2),
            self.gadget(m1 + 1, hi1, lo2, m2),
            self.gadget(m1 + 1, hi1, m2 + 1, hi2),
        ];
        let mut chain = Vec::with_capacity(8 * side1.len());
        for (t, &orig) in side1.iter().enumerate() {
            let p = lo1 + t;
            let (which, start) = if p <= m1 { ([0, 1], lo1) } else { ([2, 3], m1 + 1) };
            for s in which {
                let sub = subs[s].side1[p - start];
                chain.extend(self.copy_gadget(orig, sub));
            }
        }
        for (t, &orig) in side2.iter().enumerate() {
            let p = lo2 + t;
            let (which, start) = if p <= m2 { ([0, 2], lo2) } else { ([1, 3], m2 + 1) };
            for s in which {
                let sub = subs[s].side2[p - start];
                chain.extend(self.copy_gadget(orig, sub));
            }
        }
        for w in chain.windows(2) {
            self.set_parent(w[1], w[0]);
        }
        let bottom = *chain.last().expect("a split gadget has copy vertices");
        for s in &subs {
            self.set_parent(s.top, bottom);
        }
        for &inst in side1.iter().chain(&side2) {
            let x = self.instances[inst].x_hat;
            self.set_parent(x, bottom);
        }
        Gadget {
            side1,
            side2,
            top: chain[0],
        }
    }
}

/// Pads to a power-of-two number of classes, builds the root gadget over
/// all pairs of classes and then attaches `k' + 1` leaves to every marked
/// vertex, with `k' = k^2 + gamma + delta`. The witness places copy vertices
/// on a chain per gadget above its subgadgets; its depth is `16k - 8`.
pub fn reduce_mcc_td(inst: &MccInstance) -> Result<(ReductionOutput, TdLayout)> {
    let inst = MccInstance::new(inst.k, inst.n, inst.classes.clone(), inst.edges.clone())?.padded();
    let adj = inst.adjacency();
    let mut c = Ctor {
        n: inst.n,
        adj: &adj,
        b: GraphBuilder::default(),
        parent: Vec::new(),
        marked: Vec::new(),
        instances: Vec::new(),
        leaf_gadgets: Vec::new(),
        groups: Vec::new(),
    };
    c.gadget(0, inst.k - 1, 0, inst.k - 1);

    let gamma = c.instances.len();
    let delta = c.marked.len();
    let budget = inst.k * inst.k + gamma + delta;
    for t in 0..delta {
        let v = c.marked[t];
        let range = c.b.leaves(v, budget + 1);
        c.parent.extend(range.map(|_| Some(v)));
    }

    let (graph, demand) = c.b.finish(budget)?;
    let meta = ChoiceGroups {
        forced: c.marked.clone(),
        groups: c.groups,
        free: Vec::new(),
    };
    let layout = TdLayout {
        k: inst.k,
        n: inst.n,
        gamma,
        delta,
        budget,
        instances: c.instances,
        leaf_gadgets: c.leaf_gadgets,
        marked: c.marked,
    };
    let out = ReductionOutput {
        graph,
        budget,
        meta,
        demand,
        expression: None,
        witness: Some(TreedepthWitness { parent: c.parent }),
        families: Vec::new(),
    };
    Ok((out, layout))
}
