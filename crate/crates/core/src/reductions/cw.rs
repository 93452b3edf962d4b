//! Exactly-one SAT to CVC on graphs of linear clique-width at most 6.
//!
//! Clause vertices on a positive and a negative side get demands that grow
//! with the clause index, so orienting the complete bipartite sides forces a
//! staircase pattern that leaves room for exactly one true literal per
//! clause on the positive side and exactly two false ones on the negative
//! side.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::builder::GraphBuilder;
use super::cnf::Cnf1in3;
use super::ReductionOutput;
use crate::error::{CvcError, Result};
use crate::graph::{CapacitatedGraph, Vertex};
use crate::io::lines;
use crate::oracle::ChoiceGroups;

pub const MAX_LABELS: u8 = 6;

const L_POS: u8 = 1;
const L_NEG: u8 = 2;
const PENDANT: u8 = 5;
const GARBAGE: u8 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExprOp {
    Intro { v: Vertex, label: u8 },
    Join(u8, u8),
    Relabel(u8, u8),
}

/// A linear expression: every `Intro` adds one vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliquewidthExpression {
    pub ops: Vec<ExprOp>,
}

impl CliquewidthExpression {
    /// One op per line: `intro <v> <label>`, `join <a> <b>` or
    /// `relabel <from> <to>`, with 1-based vertex ids.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for line in lines(text) {
            line.expect_len(3)?;
            let [a, b]: [usize; 2] = line.nums(1)?.try_into().unwrap();
            let label = |x: usize| -> Result<u8> {
                u8::try_from(x).map_err(|_| line.error(format!("label {x} out of range")))
            };
            ops.push(match line.keyword() {
                "intro" if a > 0 => ExprOp::Intro {
                    v: a - 1,
                    label: label(b)?,
                },
                "intro" => return Err(line.error("vertex ids start at 1")),
                "join" => ExprOp::Join(label(a)?, label(b)?),
                "relabel" => ExprOp::Relabel(label(a)?, label(b)?),
                other => return Err(line.error(format!("unknown operation `{other}`"))),
            });
        }
        Ok(CliquewidthExpression { ops })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            match *op {
                ExprOp::Intro { v, label } => writeln!(out, "intro {} {label}", v + 1),
                ExprOp::Join(a, b) => writeln!(out, "join {a} {b}"),
                ExprOp::Relabel(a, b) => writeln!(out, "relabel {a} {b}"),
            }
            .unwrap();
        }
        out
    }

    /// Distinct labels mentioned anywhere in the script.
    pub fn labels_used(&self) -> usize {
        let mut seen = [false; 256];
        for op in &self.ops {
            match *op {
                ExprOp::Intro { label, .. } => seen[label as usize] = true,
                ExprOp::Join(a, b) | ExprOp::Relabel(a, b) => {
                    seen[a as usize] = true;
                    seen[b as usize] = true;
                }
            }
        }
        seen.iter().filter(|&&s| s).count()
    }
}

/// Replays `expr` and compares with `g`. Labels outside `1..=6`, a vertex
/// introduced twice or outside `g`, and a join of a label with itself are
/// structural errors. Returns whether every vertex of `g` was introduced and
/// the replayed edge set equals the edge set of `g`.
pub fn verify_cw_expression(expr: &CliquewidthExpression, g: &CapacitatedGraph) -> Result<bool> {
    let check = |l: u8| {
        if (1..=MAX_LABELS).contains(&l) {
            Ok(l as usize)
        } else {
            Err(CvcError::structural(format!("label {l} outside 1..={MAX_LABELS}")))
        }
    };
    let mut class: Vec<Vec<Vertex>> = vec![Vec::new(); MAX_LABELS as usize + 1];
    let mut introduced = vec![false; g.n()];
    let mut edges = HashSet::new();
    for op in &expr.ops {
        match *op {
            ExprOp::Intro { v, label } => {
                let l = check(label)?;
                if v >= g.n() {
                    return Err(CvcError::structural(format!(
                        "expression introduces vertex {} of {}",
                        v + 1,
                        g.n()
                    )));
                }
                if std::mem::replace(&mut introduced[v], true) {
                    return Err(CvcError::structural(format!(
                        "vertex {} introduced twice",
                        v + 1
                    )));
                }
                class[l].push(v);
            }
            ExprOp::Join(a, b) => {
                let (a, b) = (check(a)?, check(b)?);
                if a == b {
                    return Err(CvcError::structural(format!("join of label {a} with itself")));
                }
                for &u in &class[a] {
                    for &v in &class[b] {
                        edges.insert((u.min(v), u.max(v)));
                    }
                }
            }
            ExprOp::Relabel(a, b) => {
                let (a, b) = (check(a)?, check(b)?);
                if a != b {
                    let moved = std::mem::take(&mut class[a]);
                    class[b].extend(moved);
                }
            }
        }
    }
    if introduced.contains(&false) {
        return Ok(false);
    }
    let target: HashSet<_> = g.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    Ok(target.len() == g.m() && target == edges)
}

/// Literal occurrence `(clause, position)` lists per variable and side.
struct Incidence {
    /// `[v_i on L+, v_i on L-, vbar_i on L+, vbar_i on L-]`
    lists: Vec<[Vec<(usize, usize)>; 4]>,
}

impl Incidence {
    fn new(psi: &Cnf1in3) -> Self {
        let mut lists: Vec<[Vec<(usize, usize)>; 4]> = vec![Default::default(); psi.n];
        for (j, c) in psi.clauses.iter().enumerate() {
            for (t, l) in c.iter().enumerate() {
                let (pos, neg) = if l.positive { (0, 3) } else { (2, 1) };
                lists[l.var][pos].push((j, t));
                lists[l.var][neg].push((j, t));
            }
        }
        Incidence { lists }
    }
}

/// Vertex ids in the order the expression introduces them.
struct Layout {
    v: Vec<Vertex>,
    v_bar: Vec<Vertex>,
    l_pos: Vec<[Vertex; 3]>,
    l_neg: Vec<[Vertex; 3]>,
    c_pos: Vec<Vertex>,
    c_neg: Vec<Vertex>,
}

/// Budget `8m + n`. Vertex ids follow the introduction order of the
/// emitted expression; every marked vertex is followed by its leaves.
pub fn reduce_sat_cw(psi: &Cnf1in3) -> Result<ReductionOutput> {
    let m = psi.clauses.len();
    let budget = 8 * m + psi.n;
    let inc = Incidence::new(psi);

    let mut b = GraphBuilder::default();
    let mut marked = Vec::new();
    let mut mark = |b: &mut GraphBuilder, demand: usize| {
        let v = b.vertex(demand);
        b.leaves(v, budget + 1);
        marked.push(v);
        v
    };
    let mut lay = Layout {
        v: Vec::with_capacity(psi.n),
        v_bar: Vec::with_capacity(psi.n),
        l_pos: vec![[0; 3]; m],
        l_neg: vec![[0; 3]; m],
        c_pos: Vec::with_capacity(m),
        c_neg: Vec::with_capacity(m),
    };
    for lists in &inc.lists {
        lay.v.push(b.vertex(0));
        for (side, list) in lists[..2].iter().enumerate() {
            for &(j, t) in list {
                let l = mark(&mut b, j + 1);
                if side == 0 { lay.l_pos[j][t] = l } else { lay.l_neg[j][t] = l }
            }
        }
        lay.v_bar.push(b.vertex(0));
        for (side, list) in lists[2..].iter().enumerate() {
            for &(j, t) in list {
                let l = mark(&mut b, j + 1);
                if side == 0 { lay.l_pos[j][t] = l } else { lay.l_neg[j][t] = l }
            }
        }
    }
    for j in 0..m {
        lay.c_pos.push(mark(&mut b, 3 * j + 1));
    }
    for j in 0..m {
        lay.c_neg.push(mark(&mut b, 3 * j + 2));
    }

    // edges straight from the definition, independent of the script
    for &c in &lay.c_pos {
        for &l in lay.l_pos.iter().flatten() {
            b.edge(c, l);
        }
    }
    for &c in &lay.c_neg {
        for &l in lay.l_neg.iter().flatten() {
            b.edge(c, l);
        }
    }
    for (i, (&v, &vb)) in lay.v.iter().zip(&lay.v_bar).enumerate() {
        b.edge(v, vb);
        for (j, c) in psi.clauses.iter().enumerate() {
            for (t, l) in c.iter().enumerate() {
                if l.var != i {
                    continue;
                }
                let (sat, unsat) = if l.positive { (v, vb) } else { (vb, v) };
                b.edge(sat, lay.l_pos[j][t]);
                b.edge(unsat, lay.l_neg[j][t]);
            }
        }
    }

    let expression = expression(&inc, &lay, budget + 1);
    let (graph, demand) = b.finish(budget)?;
    let meta = ChoiceGroups {
        forced: marked,
        groups: lay.v.iter().zip(&lay.v_bar).map(|(&a, &b)| vec![a, b]).collect(),
        free: Vec::new(),
    };
    Ok(ReductionOutput {
        graph,
        budget,
        meta,
        demand,
        expression: Some(expression),
        witness: None,
        families: Vec::new(),
    })
}

fn expression(inc: &Incidence, lay: &Layout, leaves: usize) -> CliquewidthExpression {
    use ExprOp::*;
    let mut ops = Vec::new();
    let marked = |ops: &mut Vec<ExprOp>, v: Vertex, label: u8| {
        ops.push(Intro { v, label });
        for leaf in v + 1..=v + leaves {
            ops.push(Intro { v: leaf, label: PENDANT });
        }
        ops.push(Join(label, PENDANT));
        ops.push(Relabel(PENDANT, GARBAGE));
    };
    let vertex_of = |side: usize, (j, t): (usize, usize)| {
        if side == 0 { lay.l_pos[j][t] } else { lay.l_neg[j][t] }
    };
    for (i, lists) in inc.lists.iter().enumerate() {
        ops.push(Intro { v: lay.v[i], label: 3 });
        for (side, list) in lists[..2].iter().enumerate() {
            for &occ in list {
                marked(&mut ops, vertex_of(side, occ), 4);
                ops.push(Join(3, 4));
                ops.push(Relabel(4, [L_POS, L_NEG][side]));
            }
        }
        ops.push(Intro { v: lay.v_bar[i], label: 4 });
        ops.push(Join(3, 4));
        ops.push(Relabel(3, GARBAGE));
        for (side, list) in lists[2..].iter().enumerate() {
            for &occ in list {
                marked(&mut ops, vertex_of(side, occ), 3);
                ops.push(Join(4, 3));
                ops.push(Relabel(3, [L_POS, L_NEG][side]));
            }
        }
        ops.push(Relabel(4, GARBAGE));
    }
    for (cs, side) in [(&lay.c_pos, L_POS), (&lay.c_neg, L_NEG)] {
        for &c in cs {
            marked(&mut ops, c, 3);
            ops.push(Join(3, side));
            ops.push(Relabel(3, GARBAGE));
        }
    }
    CliquewidthExpression { ops }
}
