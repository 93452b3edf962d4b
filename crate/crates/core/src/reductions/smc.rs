//! Set multicover to CVC. Element vertices with many leaves are forced;
//! choosing a set vertex lets it absorb its element edges, and every element
//! must push at least `b` edges onto chosen sets.

use std::fmt::Write as _;

use super::builder::GraphBuilder;
use super::ReductionOutput;
use crate::error::{CvcError, Result};
use crate::io::{join_ids, lines};
use crate::oracle::ChoiceGroups;
use crate::subsets::find_subset;

/// Universe `0..m`, sets over it, coverage demand `b` and budget `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmcInstance {
    pub m: usize,
    pub sets: Vec<Vec<usize>>,
    pub b: usize,
    pub k: usize,
}

impl SmcInstance {
    /// `smc <m> <n> <b> <k>` then one `set <j> <elements...>` line per set.
    pub fn parse(text: &str) -> Result<Self> {
        let mut it = lines(text);
        let header = it
            .next()
            .ok_or_else(|| CvcError::parse(1, "empty SMC file"))?;
        if header.keyword() != "smc" {
            return Err(header.error("expected header `smc <m> <n> <b> <k>`"));
        }
        header.expect_len(5)?;
        let m: usize = header.num(1)?;
        let n: usize = header.num(2)?;
        let b: usize = header.num(3)?;
        let k: usize = header.num(4)?;
        let mut sets: Vec<Option<Vec<usize>>> = vec![None; n];
        let mut last = header.no;
        for line in it {
            last = line.no;
            if line.keyword() != "set" || line.tokens.len() < 2 {
                return Err(line.error("expected `set <j> <elements...>`"));
            }
            let j = line.vertex(1, n)?;
            if sets[j].is_some() {
                return Err(line.error(format!("set {} listed twice", j + 1)));
            }
            let mut elems = (2..line.tokens.len())
                .map(|i| line.vertex(i, m))
                .collect::<Result<Vec<_>>>()?;
            elems.sort_unstable();
            elems.dedup();
            sets[j] = Some(elems);
        }
        if let Some(j) = sets.iter().position(Option::is_none) {
            return Err(CvcError::parse(last, format!("set {} missing", j + 1)));
        }
        Ok(SmcInstance {
            m,
            sets: sets.into_iter().map(Option::unwrap).collect(),
            b,
            k,
        })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "smc {} {} {} {}", self.m, self.sets.len(), self.b, self.k).unwrap();
        for (j, s) in self.sets.iter().enumerate() {
            writeln!(out, "set {} {}", j + 1, join_ids(s.iter().copied())).unwrap();
        }
        out
    }

    /// Whether at most `k` sets cover every element at least `b` times, by
    /// trying all subfamilies.
    pub fn brute_force(&self) -> bool {
        let n = self.sets.len();
        find_subset(n, |chosen| {
            if chosen.len() > self.k {
                return Some(false);
            }
            let mut count = vec![0usize; self.m];
            for &j in chosen {
                for &e in &self.sets[j] {
                    count[e] += 1;
                }
            }
            count.iter().all(|&c| c >= self.b).then_some(true)
        })
        .unwrap_or(false)
    }
}

/// Vertex order: element vertices, set vertices, then the `k' + 1` leaves
/// of each element in element order. Budget `k' = m + k`.
pub fn reduce_smc(inst: &SmcInstance) -> Result<ReductionOutput> {
    if inst.b == 0 {
        return Err(CvcError::Config("coverage demand b must be at least 1".into()));
    }
    if inst.sets.iter().flatten().any(|&e| e >= inst.m) {
        return Err(CvcError::structural("set element outside the universe"));
    }
    for (j, s) in inst.sets.iter().enumerate() {
        let mut seen = vec![false; inst.m];
        if s.iter().any(|&e| std::mem::replace(&mut seen[e], true)) {
            return Err(CvcError::structural(format!("set {} repeats an element", j + 1)));
        }
    }
    let budget = inst.m + inst.k;
    let mut b = GraphBuilder::default();
    let elems: Vec<_> = (0..inst.m).map(|_| b.vertex(inst.b)).collect();
    let sets: Vec<_> = inst.sets.iter().map(|_| b.vertex(0)).collect();
    for (j, s) in inst.sets.iter().enumerate() {
        for &e in s {
            b.edge(elems[e], sets[j]);
        }
    }
    for &v in &elems {
        b.leaves(v, budget + 1);
    }
    let (graph, demand) = b.finish(budget)?;
    Ok(ReductionOutput {
        graph,
        budget,
        meta: ChoiceGroups {
            forced: elems,
            groups: Vec::new(),
            free: sets,
        },
        demand,
        expression: None,
        witness: None,
        families: Vec::new(),
    })
}
