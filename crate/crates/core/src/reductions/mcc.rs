//! Multicolored clique instances: `k` independent classes of `n` vertices
//! each. Every vertex is implicitly adjacent to itself.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{CvcError, Result};
use crate::graph::Vertex;
use crate::io::{join_ids, lines};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MccInstance {
    pub k: usize,
    pub n: usize,
    /// `classes[i][j]` is the vertex `v^i_{j+1}`; ids run over `0..k*n`.
    pub classes: Vec<Vec<Vertex>>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl MccInstance {
    /// Checks that the classes partition `0..k*n` into `k` sets of size `n`
    /// and that no edge lies inside a class. Parallel edges are dropped.
    pub fn new(
        k: usize,
        n: usize,
        classes: Vec<Vec<Vertex>>,
        edges: Vec<(Vertex, Vertex)>,
    ) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(CvcError::Config("need k >= 1 classes of n >= 1 vertices".into()));
        }
        if classes.len() != k || classes.iter().any(|c| c.len() != n) {
            return Err(CvcError::structural(format!("need {k} classes of exactly {n} vertices")));
        }
        let mut class_of = vec![usize::MAX; k * n];
        for (i, c) in classes.iter().enumerate() {
            for &v in c {
                if v >= k * n || class_of[v] != usize::MAX {
                    return Err(CvcError::structural(format!(
                        "vertex {} is not in exactly one class",
                        v + 1
                    )));
                }
                class_of[v] = i;
            }
        }
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= k * n || v >= k * n {
                return Err(CvcError::structural("edge endpoint outside the instance"));
            }
            if class_of[u] == class_of[v] {
                return Err(CvcError::structural(format!(
                    "class {} is not independent: edge {} {}",
                    class_of[u] + 1,
                    u + 1,
                    v + 1
                )));
            }
            if seen.insert((u.min(v), u.max(v))) {
                kept.push((u, v));
            }
        }
        Ok(MccInstance {
            k,
            n,
            classes,
            edges: kept,
        })
    }

    /// `mcc <k> <n>`, then `class <i> <ids...>` per class and `e <u> <v>`
    /// per edge, all 1-based.
    pub fn parse(text: &str) -> Result<Self> {
        let mut it = lines(text);
        let header = it
            .next()
            .ok_or_else(|| CvcError::parse(1, "empty MCC file"))?;
        if header.keyword() != "mcc" {
            return Err(header.error("expected header `mcc <k> <n>`"));
        }
        header.expect_len(3)?;
        let k: usize = header.num(1)?;
        let n: usize = header.num(2)?;
        let total = k * n;
        let mut classes = vec![None; k];
        let mut edges = Vec::new();
        for line in it {
            match line.keyword() {
                "class" => {
                    let i = line.vertex(1, k)?;
                    let ids = (2..line.tokens.len())
                        .map(|t| line.vertex(t, total))
                        .collect::<Result<Vec<_>>>()?;
                    if classes[i].replace(ids).is_some() {
                        return Err(line.error(format!("class {} listed twice", i + 1)));
                    }
                }
                "e" => {
                    line.expect_len(3)?;
                    edges.push((line.vertex(1, total)?, line.vertex(2, total)?));
                }
                other => return Err(line.error(format!("unknown line type `{other}`"))),
            }
        }
        let classes = classes
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| CvcError::structural(format!("class {} missing", i + 1))))
            .collect::<Result<_>>()?;
        MccInstance::new(k, n, classes, edges)
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "mcc {} {}", self.k, self.n).unwrap();
        for (i, c) in self.classes.iter().enumerate() {
            writeln!(out, "class {} {}", i + 1, join_ids(c.iter().copied())).unwrap();
        }
        for &(u, v) in &self.edges {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        out
    }

    /// `(class, 0-based index in class)` per vertex.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut pos = vec![(0, 0); self.k * self.n];
        for (i, c) in self.classes.iter().enumerate() {
            for (j, &v) in c.iter().enumerate() {
                pos[v] = (i, j);
            }
        }
        pos
    }

    /// Adjacency between `(class, index)` pairs, self-loops included.
    pub fn adjacency(&self) -> impl Fn((usize, usize), (usize, usize)) -> bool {
        let pos = self.positions();
        let n = self.n;
        let mut set: HashSet<(usize, usize)> = HashSet::new();
        for &(u, v) in &self.edges {
            let (a, b) = (pos[u], pos[v]);
            set.insert((a.0 * n + a.1, b.0 * n + b.1));
            set.insert((b.0 * n + b.1, a.0 * n + a.1));
        }
        move |a, b| a == b || set.contains(&(a.0 * n + a.1, b.0 * n + b.1))
    }

    /// Adds dummy classes until `k` is a power of two. Dummy vertices are
    /// adjacent to every vertex of every other class, so cliques extend.
    pub fn padded(&self) -> MccInstance {
        let k2 = self.k.next_power_of_two();
        if k2 == self.k {
            return self.clone();
        }
        let mut classes = self.classes.clone();
        let mut edges = self.edges.clone();
        for i in self.k..k2 {
            let base = i * self.n;
            let class: Vec<_> = (base..base + self.n).collect();
            for &d in &class {
                for other in &classes {
                    edges.extend(other.iter().map(|&v| (v, d)));
                }
            }
            classes.push(class);
        }
        MccInstance {
            k: k2,
            n: self.n,
            classes,
            edges,
        }
    }

    /// A multicolored clique as a 0-based index per class, trying all
    /// `n^k` choices.
    pub fn brute_force(&self) -> Option<Vec<usize>> {
        let adj = self.adjacency();
        let mut pick = vec![0usize; self.k];
        loop {
            let ok = (0..self.k)
                .all(|a| (a + 1..self.k).all(|b| adj((a, pick[a]), (b, pick[b]))));
            if ok {
                return Some(pick);
            }
            let mut i = 0;
            loop {
                if i == self.k {
                    return None;
                }
                pick[i] += 1;
                if pick[i] < self.n {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two(edges: &[(usize, usize)]) -> MccInstance {
        MccInstance::new(2, 2, vec![vec![0, 1], vec![2, 3]], edges.to_vec()).unwrap()
    }

    #[test]
    fn brute_force_and_roundtrip() {
        let yes = two_by_two(&[(1, 2)]);
        assert_eq!(yes.brute_force(), Some(vec![1, 0]));
        assert_eq!(two_by_two(&[]).brute_force(), None);
        assert_eq!(MccInstance::parse(&yes.write()).unwrap(), yes);
    }

    #[test]
    fn refuses_dependent_classes() {
        assert!(MccInstance::new(2, 2, vec![vec![0, 1], vec![2, 3]], vec![(0, 1)]).is_err());
        assert!(MccInstance::new(2, 2, vec![vec![0, 1], vec![1, 3]], vec![]).is_err());
        assert!(MccInstance::parse("mcc 1 2\nclass 1 1 2\ne 1 2\n").is_err());
    }

    #[test]
    fn padding_keeps_cliques() {
        let tri = MccInstance::new(
            3,
            1,
            vec![vec![0], vec![1], vec![2]],
            vec![(0, 1), (1, 2), (0, 2)],
        )
        .unwrap();
        let p = tri.padded();
        assert_eq!(p.k, 4);
        assert!(p.brute_force().is_some());
        let path = MccInstance::new(3, 1, vec![vec![0], vec![1], vec![2]], vec![(0, 1), (1, 2)])
            .unwrap();
        assert!(path.padded().brute_force().is_none());
    }
}
