//! Ground-truth exact solvers used to cross-check every other algorithm.

use std::fmt::Write as _;

use crate::assign::assign_edges;
use crate::error::{CvcError, Result};
use crate::graph::{CapacitatedGraph, Orientation, Vertex};
use crate::io::{join_ids, lines};
use crate::subsets::find_subset;

pub const DEFAULT_EXACT_CAP: usize = 20;
pub const DEFAULT_SEARCH_CAP: u64 = 1 << 24;

/// A feasible orientation together with its size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub size: usize,
    pub orientation: Orientation,
}

/// Minimum-size feasible orientation by enumerating candidate sets `S` by
/// cardinality, then lexicographically. `None` means no feasible orientation
/// exists at all.
pub fn solve_exact(g: &CapacitatedGraph, cap: usize) -> Result<Option<Solution>> {
    CvcError::check_cap("vertex count", g.n(), cap)?;
    let g = g.normalize_capacities();
    // isolated and zero-capacity vertices never receive an arc
    let pool: Vec<Vertex> = (0..g.n()).filter(|&v| g.capacity(v) > 0).collect();
    let mut in_s = vec![false; g.n()];
    for &v in &pool {
        in_s[v] = true;
    }
    if assign_edges(&g, &in_s).is_none() {
        return Ok(None);
    }
    Ok(find_subset(pool.len(), |idx| {
        in_s.iter_mut().for_each(|x| *x = false);
        for &i in idx {
            in_s[pool[i]] = true;
        }
        assign_edges(&g, &in_s)
    })
    .map(|orientation| Solution {
        size: orientation.size(g.n()),
        orientation,
    }))
}

enum Item {
    Free(Vertex),
    // leaves of one pendant star, selected as a prefix of this list
    Star(Vec<Vertex>),
}

/// Decides whether a feasible orientation of size at most `k` exists.
///
/// Before enumerating, a vertex with more than `k` pendant leaves is forced
/// into the solution, and pendant leaves hanging off the same vertex are
/// treated as interchangeable, so only how many of them are selected matters.
pub fn solve_pruned(g: &CapacitatedGraph, k: usize, cap: u64) -> Result<Option<Orientation>> {
    let g = g.normalize_capacities();
    let n = g.n();
    let is_leaf = |v: Vertex| g.degree(v) == 1 && g.degree(g.neighbors(v)[0].0) >= 2;

    let mut forced = Vec::new();
    let mut in_star = vec![false; n];
    let mut items = Vec::new();
    for v in 0..n {
        let leaves: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .map(|&(w, _)| w)
            .filter(|&w| is_leaf(w))
            .collect();
        if leaves.len() > k {
            if g.capacity(v) == 0 {
                return Ok(None);
            }
            forced.push(v);
        }
        let selectable: Vec<Vertex> = leaves.into_iter().filter(|&w| g.capacity(w) > 0).collect();
        for &w in &selectable {
            in_star[w] = true;
        }
        if !selectable.is_empty() {
            items.push(Item::Star(selectable));
        }
    }
    if forced.len() > k {
        return Ok(None);
    }
    let mut is_forced = vec![false; n];
    for &v in &forced {
        is_forced[v] = true;
    }
    for v in 0..n {
        if !is_forced[v] && !in_star[v] && g.capacity(v) > 0 {
            items.push(Item::Free(v));
        }
    }
    let space = items.iter().try_fold(1u64, |acc, item| {
        let choices = match item {
            Item::Free(_) => 2,
            Item::Star(l) => l.len() as u64 + 1,
        };
        acc.checked_mul(choices)
    });
    match space {
        Some(s) => CvcError::check_cap("pruned search space", s as usize, cap as usize)?,
        None => CvcError::check_cap("pruned search space", usize::MAX, cap as usize)?,
    }

    let mut search = Search {
        g: &g,
        budget: k,
        in_s: vec![false; n],
        relaxed: vec![false; n],
    };
    for &v in &forced {
        search.in_s[v] = true;
    }
    Ok(search.pruned(&items, 0, forced.len()))
}

struct Search<'a> {
    g: &'a CapacitatedGraph,
    budget: usize,
    in_s: Vec<bool>,
    relaxed: Vec<bool>,
}

impl Search<'_> {
    /// Selecting more vertices never hurts, so if even `in_s` plus every
    /// still-undecided candidate is infeasible the branch is dead.
    fn relaxation_fails<'v>(&mut self, undecided: impl Iterator<Item = &'v Vertex>) -> bool {
        self.relaxed.copy_from_slice(&self.in_s);
        for &v in undecided {
            self.relaxed[v] = true;
        }
        assign_edges(self.g, &self.relaxed).is_none()
    }

    fn pruned(&mut self, items: &[Item], next: usize, used: usize) -> Option<Orientation> {
        if next == items.len() {
            return assign_edges(self.g, &self.in_s);
        }
        let rest = items[next..].iter().flat_map(|it| match it {
            Item::Free(v) => std::slice::from_ref(v),
            Item::Star(l) => l.as_slice(),
        });
        if self.relaxation_fails(rest) {
            return None;
        }
        match &items[next] {
            Item::Free(v) => {
                let v = *v;
                if used < self.budget {
                    self.in_s[v] = true;
                    let hit = self.pruned(items, next + 1, used + 1);
                    self.in_s[v] = false;
                    if hit.is_some() {
                        return hit;
                    }
                }
                self.pruned(items, next + 1, used)
            }
            Item::Star(leaves) => {
                let most = leaves.len().min(self.budget - used);
                for t in 0..=most {
                    for &w in &leaves[..t] {
                        self.in_s[w] = true;
                    }
                    let hit = self.pruned(items, next + 1, used + t);
                    for &w in &leaves[..t] {
                        self.in_s[w] = false;
                    }
                    if hit.is_some() {
                        return hit;
                    }
                }
                None
            }
        }
    }

    fn canonical(
        &mut self,
        groups: &[Vec<Vertex>],
        free: &[Vertex],
        used: usize,
    ) -> Option<Orientation> {
        if groups.is_empty() && free.is_empty() {
            return assign_edges(self.g, &self.in_s);
        }
        let undecided = groups.iter().flatten().chain(free);
        if self.relaxation_fails(undecided) {
            return None;
        }
        if let Some((group, later)) = groups.split_first() {
            for &v in group {
                self.in_s[v] = true;
                let hit = self.canonical(later, free, used);
                self.in_s[v] = false;
                if hit.is_some() {
                    return hit;
                }
            }
            return None;
        }
        let (&v, later) = free.split_first().expect("free is non-empty here");
        if used < self.budget {
            self.in_s[v] = true;
            let hit = self.canonical(groups, later, used + 1);
            self.in_s[v] = false;
            if hit.is_some() {
                return hit;
            }
        }
        self.canonical(groups, later, used)
    }
}

/// The canonical solution shape emitted by a reduction: every `forced`
/// vertex, exactly one vertex from each group, and any subset of `free`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChoiceGroups {
    pub forced: Vec<Vertex>,
    pub groups: Vec<Vec<Vertex>>,
    pub free: Vec<Vertex>,
}

impl ChoiceGroups {
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut owner = vec![false; n];
        let all = self
            .forced
            .iter()
            .chain(self.groups.iter().flatten())
            .chain(&self.free);
        for &v in all {
            if v >= n {
                return Err(CvcError::structural(format!(
                    "choice metadata references vertex {} of {n}",
                    v + 1
                )));
            }
            if owner[v] {
                return Err(CvcError::structural(format!(
                    "vertex {} appears twice in the choice metadata",
                    v + 1
                )));
            }
            owner[v] = true;
        }
        Ok(())
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut meta = ChoiceGroups::default();
        for line in lines(text) {
            let ids = (1..line.tokens.len())
                .map(|i| line.vertex(i, n))
                .collect::<Result<Vec<_>>>()?;
            match line.keyword() {
                "forced" => meta.forced.extend(ids),
                "group" => meta.groups.push(ids),
                "free" => meta.free.extend(ids),
                other => return Err(line.error(format!("unknown line type `{other}`"))),
            }
        }
        Ok(meta)
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "forced {}", join_ids(self.forced.iter().copied())).unwrap();
        for g in &self.groups {
            writeln!(out, "group {}", join_ids(g.iter().copied())).unwrap();
        }
        writeln!(out, "free {}", join_ids(self.free.iter().copied())).unwrap();
        out
    }
}

/// Decides "size at most `k`" over the canonical space described by `meta`
/// only. This is complete exactly when every optimal solution is known to
/// have that shape, which is what the reductions in this crate guarantee.
pub fn solve_canonical(
    g: &CapacitatedGraph,
    meta: &ChoiceGroups,
    k: usize,
) -> Result<Option<Orientation>> {
    meta.validate(g.n())?;
    let used = meta.forced.len() + meta.groups.len();
    if used > k || meta.groups.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let g = g.normalize_capacities();
    let mut search = Search {
        g: &g,
        budget: k,
        in_s: vec![false; g.n()],
        relaxed: vec![false; g.n()],
    };
    for &v in &meta.forced {
        search.in_s[v] = true;
    }
    Ok(search.canonical(&meta.groups, &meta.free, used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_orientation;

    fn graph(cap: Vec<usize>, edges: &[(usize, usize)]) -> CapacitatedGraph {
        CapacitatedGraph::new(cap, edges.iter().copied()).unwrap()
    }

    #[test]
    fn exact_small_cases() {
        let p3 = graph(vec![1, 2, 1], &[(0, 1), (1, 2)]);
        let sol = solve_exact(&p3, 20).unwrap().unwrap();
        assert_eq!(sol.size, 1);
        assert_eq!(sol.orientation.heads(), &[1, 1]);

        let tri = graph(vec![1, 1, 1], &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(solve_exact(&tri, 20).unwrap().unwrap().size, 3);

        let empty = graph(vec![3, 0, 2], &[]);
        assert_eq!(solve_exact(&empty, 20).unwrap().unwrap().size, 0);

        // K4 with capacity 1 has 6 edges but only 4 units of capacity
        let k4 = graph(
            vec![1; 4],
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        );
        assert_eq!(solve_exact(&k4, 20).unwrap(), None);
    }

    #[test]
    fn exact_refuses_above_cap() {
        let g = graph(vec![0; 21], &[]);
        assert!(matches!(
            solve_exact(&g, 20),
            Err(CvcError::CapExceeded { .. })
        ));
    }

    #[test]
    fn triangle_brute_force_over_orientations() {
        // every one of the 8 orientations of a unit-capacity triangle
        let tri = graph(vec![1, 1, 1], &[(0, 1), (1, 2), (0, 2)]);
        let mut best = usize::MAX;
        for mask in 0..8u32 {
            let heads = (0..3)
                .map(|e| {
                    let (a, b) = tri.edge(e);
                    if mask >> e & 1 == 1 {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            let o = Orientation::from_heads(&tri, heads).unwrap();
            let r = verify_orientation(&tri, &o).unwrap();
            if r.feasible {
                best = best.min(r.size);
            }
        }
        assert_eq!(best, 3);
    }

    #[test]
    fn pruned_k2_and_star() {
        let k2 = graph(vec![1, 1], &[(0, 1)]);
        assert!(solve_pruned(&k2, 0, DEFAULT_SEARCH_CAP).unwrap().is_none());
        assert!(solve_pruned(&k2, 1, DEFAULT_SEARCH_CAP).unwrap().is_some());

        // star with 4 leaves, k = 3: the center is forced
        let star = graph(vec![4, 1, 1, 1, 1], &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let o = solve_pruned(&star, 3, DEFAULT_SEARCH_CAP).unwrap().unwrap();
        assert!(verify_orientation(&star, &o).unwrap().feasible);
        assert_eq!(solve_exact(&star, 20).unwrap().unwrap().size, 1);

        // same star, center capacity 2: needs the center plus two leaves
        let weak = graph(vec![2, 1, 1, 1, 1], &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(solve_pruned(&weak, 2, DEFAULT_SEARCH_CAP).unwrap().is_none());
        let o = solve_pruned(&weak, 3, DEFAULT_SEARCH_CAP).unwrap().unwrap();
        assert_eq!(o.size(5), 3);
    }

    #[test]
    fn pruned_refuses_huge_space() {
        let g = graph(vec![1; 30], &(0..29).map(|i| (i, i + 1)).collect::<Vec<_>>());
        assert!(solve_pruned(&g, 15, 1 << 10).is_err());
    }

    #[test]
    fn canonical_basics() {
        let k2 = graph(vec![1, 1], &[(0, 1)]);
        let meta = ChoiceGroups {
            forced: vec![],
            groups: vec![vec![0, 1]],
            free: vec![],
        };
        assert!(solve_canonical(&k2, &meta, 1).unwrap().is_some());
        assert!(solve_canonical(&k2, &meta, 0).unwrap().is_none());

        let over = ChoiceGroups {
            forced: vec![0, 1],
            ..Default::default()
        };
        assert!(solve_canonical(&k2, &over, 1).unwrap().is_none());

        let clash = ChoiceGroups {
            forced: vec![0],
            groups: vec![vec![0, 1]],
            free: vec![],
        };
        assert!(matches!(
            solve_canonical(&k2, &clash, 2),
            Err(CvcError::Structural(_))
        ));
    }

    #[test]
    fn meta_roundtrip() {
        let meta = ChoiceGroups {
            forced: vec![0, 3],
            groups: vec![vec![1, 2], vec![4]],
            free: vec![5],
        };
        assert_eq!(ChoiceGroups::parse(&meta.write(), 6).unwrap(), meta);
        assert!(ChoiceGroups::parse("forced 7\n", 6).is_err());
        assert!(ChoiceGroups::parse("pick 1\n", 6).is_err());
    }
}
