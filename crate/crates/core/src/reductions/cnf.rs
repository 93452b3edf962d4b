//! Exactly-one-in-three formulas and the variable/clause grouping used by
//! the natural-parameter construction.

use std::fmt::Write as _;

use crate::error::{CvcError, Result};
use crate::io::lines;

/// A literal over 0-based variable `var`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn holds(self, value: bool) -> bool {
        value == self.positive
    }

    fn dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

/// Clauses of exactly three literals over distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf1in3 {
    pub n: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl Cnf1in3 {
    pub fn new(n: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for (j, c) in clauses.iter().enumerate() {
            if c.iter().any(|l| l.var >= n) {
                return Err(CvcError::structural(format!("clause {} uses an unknown variable", j + 1)));
            }
            if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
                return Err(CvcError::structural(format!(
                    "clause {} repeats a variable",
                    j + 1
                )));
            }
        }
        Ok(Cnf1in3 { n, clauses })
    }

    /// Whether every variable occurs in at most four clauses.
    pub fn is_degree_bounded(&self) -> bool {
        let mut occ = vec![0usize; self.n];
        for c in &self.clauses {
            for l in c {
                occ[l.var] += 1;
            }
        }
        occ.iter().all(|&o| o <= 4)
    }

    /// DIMACS: `p cnf <n> <m>`, then one clause of three non-zero literals
    /// per line, optionally terminated by `0`. Lines starting with `c` are
    /// comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut it = lines(text).filter(|l| l.keyword() != "c");
        let header = it
            .next()
            .ok_or_else(|| CvcError::parse(1, "empty CNF file"))?;
        if header.tokens.len() != 4 || header.tokens[0] != "p" || header.tokens[1] != "cnf" {
            return Err(header.error("expected header `p cnf <n> <m>`"));
        }
        let n: usize = header.num(2)?;
        let m: usize = header.num(3)?;
        let mut clauses = Vec::with_capacity(m);
        let mut last = header.no;
        for line in it {
            last = line.no;
            let mut lits: Vec<i64> = (0..line.tokens.len())
                .map(|i| line.num(i))
                .collect::<Result<_>>()?;
            if lits.last() == Some(&0) {
                lits.pop();
            }
            if lits.len() != 3 || lits.contains(&0) {
                return Err(line.error("a clause needs exactly three non-zero literals"));
            }
            let mut clause = [Literal { var: 0, positive: true }; 3];
            for (slot, &x) in clause.iter_mut().zip(&lits) {
                let var = x.unsigned_abs() as usize;
                if var > n {
                    return Err(line.error(format!("unknown variable {var}")));
                }
                *slot = Literal {
                    var: var - 1,
                    positive: x > 0,
                };
            }
            if clause[0].var == clause[1].var
                || clause[0].var == clause[2].var
                || clause[1].var == clause[2].var
            {
                return Err(line.error("clause repeats a variable"));
            }
            clauses.push(clause);
        }
        if clauses.len() != m {
            return Err(CvcError::parse(
                last,
                format!("header declares {m} clauses, found {}", clauses.len()),
            ));
        }
        Ok(Cnf1in3 { n, clauses })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p cnf {} {}", self.n, self.clauses.len()).unwrap();
        for c in &self.clauses {
            writeln!(out, "{} {} {} 0", c[0].dimacs(), c[1].dimacs(), c[2].dimacs()).unwrap();
        }
        out
    }

    /// Number of true literals of clause `j` under `assignment`.
    pub fn true_literals(&self, j: usize, assignment: &[bool]) -> usize {
        self.clauses[j]
            .iter()
            .filter(|l| l.holds(assignment[l.var]))
            .count()
    }

    /// An assignment with exactly one true literal per clause, by trying all
    /// `2^n` assignments.
    pub fn brute_force(&self) -> Option<Vec<bool>> {
        assert!(self.n < 32, "brute force limited to 31 variables");
        (0..1u64 << self.n).find_map(|mask| {
            let a: Vec<bool> = (0..self.n).map(|i| mask >> i & 1 == 1).collect();
            (0..self.clauses.len())
                .all(|j| self.true_literals(j, &a) == 1)
                .then_some(a)
        })
    }
}

/// Partitions of the variables and of the clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouping {
    pub var_groups: Vec<Vec<usize>>,
    pub clause_groups: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupingMode {
    Trivial,
    Greedy,
}

/// Checks that both lists are partitions and that for every variable group
/// and clause group, the clauses of the clause group contain at most one
/// occurrence of a variable from the variable group.
pub fn verify_grouping(psi: &Cnf1in3, grouping: &Grouping) -> bool {
    let mut var_group = vec![usize::MAX; psi.n];
    for (p, g) in grouping.var_groups.iter().enumerate() {
        for &x in g {
            if x >= psi.n || var_group[x] != usize::MAX {
                return false;
            }
            var_group[x] = p;
        }
    }
    let mut seen = vec![false; psi.clauses.len()];
    for g in &grouping.clause_groups {
        for &j in g {
            if j >= seen.len() || seen[j] {
                return false;
            }
            seen[j] = true;
        }
    }
    if var_group.contains(&usize::MAX) || seen.contains(&false) {
        return false;
    }
    grouping.clause_groups.iter().all(|g| {
        let mut hit = vec![false; grouping.var_groups.len()];
        g.iter().flat_map(|&j| psi.clauses[j].iter()).all(|l| {
            let p = var_group[l.var];
            !std::mem::replace(&mut hit[p], true)
        })
    })
}

/// Trivial mode puts every variable and every clause in its own group, which
/// is always valid since clause variables are distinct. Greedy mode packs up
/// to `max(1, floor(log2 n))` pairwise non-co-occurring variables per group
/// and up to `max(1, floor(sqrt n))` clauses per group, first fit; the result
/// is verified and trivial mode is used if the check fails.
pub fn group_formula(psi: &Cnf1in3, mode: GroupingMode) -> Grouping {
    let trivial = Grouping {
        var_groups: (0..psi.n).map(|x| vec![x]).collect(),
        clause_groups: (0..psi.clauses.len()).map(|j| vec![j]).collect(),
    };
    if mode == GroupingMode::Trivial {
        return trivial;
    }
    let n = psi.n.max(1);
    let var_target = (usize::BITS - 1 - n.leading_zeros()).max(1) as usize;
    let clause_target = ((n as f64).sqrt().floor() as usize).max(1);

    let mut together = vec![vec![false; psi.n]; psi.n];
    for c in &psi.clauses {
        for a in c {
            for b in c {
                together[a.var][b.var] = true;
            }
        }
    }
    let mut var_groups: Vec<Vec<usize>> = Vec::new();
    for x in 0..psi.n {
        let slot = var_groups
            .iter()
            .position(|g| g.len() < var_target && g.iter().all(|&y| !together[x][y]));
        match slot {
            Some(p) => var_groups[p].push(x),
            None => var_groups.push(vec![x]),
        }
    }
    let mut var_group = vec![0; psi.n];
    for (p, g) in var_groups.iter().enumerate() {
        for &x in g {
            var_group[x] = p;
        }
    }
    let mut clause_groups: Vec<Vec<usize>> = Vec::new();
    let mut used: Vec<Vec<bool>> = Vec::new();
    for (j, c) in psi.clauses.iter().enumerate() {
        let groups: Vec<usize> = c.iter().map(|l| var_group[l.var]).collect();
        let slot = (0..clause_groups.len()).find(|&i| {
            clause_groups[i].len() < clause_target && groups.iter().all(|&p| !used[i][p])
        });
        let i = slot.unwrap_or_else(|| {
            clause_groups.push(Vec::new());
            used.push(vec![false; var_groups.len()]);
            clause_groups.len() - 1
        });
        clause_groups[i].push(j);
        for p in groups {
            used[i][p] = true;
        }
    }
    let greedy = Grouping {
        var_groups,
        clause_groups,
    };
    if verify_grouping(psi, &greedy) {
        greedy
    } else {
        trivial
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn lit(x: i64) -> Literal {
        Literal {
            var: x.unsigned_abs() as usize - 1,
            positive: x > 0,
        }
    }

    fn formula(n: usize, clauses: &[[i64; 3]]) -> Cnf1in3 {
        Cnf1in3::new(n, clauses.iter().map(|c| c.map(lit)).collect()).unwrap()
    }

    #[test]
    fn brute_force_semantics() {
        assert!(formula(3, &[[1, 2, 3]]).brute_force().is_some());
        assert!(formula(3, &[[1, 2, 3], [-1, -2, -3]]).brute_force().is_none());
        assert!(formula(3, &[[1, 2, 3], [1, -2, 3]]).brute_force().is_none());
        assert!(formula(3, &[[1, 2, 3], [1, -2, -3]]).brute_force().is_some());
    }

    #[test]
    fn groupings_are_valid() {
        let single = formula(3, &[[1, 2, 3]]);
        let t = group_formula(&single, GroupingMode::Trivial);
        assert_eq!((t.var_groups.len(), t.clause_groups.len()), (3, 1));
        assert!(verify_grouping(&single, &t));

        let disjoint = formula(6, &[[1, 2, 3], [4, 5, 6]]);
        let g = group_formula(&disjoint, GroupingMode::Greedy);
        assert!(verify_grouping(&disjoint, &g));
        assert!(g.var_groups.len() < 6);

        let bad = Grouping {
            var_groups: vec![vec![0, 1], vec![2]],
            clause_groups: vec![vec![0]],
        };
        assert!(!verify_grouping(&single, &bad));
    }

    #[test]
    fn dimacs_roundtrip() {
        let f = formula(4, &[[1, -2, 3], [-4, 2, 1]]);
        assert_eq!(Cnf1in3::parse(&f.write()).unwrap(), f);
        assert_eq!(
            Cnf1in3::parse("c hi\np cnf 3 1\n1 2 3\n").unwrap(),
            formula(3, &[[1, 2, 3]])
        );
        assert!(Cnf1in3::parse("p cnf 3 1\n1 1 2 0\n").is_err());
        assert!(Cnf1in3::parse("p cnf 3 1\n1 2 0\n").is_err());
        assert!(Cnf1in3::parse("p cnf 3 2\n1 2 3 0\n").is_err());
        assert!(Cnf1in3::parse("p cnf 3 1\n1 2 4 0\n").is_err());
    }
}
