//! Set families whose subset sums pin down every function `U -> {0..d-1}`.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{CvcError, Result};
use crate::io::{join_ids, lines};

/// Cap on `d^(2|U|)`, the number of function pairs the property quantifies
/// over.
pub const DEFAULT_DETECTING_CAP: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyMode {
    Singleton,
    Greedy,
}

/// Sets are 0-based index lists into a universe of `universe` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectingFamily {
    pub universe: usize,
    pub d: usize,
    pub sets: Vec<Vec<usize>>,
}

impl DetectingFamily {
    /// One set per non-empty line, as 1-based indices.
    pub fn parse(text: &str, universe: usize, d: usize) -> Result<Self> {
        let mut sets = Vec::new();
        for line in lines(text) {
            let mut set = (0..line.tokens.len())
                .map(|i| line.vertex(i, universe))
                .collect::<Result<Vec<_>>>()?;
            set.sort_unstable();
            set.dedup();
            sets.push(set);
        }
        Ok(DetectingFamily { universe, d, sets })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        for s in &self.sets {
            writeln!(out, "{}", join_ids(s.iter().copied())).unwrap();
        }
        out
    }

    pub fn is_detecting(&self, cap: u64) -> Result<bool> {
        is_detecting(self.universe, &self.sets, self.d, cap)
    }
}

/// Several families in one file: a `family <universe> <d>` line opens each
/// section, followed by one `set <ids...>` line per set.
pub fn write_families(families: &[DetectingFamily]) -> String {
    let mut out = String::new();
    for f in families {
        writeln!(out, "family {} {}", f.universe, f.d).unwrap();
        for s in &f.sets {
            writeln!(out, "set {}", join_ids(s.iter().copied())).unwrap();
        }
    }
    out
}

pub fn parse_families(text: &str) -> Result<Vec<DetectingFamily>> {
    let mut out: Vec<DetectingFamily> = Vec::new();
    for line in lines(text) {
        match line.keyword() {
            "family" => {
                line.expect_len(3)?;
                out.push(DetectingFamily {
                    universe: line.num(1)?,
                    d: line.num(2)?,
                    sets: Vec::new(),
                });
            }
            "set" => {
                let f = out
                    .last_mut()
                    .ok_or_else(|| line.error("`set` before any `family` line"))?;
                let mut set = (1..line.tokens.len())
                    .map(|i| line.vertex(i, f.universe))
                    .collect::<Result<Vec<_>>>()?;
                set.sort_unstable();
                set.dedup();
                f.sets.push(set);
            }
            other => return Err(line.error(format!("unknown line type `{other}`"))),
        }
    }
    Ok(out)
}

fn check_cap(universe: usize, d: usize, cap: u64) -> Result<()> {
    let pairs = (d as u64)
        .checked_pow(2 * universe as u32)
        .unwrap_or(u64::MAX);
    if pairs > cap {
        return Err(CvcError::CapExceeded {
            what: "function pairs d^(2|U|)",
            value: pairs.min(usize::MAX as u64) as usize,
            cap: cap.min(usize::MAX as u64) as usize,
        });
    }
    Ok(())
}

/// True iff no two distinct functions `U -> {0..d-1}` have the same sum over
/// every set of `family`. Equivalent to the sum vector being injective, which
/// is what gets checked.
pub fn is_detecting(universe: usize, family: &[Vec<usize>], d: usize, cap: u64) -> Result<bool> {
    check_cap(universe, d, cap)?;
    if family.iter().flatten().any(|&x| x >= universe) {
        return Err(CvcError::structural("family set outside the universe"));
    }
    Ok(injective(universe, family, d))
}

fn injective(universe: usize, family: &[Vec<usize>], d: usize) -> bool {
    let total = d.pow(universe as u32);
    let mut seen = HashSet::with_capacity(total);
    let mut f = vec![0usize; universe];
    for _ in 0..total {
        let sums: Vec<usize> = family
            .iter()
            .map(|s| s.iter().map(|&x| f[x]).sum())
            .collect();
        if !seen.insert(sums) {
            return false;
        }
        for x in f.iter_mut() {
            *x += 1;
            if *x < d {
                break;
            }
            *x = 0;
        }
    }
    true
}

/// A verified family. Greedy mode starts from the singletons, repeatedly
/// replaces two sets by one subset of the universe while the property holds,
/// then drops sets that are redundant; the result is minimal under removal.
pub fn build_family(universe: usize, d: usize, mode: FamilyMode, cap: u64) -> Result<DetectingFamily> {
    let singletons: Vec<Vec<usize>> = (0..universe).map(|x| vec![x]).collect();
    let sets = match mode {
        FamilyMode::Singleton => singletons,
        FamilyMode::Greedy => {
            check_cap(universe, d, cap)?;
            shrink(universe, d, singletons)
        }
    };
    Ok(DetectingFamily { universe, d, sets })
}

fn shrink(universe: usize, d: usize, mut sets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let candidates: Vec<Vec<usize>> = (1..1usize << universe)
        .map(|mask| (0..universe).filter(|&x| mask >> x & 1 == 1).collect())
        .collect();
    'merge: loop {
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                for c in &candidates {
                    if sets.contains(c) {
                        continue;
                    }
                    let mut trial: Vec<Vec<usize>> = sets
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != i && t != j)
                        .map(|(_, s)| s.clone())
                        .collect();
                    trial.push(c.clone());
                    if injective(universe, &trial, d) {
                        sets = trial;
                        continue 'merge;
                    }
                }
            }
        }
        break;
    }
    let mut i = 0;
    while i < sets.len() {
        let mut trial = sets.clone();
        trial.remove(i);
        if injective(universe, &trial, d) {
            sets = trial;
        } else {
            i += 1;
        }
    }
    sets.sort();
    sets
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = DEFAULT_DETECTING_CAP;

    #[test]
    fn families_file_roundtrip() {
        let fams = vec![
            build_family(2, 4, FamilyMode::Greedy, CAP).unwrap(),
            build_family(1, 4, FamilyMode::Singleton, CAP).unwrap(),
        ];
        assert_eq!(parse_families(&write_families(&fams)).unwrap(), fams);
        assert!(parse_families("set 1\n").is_err());
    }

    #[test]
    fn small_families() {
        assert!(is_detecting(2, &[vec![0], vec![1]], 2, CAP).unwrap());
        assert!(!is_detecting(2, &[vec![0, 1]], 2, CAP).unwrap());
        assert!(is_detecting(0, &[], 3, CAP).unwrap());
        assert!(is_detecting(20, &[], 4, CAP).is_err());
        assert!(is_detecting(2, &[vec![2]], 2, CAP).is_err());
    }

    #[test]
    fn built_families_detect() {
        assert_eq!(
            build_family(3, 2, FamilyMode::Singleton, CAP).unwrap().sets,
            vec![vec![0], vec![1], vec![2]]
        );
        for mode in [FamilyMode::Singleton, FamilyMode::Greedy] {
            assert_eq!(build_family(1, 3, mode, CAP).unwrap().sets, vec![vec![0]]);
        }
        let g = build_family(4, 2, FamilyMode::Greedy, CAP).unwrap();
        assert!(g.is_detecting(CAP).unwrap());
        assert!(g.sets.len() <= 4);
    }

    #[test]
    fn file_roundtrip() {
        let f = DetectingFamily {
            universe: 3,
            d: 4,
            sets: vec![vec![0, 2], vec![1]],
        };
        assert_eq!(DetectingFamily::parse(&f.write(), 3, 4).unwrap(), f);
        assert!(DetectingFamily::parse("1 4\n", 3, 4).is_err());
    }
}
