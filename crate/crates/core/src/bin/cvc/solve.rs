use std::path::PathBuf;

use clap::{Args, ValueEnum};
use cvc_core::cutwidth::{
    cutwidth_of, find_arrangement, solve_cutdp, ArrangementMode, LinearArrangement,
    DEFAULT_EXACT_ARRANGEMENT_CAP, MAX_DP_CUTWIDTH,
};
use cvc_core::fes::{feedback_edge_set, solve_fes, DEFAULT_FES_CAP};
use cvc_core::io::{parse_instance, write_orientation};
use cvc_core::oracle::{
    solve_canonical, solve_exact, solve_pruned, ChoiceGroups, Solution, DEFAULT_EXACT_CAP,
    DEFAULT_SEARCH_CAP,
};
use cvc_core::vi::{solve_vi, solve_vi_min, Modulator};
use cvc_core::{CapacitatedGraph, CvcError, Orientation, Result};
use serde_json::json;

use crate::{read, write_out};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// fes when small, else cutdp along a heuristic arrangement, else oracle
    Auto,
    Oracle,
    Pruned,
    Canonical,
    Cutdp,
    Vi,
    Fes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Finder {
    Exact,
    Heuristic,
}

#[derive(Args)]
pub struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    algo: Algo,
    /// Decide "size at most k" instead of minimizing. `pruned` and
    /// `canonical` fall back to the budget in the instance header.
    #[arg(long)]
    k: Option<usize>,
    /// Arrangement file for cutdp.
    #[arg(long, conflicts_with = "find_arrangement")]
    arrangement: Option<PathBuf>,
    /// How cutdp computes an arrangement when none is given.
    #[arg(long, value_enum, default_value = "heuristic")]
    find_arrangement: Finder,
    /// Largest vertex count `--find-arrangement exact` accepts.
    #[arg(long, default_value_t = DEFAULT_EXACT_ARRANGEMENT_CAP)]
    arrangement_cap: usize,
    /// Modulator file for vi; an exact one is computed otherwise.
    #[arg(long)]
    modulator: Option<PathBuf>,
    /// Choice-group metadata, required by canonical.
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Where to write the orientation certificate.
    #[arg(long)]
    cert_out: Option<PathBuf>,
    /// Also print one JSON report line.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    #[arg(long, default_value_t = DEFAULT_FES_CAP)]
    fes_cap: usize,
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    search_cap: u64,
}

/// The answer of one solver run.
enum Answer {
    Min(Option<Solution>),
    Decision(Option<Orientation>),
}

pub fn run(a: SolveArgs) -> Result<bool> {
    let g = parse_instance(&read(&a.input)?)?;
    let algo = match a.algo {
        Algo::Auto => pick(&g, a.fes_cap),
        other => other,
    };
    let answer = match algo {
        Algo::Auto => unreachable!("resolved above"),
        Algo::Oracle => Answer::Min(solve_exact(&g, a.exact_cap)?),
        Algo::Fes => Answer::Min(solve_fes(&g, a.fes_cap)?),
        Algo::Cutdp => {
            let pi = match &a.arrangement {
                Some(p) => LinearArrangement::parse(&read(p)?, g.n())?,
                None => {
                    let mode = match a.find_arrangement {
                        Finder::Exact => ArrangementMode::Exact,
                        Finder::Heuristic => ArrangementMode::Heuristic,
                    };
                    find_arrangement(&g, mode, a.arrangement_cap)?
                }
            };
            Answer::Min(solve_cutdp(&g, &pi)?)
        }
        Algo::Vi => {
            let m = match &a.modulator {
                Some(p) => Some(Modulator::parse(&read(p)?, &g)?),
                None => None,
            };
            match a.k {
                Some(k) => Answer::Decision(
                    solve_vi(&g, k, m.as_ref())?.solution.map(|s| s.orientation),
                ),
                None => Answer::Min(solve_vi_min(&g, m.as_ref())?.solution),
            }
        }
        Algo::Pruned => {
            let k = budget(&a, &g)?;
            Answer::Decision(solve_pruned(&g, k, a.search_cap)?)
        }
        Algo::Canonical => {
            let k = budget(&a, &g)?;
            let path = a
                .meta
                .as_ref()
                .ok_or_else(|| CvcError::Config("canonical needs --meta".into()))?;
            let meta = ChoiceGroups::parse(&read(path)?, g.n())?;
            Answer::Decision(solve_canonical(&g, &meta, k)?)
        }
    };

    let (line, ok, size, cert) = match (answer, a.k, algo) {
        (Answer::Min(sol), Some(k), _) => {
            let sol = sol.filter(|s| s.size <= k);
            let yes = sol.is_some();
            (feasible(yes), yes, sol.as_ref().map(|s| s.size), sol.map(|s| s.orientation))
        }
        (Answer::Min(Some(sol)), None, _) => {
            (format!("MINSIZE {}", sol.size), true, Some(sol.size), Some(sol.orientation))
        }
        (Answer::Min(None), None, _) => ("INFEASIBLE".to_string(), false, None, None),
        (Answer::Decision(o), _, _) => {
            let size = o.as_ref().map(|o| o.size(g.n()));
            (feasible(o.is_some()), o.is_some(), size, o)
        }
    };
    println!("{line}");
    if let (Some(path), Some(o)) = (&a.cert_out, &cert) {
        write_out(Some(path), &write_orientation(&g, o))?;
    }
    if a.json {
        let report = json!({
            "command": "solve",
            "algo": format!("{algo:?}").to_lowercase(),
            "n": g.n(),
            "m": g.m(),
            "k": a.k,
            "result": ok,
            "size": size,
        });
        println!("{report}");
    }
    Ok(ok)
}

fn feasible(yes: bool) -> String {
    format!("FEASIBLE {}", if yes { "yes" } else { "no" })
}

fn budget(a: &SolveArgs, g: &CapacitatedGraph) -> Result<usize> {
    a.k.or(g.budget())
        .ok_or_else(|| CvcError::Config("this algorithm needs --k or a budget in the header".into()))
}

fn pick(g: &CapacitatedGraph, fes_cap: usize) -> Algo {
    if feedback_edge_set(g).len() <= fes_cap {
        return Algo::Fes;
    }
    match find_arrangement(g, ArrangementMode::Heuristic, 0) {
        Ok(pi) if cutwidth_of(g, &pi) <= MAX_DP_CUTWIDTH => Algo::Cutdp,
        _ => Algo::Oracle,
    }
}
