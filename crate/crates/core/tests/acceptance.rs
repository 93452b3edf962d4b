//! Acceptance run: one PASS or FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use cvc_core::bench::{layered_suite, WORK_CONSTANT};
use cvc_core::cutwidth::{find_arrangement, run_cutdp, ArrangementMode, DEFAULT_EXACT_ARRANGEMENT_CAP};
use cvc_core::detecting::{build_family, is_detecting, FamilyMode, DEFAULT_DETECTING_CAP};
use cvc_core::fes::{forest_dp, select_children, select_children_exhaustive, solve_fes, ForestInstance};
use cvc_core::gen::{gnp, layered, random_mcc, rng};
use cvc_core::oracle::{solve_canonical, solve_exact, solve_pruned, Solution, DEFAULT_SEARCH_CAP};
use cvc_core::reductions::{
    default_families, group_formula, reduce_mcc_td, reduce_sat_cw, reduce_sat_natural, reduce_smc,
    verify_cw_expression, verify_td_witness, Cnf1in3, GroupingMode, Literal, ReductionOutput,
    SmcInstance,
};
use cvc_core::vi::{block_selection_exhaustive, solve_block_selection, solve_vi, solve_vi_min, BlockOption};
use cvc_core::{verify_orientation, CapacitatedGraph};
use rand::Rng;

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn certified(g: &CapacitatedGraph, sol: &Solution, who: &str) -> Result<(), String> {
    let rep = verify_orientation(g, &sol.orientation).map_err(err)?;
    ensure!(rep.feasible && rep.size == sol.size, "{who} certificate fails: {rep:?}");
    Ok(())
}

/// The seeded G(n, p) family shared by criteria 1 and 3.
fn gnp_family() -> impl Iterator<Item = (String, CapacitatedGraph)> {
    [0.3, 0.5, 0.8].into_iter().flat_map(|p| {
        (0..80u64).map(move |seed| {
            let n = 2 + (seed % 8) as usize;
            (format!("G({n},{p}) seed {seed}"), gnp(n, p, seed).unwrap())
        })
    })
}

fn cross_solver() -> Check {
    let mut count = 0;
    for (name, g) in gnp_family() {
        let exact = solve_exact(&g, 20).map_err(err)?;
        let pi = find_arrangement(&g, ArrangementMode::Exact, DEFAULT_EXACT_ARRANGEMENT_CAP).map_err(err)?;
        let cut = run_cutdp(&g, &pi, true).map_err(err)?.solution;
        let vi = solve_vi_min(&g, None).map_err(err)?.solution;
        let fes = solve_fes(&g, 64).map_err(err)?;
        let sizes = [&exact, &cut, &vi, &fes].map(|s| s.as_ref().map(|s| s.size));
        ensure!(sizes.iter().all(|&s| s == sizes[0]), "{name}: exact/cutdp/vi/fes give {sizes:?}");
        for (who, sol) in [("exact", &exact), ("cutdp", &cut), ("vi", &vi), ("fes", &fes)] {
            if let Some(sol) = sol {
                certified(&g, sol, who).map_err(|e| format!("{name}: {e}"))?;
            }
        }
        count += 1;
    }
    Ok(format!("{count} instances, four solvers agree, all certificates verify"))
}

fn cutwidth_tables() -> Check {
    let widths: Vec<usize> = (4..=14).collect();
    let rows = layered_suite(&widths, 4, 0).map_err(err)?;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for r in &rows {
        ensure!(r.tables_exact(), "{}: a table differs from 2^width", r.name);
        ensure!(r.ctw == *r.widths.iter().max().unwrap(), "{}: width bookkeeping", r.name);
        ensure!(
            r.within_bound(WORK_CONSTANT),
            "{}: fitted C {} exceeds {}",
            r.name,
            r.c_fit,
            WORK_CONSTANT
        );
        lo = lo.min(r.c_fit);
        hi = hi.max(r.c_fit);
    }
    let (g, pi) = layered(18, 3, 18).map_err(err)?;
    let start = Instant::now();
    let run = run_cutdp(&g, &pi, true).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    ensure!(
        run.stats.iter().all(|s| s.table_len == 1 << s.width),
        "ctw 18: a table differs from 2^width"
    );
    ensure!(secs < 120.0, "ctw 18 took {secs:.1}s");
    let sol = run.solution.ok_or("ctw 18 instance came out infeasible")?;
    certified(&g, &sol, "ctw 18")?;
    Ok(format!(
        "ctw 4..14 exact tables, C = {WORK_CONSTANT} holds (fitted {lo:.4}..{hi:.4}); ctw 18 (n = {}) in {secs:.2}s",
        g.n()
    ))
}

fn block_selection() -> Check {
    let mut r = rng(3);
    let cases = 2000;
    for case in 0..cases {
        let dims = r.gen_range(1..=3);
        let residual: Vec<usize> = (0..dims).map(|_| r.gen_range(0..=4)).collect();
        let catalogs: Vec<Vec<BlockOption>> = (0..r.gen_range(1..=6))
            .map(|_| {
                (0..r.gen_range(1..=6))
                    .map(|_| BlockOption {
                        a: (0..dims).map(|_| r.gen_range(0..=2)).collect(),
                        d: r.gen_range(0..=5),
                    })
                    .collect()
            })
            .collect();
        // at most 6^6 combinations
        let got = solve_block_selection(&catalogs, &residual, None).map(|s| s.total_d);
        let want = block_selection_exhaustive(&catalogs, &residual);
        ensure!(got == want, "case {case}: DP {got:?}, exhaustive {want:?}");
    }
    let mut runs = 0;
    let mut largest = 0usize;
    for (name, g) in gnp_family() {
        let min = solve_exact(&g, 20).map_err(err)?.map(|s| s.size);
        let ks = [min.unwrap_or(g.n()), min.unwrap_or(0).saturating_sub(1)];
        let reports = [solve_vi_min(&g, None), solve_vi(&g, ks[0], None), solve_vi(&g, ks[1], None)];
        for rep in reports {
            let rep = rep.map_err(err)?;
            ensure!(
                rep.guess_exponent < 64 && rep.guesses as u128 <= 1u128 << rep.guess_exponent,
                "{name}: {} guesses over exponent {}",
                rep.guesses,
                rep.guess_exponent
            );
            largest = largest.max(rep.guesses);
            runs += 1;
        }
    }
    Ok(format!(
        "{cases} random selections match exhaustive; guess bound holds on {runs} vi runs (most guesses {largest})"
    ))
}

fn smc_equivalence() -> Check {
    let mut count = 0;
    let mut yes = 0;
    for m in 1..=3usize {
        for sets in 0..=4u32 {
            let combos = 1usize << (m * sets as usize);
            for code in 0..combos {
                let family: Vec<Vec<usize>> = (0..sets as usize)
                    .map(|j| (0..m).filter(|&e| code >> (j * m + e) & 1 == 1).collect())
                    .collect();
                for b in 1..=2 {
                    for k in 0..=3 {
                        let inst = SmcInstance {
                            m,
                            sets: family.clone(),
                            b,
                            k,
                        };
                        let out = reduce_smc(&inst).map_err(err)?;
                        let reduced = solve_pruned(&out.graph, out.budget, DEFAULT_SEARCH_CAP)
                            .map_err(err)?
                            .is_some();
                        let truth = inst.brute_force();
                        ensure!(reduced == truth, "{inst:?}: brute force {truth}, reduced {reduced}");
                        count += 1;
                        yes += usize::from(truth);
                    }
                }
            }
        }
    }
    Ok(format!("{count} SMC instances ({yes} yes), brute force equals pruned search"))
}

/// Every exactly-one formula with n ≤ 4 variables and m ≤ 3 clauses, as
/// multisets of clauses.
fn all_formulas() -> Vec<Cnf1in3> {
    let mut out = Vec::new();
    for n in 0..=4usize {
        let mut clauses = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for pol in 0..8u8 {
                        clauses.push([a, b, c].map(|v| Literal {
                            var: v,
                            positive: pol >> [a, b, c].iter().position(|&x| x == v).unwrap() & 1 == 1,
                        }));
                    }
                }
            }
        }
        out.push(Cnf1in3::new(n, Vec::new()).unwrap());
        let t = clauses.len();
        for i in 0..t {
            out.push(Cnf1in3::new(n, vec![clauses[i]]).unwrap());
            for j in i..t {
                out.push(Cnf1in3::new(n, vec![clauses[i], clauses[j]]).unwrap());
                for l in j..t {
                    out.push(Cnf1in3::new(n, vec![clauses[i], clauses[j], clauses[l]]).unwrap());
                }
            }
        }
    }
    out
}

fn canonical_yes(out: &ReductionOutput) -> Result<bool, String> {
    Ok(solve_canonical(&out.graph, &out.meta, out.budget).map_err(err)?.is_some())
}

fn sat_and_mcc_equivalence(formulas: &[Cnf1in3]) -> Check {
    let mut yes = 0;
    for psi in formulas {
        let truth = psi.brute_force().is_some();
        yes += usize::from(truth);
        for (gm, fm) in [
            (GroupingMode::Greedy, FamilyMode::Greedy),
            (GroupingMode::Trivial, FamilyMode::Singleton),
        ] {
            let grouping = group_formula(psi, gm);
            let families = default_families(&grouping, fm).map_err(err)?;
            let out = reduce_sat_natural(psi, &grouping, &families).map_err(err)?;
            let got = canonical_yes(&out)?;
            ensure!(got == truth, "natural ({gm:?}) on {:?}: truth {truth}, canonical {got}", psi.write());
        }
        let out = reduce_sat_cw(psi).map_err(err)?;
        let got = canonical_yes(&out)?;
        ensure!(got == truth, "cw on {:?}: truth {truth}, canonical {got}", psi.write());
    }
    let mut mcc_yes = 0;
    let instances = 60;
    for seed in 0..instances {
        // sparse draws for a fair share of no-instances
        let p = if seed % 2 == 0 { 0.15 } else { 0.5 };
        let inst = random_mcc(2, 2, p, seed).map_err(err)?;
        let truth = inst.brute_force().is_some();
        mcc_yes += usize::from(truth);
        let (out, _) = reduce_mcc_td(&inst).map_err(err)?;
        let got = canonical_yes(&out)?;
        ensure!(got == truth, "mcc seed {seed}: truth {truth}, canonical {got}");
    }
    Ok(format!(
        "{} formulas ({yes} satisfiable) agree for natural (two modes) and cw; {instances} MCC k=2 n=2 ({mcc_yes} yes) agree",
        formulas.len()
    ))
}

fn certificates(formulas: &[Cnf1in3]) -> Check {
    let mut max_labels = 0;
    for psi in formulas {
        let out = reduce_sat_cw(psi).map_err(err)?;
        let expr = out.expression.as_ref().ok_or("sat-cw emitted no expression")?;
        ensure!(verify_cw_expression(expr, &out.graph).map_err(err)?, "expression fails to replay for {:?}", psi.write());
        ensure!(expr.labels_used() <= 6, "{} labels for {:?}", expr.labels_used(), psi.write());
        max_labels = max_labels.max(expr.labels_used());
    }
    let depth_of = |k: usize, n: usize, seed: u64| -> Result<(usize, usize), String> {
        let inst = random_mcc(k, n, 0.6, seed).map_err(err)?;
        let (out, layout) = reduce_mcc_td(&inst).map_err(err)?;
        ensure!(
            layout.gamma == 2 * k * (2 * k - 1),
            "k={k}: {} choice instances, expected {}",
            layout.gamma,
            2 * k * (2 * k - 1)
        );
        let w = out.witness.as_ref().ok_or("mcc-td emitted no witness")?;
        let (valid, depth) = verify_td_witness(&out.graph, w).map_err(err)?;
        ensure!(valid, "k={k} seed {seed}: invalid witness");
        Ok((depth, layout.gamma))
    };
    let mut c0 = i64::MIN;
    for seed in 0..10 {
        let (d, _) = depth_of(2, 2, seed)?;
        c0 = c0.max(d as i64 - 32);
    }
    let mut k4 = Vec::new();
    for seed in 0..3 {
        let (d, gamma) = depth_of(4, 2, seed)?;
        ensure!(d as i64 <= 64 + c0, "k=4 depth {d} exceeds 64 + C0 = {}", 64 + c0);
        k4.push((d, gamma));
    }
    Ok(format!(
        "{} expressions replay with at most {max_labels} labels; C0 = {c0} at k=2 (gamma 12); k=4 depth {} <= {} (gamma {})",
        formulas.len(),
        k4[0].0,
        64 + c0,
        k4[0].1
    ))
}

fn detecting_families() -> Check {
    let mut built = 0;
    for universe in 0..=4 {
        for d in 1..=4 {
            for mode in [FamilyMode::Singleton, FamilyMode::Greedy] {
                let f = build_family(universe, d, mode, DEFAULT_DETECTING_CAP).map_err(err)?;
                ensure!(
                    f.is_detecting(DEFAULT_DETECTING_CAP).map_err(err)?,
                    "U={universe} d={d} {mode:?}: not detecting"
                );
                built += 1;
            }
        }
    }
    let counter = is_detecting(2, &[vec![0, 1]], 2, DEFAULT_DETECTING_CAP).map_err(err)?;
    ensure!(!counter, "{{{{1,2}}}} accepted as 2-detecting over a 2-element universe");
    Ok(format!("{built} built families detect; {{{{1,2}}}} rejected"))
}

fn forest_dp_check() -> Check {
    let mut r = rng(8);
    let forests = 150;
    for case in 0..forests {
        let n = r.gen_range(1..=12);
        let edges: Vec<(usize, usize)> = (1..n)
            .filter_map(|v| r.gen_bool(0.85).then(|| (r.gen_range(0..v), v)))
            .collect();
        let capacity: Vec<usize> = (0..n).map(|_| r.gen_range(0..=3)).collect();
        let preload: Vec<usize> = (0..n).map(|_| if r.gen_bool(0.3) { r.gen_range(1..=2) } else { 0 }).collect();
        let fi = ForestInstance::new(capacity.clone(), edges.clone(), preload.clone()).map_err(err)?;
        // preload j is an arc from capacity-0 source j, which can never
        // take an arc itself
        let sources = preload.iter().copied().max().unwrap_or(0);
        let mut cap = capacity;
        cap.extend(std::iter::repeat_n(0, sources));
        let mut all = edges;
        for (v, &p) in preload.iter().enumerate() {
            all.extend((0..p).map(|j| (n + j, v)));
        }
        let g = CapacitatedGraph::new(cap, all).map_err(err)?;
        let want = solve_exact(&g, 20).map_err(err)?.map(|s| s.size);
        let got = forest_dp(&fi).map(|s| s.size);
        ensure!(got == want, "forest {case}: dp {got:?}, exact {want:?}");
    }
    // every child pair over {none, 0, 1, 2} for degree up to 3, random
    // pairs above that
    let vals = [None, Some(0), Some(1), Some(2)];
    let pairs: Vec<(Option<usize>, Option<usize>)> =
        vals.iter().flat_map(|&o| vals.iter().map(move |&i| (o, i))).collect();
    let mut nodes = 0;
    for deg in 0..=6usize {
        let lists: Vec<Vec<(Option<usize>, Option<usize>)>> = if deg <= 3 {
            (0..pairs.len().pow(deg as u32))
                .map(|mut code| {
                    (0..deg)
                        .map(|_| {
                            let p = pairs[code % pairs.len()];
                            code /= pairs.len();
                            p
                        })
                        .collect()
                })
                .collect()
        } else {
            (0..3000).map(|_| (0..deg).map(|_| pairs[r.gen_range(1..pairs.len())]).collect()).collect()
        };
        for children in &lists {
            for base in 0..=2 {
                for cap in 0..=deg + 2 {
                    let got = select_children(children, base, cap).map(|(c, _)| c);
                    let want = select_children_exhaustive(children, base, cap);
                    ensure!(got == want, "{children:?} base {base} cap {cap}: {got:?} vs {want:?}");
                    nodes += 1;
                }
            }
        }
    }
    Ok(format!("{forests} forests match exact; {nodes} node selections match exhaustive"))
}

fn main() -> ExitCode {
    let formulas = all_formulas();
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Check + '_>)> = vec![
        ("cross-solver agreement", Box::new(cross_solver)),
        ("cutwidth table exactness and work bound", Box::new(cutwidth_tables)),
        ("block-selection exactness", Box::new(block_selection)),
        ("SMC reduction equivalence", Box::new(smc_equivalence)),
        ("SAT and MCC reduction equivalence", Box::new(|| sat_and_mcc_equivalence(&formulas))),
        ("certificates", Box::new(|| certificates(&formulas))),
        ("detecting families", Box::new(detecting_families)),
        ("forest DP", Box::new(forest_dp_check)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>().map(String::as_str).or(p.downcast_ref::<&str>().copied()))));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
