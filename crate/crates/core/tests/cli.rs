//! End-to-end runs of the `cvc` binary: outputs and the exit-code contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cvc_core::fes::feedback_edge_set;
use cvc_core::io::parse_instance;
use tempfile::TempDir;

const TRIANGLE: &str = "cvc 3 3\nv 1 1\nv 2 1\nv 3 1\ne 1 2\ne 2 3\ne 1 3\n";
const K2: &str = "cvc 2 1\nv 1 1\nv 2 1\ne 1 2\n";
const EDGELESS: &str = "cvc 4 0\nv 1 0\nv 2 2\nv 3 1\nv 4 0\n";

fn cvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(TempDir::new().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).to_str().unwrap().to_string()
    }
}

fn read(p: impl AsRef<Path>) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn triangle_oracle_minsize() {
    let d = Dir::new();
    let g = d.file("t.cvc", TRIANGLE);
    let o = cvc(&["solve", "--input", &g, "--algo", "oracle"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "MINSIZE 3\n");
}

#[test]
fn k2_cutdp_budget_zero_is_no() {
    let d = Dir::new();
    let g = d.file("k2.cvc", K2);
    let o = cvc(&["solve", "--input", &g, "--algo", "cutdp", "--k", "0"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "FEASIBLE no\n");
}

#[test]
fn edgeless_is_zero_for_every_algorithm() {
    let d = Dir::new();
    let g = d.file("e.cvc", EDGELESS);
    for algo in ["auto", "oracle", "cutdp", "vi", "fes"] {
        let o = cvc(&["solve", "--input", &g, "--algo", algo]);
        assert_eq!(code(&o), 0, "{algo}");
        assert_eq!(stdout(&o), "MINSIZE 0\n", "{algo}");
    }
    for algo in ["pruned", "canonical"] {
        let meta = d.file("e.meta", "forced\nfree 1 2 3 4\n");
        let o = cvc(&["solve", "--input", &g, "--algo", algo, "--k", "0", "--meta", &meta]);
        assert_eq!(stdout(&o), "FEASIBLE yes\n", "{algo}");
    }
}

#[test]
fn certificates_from_solve_verify() {
    let d = Dir::new();
    let g = d.file("t.cvc", TRIANGLE);
    let cert = d.path("t.cert");
    for algo in ["oracle", "cutdp", "vi", "fes", "auto"] {
        let o = cvc(&["solve", "--input", &g, "--algo", algo, "--cert-out", &cert]);
        assert_eq!(code(&o), 0, "{algo}");
        let v = cvc(&["verify", "orientation", "--input", &g, "--cert", &cert, "--k", "3"]);
        assert_eq!(code(&v), 0, "{algo}");
        assert!(stdout(&v).contains("SIZE 3\n"));
    }
}

#[test]
fn arrangement_sources() {
    let d = Dir::new();
    let g = d.file("t.cvc", TRIANGLE);
    let o = cvc(&["solve", "--input", &g, "--algo", "cutdp", "--find-arrangement", "exact"]);
    assert_eq!(stdout(&o), "MINSIZE 3\n");
    let pi = d.file("t.arr", "arrangement 3\n3 1 2\n");
    let o = cvc(&["solve", "--input", &g, "--algo", "cutdp", "--arrangement", &pi]);
    assert_eq!(stdout(&o), "MINSIZE 3\n");
    let o = cvc(&[
        "solve", "--input", &g, "--algo", "cutdp", "--find-arrangement", "exact",
        "--arrangement-cap", "2",
    ]);
    assert_eq!(code(&o), 2, "exceeding a cap is a refusal");
}

#[test]
fn infeasible_and_json() {
    let d = Dir::new();
    let g = d.file("k2.cvc", "cvc 2 1\nv 1 0\nv 2 0\ne 1 2\n");
    let o = cvc(&["solve", "--input", &g, "--algo", "oracle", "--json"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("INFEASIBLE"));
    let report: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(report["result"], false);
    assert_eq!(report["command"], "solve");
}

#[test]
fn errors_exit_two() {
    let d = Dir::new();
    let bad = d.file("bad.cvc", "cvc 2 1\nv 1 1\nv 2 1\ne 1 1\n");
    let o = cvc(&["solve", "--input", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error:"));
    assert_eq!(code(&cvc(&["solve", "--input", &d.path("missing.cvc")])), 2);
    let g = d.file("k2.cvc", K2);
    assert_eq!(code(&cvc(&["solve", "--input", &g, "--algo", "canonical", "--k", "1"])), 2);
    assert_eq!(code(&cvc(&["solve", "--input", &g, "--algo", "pruned"])), 2);
    assert_eq!(code(&cvc(&["solve", "--input", &g, "--algo", "nonsense"])), 2);
    assert_eq!(code(&cvc(&[])), 2);
}

#[test]
fn verify_orientation_contract() {
    let d = Dir::new();
    let g = d.file("t.cvc", TRIANGLE);
    let good = d.file("good", "a 1 2\na 2 3\na 3 1\n");
    let o = cvc(&["verify", "orientation", "--input", &g, "--cert", &good]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "SIZE 3\nVALID\n");
    let tampered = d.file("bad", "a 1 2\na 2 3\na 1 3\n");
    let o = cvc(&["verify", "orientation", "--input", &g, "--cert", &tampered]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("VIOLATION vertex 3 indegree 2 capacity 1"));
    // within capacity but over the budget
    assert_eq!(code(&cvc(&["verify", "orientation", "--input", &g, "--cert", &good, "--k", "2"])), 1);
    let missing = d.file("short", "a 1 2\n");
    assert_eq!(code(&cvc(&["verify", "orientation", "--input", &g, "--cert", &missing])), 2);
}

#[test]
fn verify_expressions() {
    let d = Dir::new();
    let g = d.file("k2.cvc", K2);
    let ok = d.file("ok", "intro 1 1\nintro 2 2\njoin 1 2\n");
    assert_eq!(code(&cvc(&["verify", "expression", "--input", &g, "--cert", &ok])), 0);
    let wrong = d.file("wrong", "intro 1 1\nintro 2 2\n");
    assert_eq!(code(&cvc(&["verify", "expression", "--input", &g, "--cert", &wrong])), 1);
    let seven = d.file("seven", "intro 1 7\nintro 2 2\njoin 7 2\n");
    assert_eq!(code(&cvc(&["verify", "expression", "--input", &g, "--cert", &seven])), 2);
}

#[test]
fn verify_cutwidth_and_witness() {
    let d = Dir::new();
    let g = d.file("t.cvc", TRIANGLE);
    let pi = d.file("t.arr", "arrangement 3\n1 2 3\n");
    let o = cvc(&["verify", "cutwidth", "--input", &g, "--arrangement", &pi, "--k", "2"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "CUTWIDTH 2\nVALID\n"));
    assert_eq!(code(&cvc(&["verify", "cutwidth", "--input", &g, "--arrangement", &pi, "--k", "1"])), 1);
    let path = d.file("w", "parent 1 0\nparent 2 1\nparent 3 2\n");
    let o = cvc(&["verify", "witness", "--input", &g, "--cert", &path]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "DEPTH 3\nVALID\n"));
    // 2 and 3 are adjacent siblings
    let star = d.file("s", "parent 1 0\nparent 2 1\nparent 3 1\n");
    assert_eq!(code(&cvc(&["verify", "witness", "--input", &g, "--cert", &star])), 1);
}

#[test]
fn reduce_smc_example() {
    let d = Dir::new();
    let smc = d.file("x.smc", "smc 1 1 1 1\nset 1 1\n");
    let out = d.path("x.cvc");
    let o = cvc(&["reduce", "smc", "--input", &smc, "--output", &out]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("BUDGET 2\n"));
    let g = parse_instance(&read(&out)).unwrap();
    assert_eq!(g.budget(), Some(2));
    assert_eq!((g.degree(0), g.capacity(0), g.capacity(1)), (4, 3, 1));
    let o = cvc(&["solve", "--input", &out, "--algo", "pruned"]);
    assert_eq!(stdout(&o), "FEASIBLE yes\n");

    // stdout carries the instance, the summary moves to stderr
    let o = cvc(&["reduce", "smc", "--input", &smc]);
    assert_eq!(stdout(&o), read(&out));
    assert!(String::from_utf8_lossy(&o.stderr).contains("BUDGET 2"));

    let bad = d.file("bad.smc", "smc 1 1 1 1\nset 1 2\n");
    assert_eq!(code(&cvc(&["reduce", "smc", "--input", &bad])), 2);
}

#[test]
fn reduce_sat_cw_single_clause() {
    let d = Dir::new();
    let cnf = d.file("x.cnf", "p cnf 3 1\n1 2 3 0\n");
    let (out, meta, expr) = (d.path("x.cvc"), d.path("x.meta"), d.path("x.expr"));
    let o = cvc(&[
        "reduce", "sat-cw", "--input", &cnf, "--output", &out, "--meta", &meta, "--cert-out", &expr,
    ]);
    assert_eq!(code(&o), 0);
    assert!(read(&out).lines().next().unwrap().ends_with(" 11"));
    assert_eq!(code(&cvc(&["verify", "expression", "--input", &out, "--cert", &expr])), 0);
    let o = cvc(&["solve", "--input", &out, "--algo", "canonical", "--meta", &meta]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "FEASIBLE yes\n"));
}

#[test]
fn reduce_sat_natural_contradiction() {
    let d = Dir::new();
    // whichever value x2 takes, x1 and x3 are false and one clause has no true literal
    let cnf = d.file("x.cnf", "p cnf 4 2\n1 2 3 0\n1 -2 3 0\n");
    let (out, meta, fam) = (d.path("x.cvc"), d.path("x.meta"), d.path("x.fam"));
    let o = cvc(&[
        "reduce", "sat-natural", "--input", &cnf, "--output", &out, "--meta", &meta,
        "--cert-out", &fam,
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&cvc(&["verify", "families", "--input", &fam])), 0);
    let o = cvc(&["solve", "--input", &out, "--algo", "canonical", "--meta", &meta]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "FEASIBLE no\n"));
}

#[test]
fn reduce_mcc_td_counts() {
    let d = Dir::new();
    let mcc = d.file("x.mcc", "mcc 2 2\nclass 1 1 2\nclass 2 3 4\ne 1 3\n");
    let (out, meta, wit) = (d.path("x.cvc"), d.path("x.meta"), d.path("x.wit"));
    let o = cvc(&[
        "reduce", "mcc-td", "--input", &mcc, "--output", &out, "--meta", &meta, "--cert-out", &wit,
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("CHOICE_INSTANCES 12\n"));
    let report: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(report["choice_instances"], 12);
    let o = cvc(&["verify", "witness", "--input", &out, "--cert", &wit, "--k", "24"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn gen_is_deterministic() {
    let d = Dir::new();
    let (a, b) = (d.path("a"), d.path("b"));
    for p in [&a, &b] {
        let o = cvc(&["gen", "--seed", "7", "--output", p, "gnp", "--n", "6", "--p", "0.5"]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(read(&a), read(&b));
    let c = d.path("c");
    cvc(&["gen", "--seed", "8", "--output", &c, "gnp", "--n", "6", "--p", "0.5"]);
    assert_ne!(read(&a), read(&c));
}

#[test]
fn gen_models() {
    let d = Dir::new();
    let out = d.path("g");
    cvc(&["gen", "--output", &out, "gnp", "--n", "5", "--p", "0"]);
    assert_eq!(parse_instance(&read(&out)).unwrap().m(), 0);

    cvc(&["gen", "--seed", "3", "--output", &out, "sparse", "--n", "10", "--fes", "3"]);
    let g = parse_instance(&read(&out)).unwrap();
    assert_eq!(feedback_edge_set(&g).len(), 3);

    let arr = d.path("arr");
    cvc(&["gen", "--output", &out, "layered", "--width", "3", "--layers", "4", "--arrangement", &arr]);
    let o = cvc(&["verify", "cutwidth", "--input", &out, "--arrangement", &arr]);
    assert!(stdout(&o).starts_with("CUTWIDTH 3\n"));

    for model in [
        &["cnf", "--n", "4", "--m", "3"][..],
        &["mcc", "--classes", "2", "--n", "2"],
        &["smc", "--m", "3", "--sets", "4", "--b", "2", "--k", "2"],
    ] {
        let o = cvc(&[&["gen"][..], model].concat());
        assert_eq!(code(&o), 0, "{model:?}");
        assert!(!o.stdout.is_empty());
    }

    // 4 vertices have at most 3 extra edges over a spanning tree
    assert_eq!(code(&cvc(&["gen", "sparse", "--n", "4", "--fes", "4"])), 2);
    assert_eq!(code(&cvc(&["gen", "gnp", "--n", "4", "--p", "1.5"])), 2);
}

#[test]
fn bench_tables_double() {
    let o = cvc(&["bench", "--widths", "1,8,9", "--layers", "3", "--json"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    let max_table = |r: &serde_json::Value| {
        r["tables"].as_array().unwrap().iter().map(|t| t.as_u64().unwrap()).max().unwrap()
    };
    assert_eq!(max_table(&rows[0]), 2);
    assert!(rows[0]["tables"].as_array().unwrap()[1..rows[0]["n"].as_u64().unwrap() as usize]
        .iter()
        .all(|t| t == 2));
    assert_eq!((max_table(&rows[1]), max_table(&rows[2])), (256, 512));
    assert_eq!(report["ok"], true);
}
