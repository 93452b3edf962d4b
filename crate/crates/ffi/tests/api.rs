//! The C surface driven from Rust, plus one C program built against the
//! generated header.

use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cvc_ffi::*;

const TRIANGLE: &str = "cvc 3 3\nv 1 1\nv 2 1\nv 3 1\ne 1 2\ne 2 3\ne 1 3\n";

fn parse(text: &str) -> *mut CvcGraph {
    let text = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cvc_graph_parse(text.as_ptr(), &mut g) }, CvcStatus::Ok);
    g
}

fn last_error() -> String {
    let p = cvc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn solve_and_verify_triangle() {
    let g = parse(TRIANGLE);
    unsafe {
        assert_eq!((cvc_graph_vertex_count(g), cvc_graph_edge_count(g)), (3, 3));
        for algo in [CvcAlgo::Oracle, CvcAlgo::Cutdp, CvcAlgo::Vi, CvcAlgo::Fes] {
            let mut size = 0;
            let mut heads = [usize::MAX; 3];
            assert_eq!(cvc_solve(g, algo, &mut size, heads.as_mut_ptr()), CvcStatus::Ok);
            assert_eq!(size, 3, "{algo:?}");
            let mut checked = 0;
            assert_eq!(cvc_verify(g, heads.as_ptr(), &mut checked), CvcStatus::Ok);
            assert_eq!(checked, 3);
        }
        assert_eq!(cvc_decide(g, 2, CvcAlgo::Pruned, ptr::null_mut()), CvcStatus::No);
        assert_eq!(cvc_decide(g, 3, CvcAlgo::Pruned, ptr::null_mut()), CvcStatus::Ok);
        assert_eq!(cvc_decide(g, 3, CvcAlgo::Vi, ptr::null_mut()), CvcStatus::Ok);
        let mut size = 0;
        assert_eq!(cvc_solve(g, CvcAlgo::Pruned, &mut size, ptr::null_mut()), CvcStatus::Config);
        cvc_graph_free(g);
    }
}

#[test]
fn verify_rejects() {
    let g = parse(TRIANGLE);
    unsafe {
        // vertex 1 takes two edges with capacity 1
        let overloaded = [1usize, 1, 2];
        let mut size = 0;
        assert_eq!(cvc_verify(g, overloaded.as_ptr(), &mut size), CvcStatus::No);
        let not_an_endpoint = [2usize, 1, 0];
        assert_eq!(cvc_verify(g, not_an_endpoint.as_ptr(), ptr::null_mut()), CvcStatus::Structural);
        assert!(!last_error().is_empty());
        cvc_graph_free(g);
    }
}

#[test]
fn build_from_arrays() {
    let cap = [1usize, 0];
    let edges = [0usize, 1];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(cvc_graph_new(2, cap.as_ptr(), 1, edges.as_ptr(), &mut g), CvcStatus::Ok);
        let mut size = 0;
        let mut heads = [9usize];
        assert_eq!(cvc_solve(g, CvcAlgo::Oracle, &mut size, heads.as_mut_ptr()), CvcStatus::Ok);
        assert_eq!((size, heads[0]), (1, 0));

        let mut budget = 0;
        assert_eq!(cvc_graph_budget(g, &mut budget), CvcStatus::No);

        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(cvc_graph_write(g, &mut text), CvcStatus::Ok);
        assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "cvc 2 1\nv 1 1\nv 2 0\ne 1 2\n");
        cvc_string_free(text);
        cvc_graph_free(g);

        let mut empty = ptr::null_mut();
        assert_eq!(cvc_graph_new(0, ptr::null(), 0, ptr::null(), &mut empty), CvcStatus::Ok);
        assert_eq!(cvc_solve(empty, CvcAlgo::Fes, &mut size, ptr::null_mut()), CvcStatus::Ok);
        assert_eq!(size, 0);
        cvc_graph_free(empty);

        let loop_edge = [0usize, 0];
        let mut bad = ptr::null_mut();
        assert_eq!(cvc_graph_new(2, cap.as_ptr(), 1, loop_edge.as_ptr(), &mut bad), CvcStatus::Structural);
        assert!(bad.is_null());
    }
}

#[test]
fn infeasible_is_no() {
    let g = parse("cvc 2 1\nv 1 0\nv 2 0\ne 1 2\n");
    let mut size = 7;
    unsafe {
        assert_eq!(cvc_solve(g, CvcAlgo::Oracle, &mut size, ptr::null_mut()), CvcStatus::No);
        assert_eq!(size, 7, "untouched on No");
        cvc_graph_free(g);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut g = ptr::null_mut();
    unsafe {
        let bad = CString::new("cvc 2 1\nv 1 1\nv 2 1\ne 1 1\n").unwrap();
        assert_eq!(cvc_graph_parse(bad.as_ptr(), &mut g), CvcStatus::Parse);
        assert!(last_error().contains("line 4"));
        assert!(g.is_null());

        assert_eq!(cvc_graph_parse(ptr::null(), &mut g), CvcStatus::NullArgument);
        assert_eq!(last_error(), "text is null");

        let not_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(cvc_graph_parse(not_utf8.as_ptr().cast(), &mut g), CvcStatus::Utf8);

        let mut size = 0;
        assert_eq!(cvc_solve(ptr::null(), CvcAlgo::Oracle, &mut size, ptr::null_mut()), CvcStatus::NullArgument);
        assert_eq!((cvc_graph_vertex_count(ptr::null()), cvc_graph_edge_count(ptr::null())), (0, 0));
        cvc_graph_free(ptr::null_mut());
        cvc_string_free(ptr::null_mut());
    }
}

#[test]
fn caps_are_refusals() {
    // a star: no cycles for fes, too many vertices for the oracle
    let n = 25;
    let text = {
        let mut t = format!("cvc {n} {}\n", n - 1);
        for v in 1..=n {
            t += &format!("v {v} 1\n");
        }
        for v in 2..=n {
            t += &format!("e 1 {v}\n");
        }
        t
    };
    let g = parse(&text);
    let mut size = 0;
    unsafe {
        assert_eq!(cvc_solve(g, CvcAlgo::Oracle, &mut size, ptr::null_mut()), CvcStatus::CapExceeded);
        assert!(last_error().contains("cap"));
        assert_eq!(cvc_solve(g, CvcAlgo::Fes, &mut size, ptr::null_mut()), CvcStatus::Ok);
        assert_eq!(size, n - 1);
        cvc_graph_free(g);
    }
}

#[test]
fn errors_are_per_thread() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(cvc_graph_parse(ptr::null(), &mut g), CvcStatus::NullArgument);
    }
    let other = std::thread::spawn(|| cvc_last_error().is_null()).join().unwrap();
    assert!(other);
    assert_eq!(last_error(), "text is null");
}

#[test]
fn reductions_carry_budget() {
    let cases = [
        (CvcReduction::Smc, "smc 1 1 1 1\nset 1 1\n", 2),
        (CvcReduction::SatCw, "p cnf 3 1\n1 2 3 0\n", 11),
    ];
    for (kind, src, budget) in cases {
        let src = CString::new(src).unwrap();
        let mut g = ptr::null_mut();
        unsafe {
            assert_eq!(cvc_reduce(kind, src.as_ptr(), &mut g), CvcStatus::Ok);
            let mut k = 0;
            assert_eq!(cvc_graph_budget(g, &mut k), CvcStatus::Ok);
            assert_eq!(k, budget, "{kind:?}");
            cvc_graph_free(g);
        }
    }
    let smc = CString::new("smc 1 1 1 1\nset 1 1\n").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(cvc_reduce(CvcReduction::Smc, smc.as_ptr(), &mut g), CvcStatus::Ok);
        assert_eq!(cvc_decide(g, 2, CvcAlgo::Pruned, ptr::null_mut()), CvcStatus::Ok);
        cvc_graph_free(g);
        let mcc = CString::new("mcc 2 1\nclass 1 1\nclass 2 2\n").unwrap();
        assert_eq!(cvc_reduce(CvcReduction::MccTd, mcc.as_ptr(), &mut g), CvcStatus::Ok);
        cvc_graph_free(g);
        let wrong = CString::new("p cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!(cvc_reduce(CvcReduction::Smc, wrong.as_ptr(), &mut g), CvcStatus::Parse);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(cvc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "cvc.h"

int main(void) {
    const char *text = "cvc 3 3\nv 1 1\nv 2 1\nv 3 1\ne 1 2\ne 2 3\ne 1 3\n";
    CvcGraph *g = NULL;
    if (cvc_graph_parse(text, &g) != CVC_STATUS_OK) return 10;
    size_t size = 0, heads[3];
    if (cvc_solve(g, CVC_ALGO_CUTDP, &size, heads) != CVC_STATUS_OK) return 11;
    if (cvc_verify(g, heads, NULL) != CVC_STATUS_OK) return 12;
    if (cvc_decide(g, 2, CVC_ALGO_PRUNED, NULL) != CVC_STATUS_NO) return 13;
    cvc_graph_free(g);
    if (cvc_graph_parse("cvc 1", &g) != CVC_STATUS_PARSE) return 14;
    printf("%zu %s\n", size, cvc_last_error());
    return 0;
}
"#;

/// `target/<profile>` from the test executable in `target/<profile>/deps`.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let dir = profile_dir();
    let lib = dir.join("libcvc_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let work = std::env::temp_dir().join(format!("cvc-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    let bin = work.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap_or_else(|e| panic!("cannot run {cc}: {e}"));
    assert!(status.success(), "C build failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("3 line 1"), "{stdout}");
    std::fs::remove_dir_all(&work).ok();
}
