//! C interface to `cvc_core`.
//!
//! Graphs live behind an opaque [`CvcGraph`] handle. Every fallible call
//! returns a [`CvcStatus`]; for codes other than `Ok` and `No` a message is
//! kept per thread and read with [`cvc_last_error`]. Vertex and edge ids are
//! 0-based here, unlike the 1-based text formats.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cvc_core::cutwidth::{find_arrangement, solve_cutdp, ArrangementMode};
use cvc_core::detecting::FamilyMode;
use cvc_core::fes::{solve_fes, DEFAULT_FES_CAP};
use cvc_core::io::{parse_instance, write_instance};
use cvc_core::oracle::{solve_exact, solve_pruned, Solution, DEFAULT_EXACT_CAP, DEFAULT_SEARCH_CAP};
use cvc_core::reductions::{
    default_families, group_formula, reduce_mcc_td, reduce_sat_cw, reduce_sat_natural, reduce_smc,
    Cnf1in3, GroupingMode, MccInstance, ReductionOutput, SmcInstance,
};
use cvc_core::vi::{solve_vi, solve_vi_min};
use cvc_core::{verify_orientation, CapacitatedGraph, CvcError, Orientation};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CvcStatus {
    /// Success, or "yes" for decisions and checks.
    Ok = 0,
    /// Infeasible, over budget, or a failed check.
    No = 1,
    NullArgument = 2,
    Parse = 3,
    Structural = 4,
    CapExceeded = 5,
    Config = 6,
    Io = 7,
    /// A string argument is not valid UTF-8.
    Utf8 = 8,
    /// A bug inside the library.
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CvcAlgo {
    /// Subset enumeration, up to 20 vertices.
    Oracle = 0,
    /// Cutwidth DP along a heuristic arrangement.
    Cutdp = 1,
    /// Vertex-integrity algorithm with a computed modulator.
    Vi = 2,
    /// Feedback-edge-set branching, up to 22 extra edges.
    Fes = 3,
    /// Budgeted search; only valid for [`cvc_decide`].
    Pruned = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CvcReduction {
    /// Set multicover file.
    Smc = 0,
    /// DIMACS exactly-one formula, greedy grouping and families.
    SatNatural = 1,
    /// DIMACS exactly-one formula, clique-width construction.
    SatCw = 2,
    /// Multicolored clique file.
    MccTd = 3,
}

/// Opaque capacitated graph, optionally carrying a budget.
pub struct CvcGraph {
    inner: CapacitatedGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CvcStatus, String);

impl From<CvcError> for Failure {
    fn from(e: CvcError) -> Self {
        let status = match e {
            CvcError::Parse { .. } => CvcStatus::Parse,
            CvcError::Structural(_) => CvcStatus::Structural,
            CvcError::CapExceeded { .. } => CvcStatus::CapExceeded,
            CvcError::Config(_) => CvcStatus::Config,
            CvcError::Io(_) => CvcStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CvcStatus::NullArgument, format!("{what} is null"))
}

fn set_error(msg: String) {
    // interior NULs would truncate the C string anyway
    let msg = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

/// Runs `f`, recording the message of any failure or panic.
fn guard(f: impl FnOnce() -> Result<CvcStatus, Failure>) -> CvcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            CvcStatus::Panic
        }
    }
}

unsafe fn graph<'a>(g: *const CvcGraph) -> Result<&'a CapacitatedGraph, Failure> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null("graph"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("text"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(CvcStatus::Utf8, e.to_string()))
}

unsafe fn put_graph(out: *mut *mut CvcGraph, g: CapacitatedGraph) -> Result<CvcStatus, Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(CvcGraph { inner: g }));
    Ok(CvcStatus::Ok)
}

/// Copies the head of every edge into `heads_out` (length `m`) unless it is null.
unsafe fn put_heads(o: &Orientation, heads_out: *mut usize) {
    if !heads_out.is_null() {
        ptr::copy_nonoverlapping(o.heads().as_ptr(), heads_out, o.heads().len());
    }
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cvc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated version string.
#[no_mangle]
pub extern "C" fn cvc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph from `n` capacities and `m` edges given as `2m` endpoint
/// ids.
///
/// # Safety
/// `capacity` must point to `n` values and `edges` to `2 * m` values (either
/// may be null when its length is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_new(
    n: usize,
    capacity: *const usize,
    m: usize,
    edges: *const usize,
    out: *mut *mut CvcGraph,
) -> CvcStatus {
    guard(|| {
        if (capacity.is_null() && n > 0) || (edges.is_null() && m > 0) {
            return Err(null("capacity or edge array"));
        }
        let cap = if n == 0 { Vec::new() } else { std::slice::from_raw_parts(capacity, n).to_vec() };
        let ends = if m == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * m) };
        let g = CapacitatedGraph::new(cap, ends.chunks_exact(2).map(|e| (e[0], e[1])))?;
        put_graph(out, g)
    })
}

/// Parses the `cvc <n> <m> [<k>]` text format.
///
/// # Safety
/// `text_in` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_parse(text_in: *const c_char, out: *mut *mut CvcGraph) -> CvcStatus {
    guard(|| put_graph(out, parse_instance(text(text_in)?)?))
}

/// Writes the graph in the text format. Free the string with
/// [`cvc_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_write(g: *const CvcGraph, out: *mut *mut c_char) -> CvcStatus {
    guard(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(write_instance(g)).unwrap().into_raw();
        Ok(CvcStatus::Ok)
    })
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_free(g: *mut CvcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cvc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Vertex count; 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_vertex_count(g: *const CvcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.n())
}

/// Edge count; 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_edge_count(g: *const CvcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.m())
}

/// Stores the budget in `out`; `No` when the graph carries none.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_budget(g: *const CvcGraph, out: *mut usize) -> CvcStatus {
    guard(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        match g.budget() {
            Some(k) => {
                *out = k;
                Ok(CvcStatus::Ok)
            }
            None => Ok(CvcStatus::No),
        }
    })
}

fn minimize(g: &CapacitatedGraph, algo: CvcAlgo) -> Result<Option<Solution>, Failure> {
    Ok(match algo {
        CvcAlgo::Oracle => solve_exact(g, DEFAULT_EXACT_CAP)?,
        CvcAlgo::Cutdp => solve_cutdp(g, &find_arrangement(g, ArrangementMode::Heuristic, 0)?)?,
        CvcAlgo::Vi => solve_vi_min(g, None)?.solution,
        CvcAlgo::Fes => solve_fes(g, DEFAULT_FES_CAP)?,
        CvcAlgo::Pruned => {
            return Err(Failure(CvcStatus::Config, "pruned search needs a budget; use cvc_decide".into()))
        }
    })
}

/// Minimum size of a feasible orientation. Returns `No` when none exists.
/// On `Ok`, `size_out` receives the size and `heads_out` (length `m`, may
/// be null) the head of every edge.
///
/// # Safety
/// `g` must be a live handle, `size_out` writable, `heads_out` null or
/// writable for `m` values, and `algo` a declared [`CvcAlgo`] value.
#[no_mangle]
pub unsafe extern "C" fn cvc_solve(
    g: *const CvcGraph,
    algo: CvcAlgo,
    size_out: *mut usize,
    heads_out: *mut usize,
) -> CvcStatus {
    guard(|| {
        let g = graph(g)?;
        if size_out.is_null() {
            return Err(null("size_out"));
        }
        match minimize(g, algo)? {
            Some(sol) => {
                *size_out = sol.size;
                put_heads(&sol.orientation, heads_out);
                Ok(CvcStatus::Ok)
            }
            None => Ok(CvcStatus::No),
        }
    })
}

/// Whether a feasible orientation of size at most `k` exists; `heads_out`
/// (length `m`, may be null) receives one on `Ok`.
///
/// # Safety
/// `g` must be a live handle, `heads_out` null or writable for `m` values,
/// and `algo` a declared [`CvcAlgo`] value.
#[no_mangle]
pub unsafe extern "C" fn cvc_decide(
    g: *const CvcGraph,
    k: usize,
    algo: CvcAlgo,
    heads_out: *mut usize,
) -> CvcStatus {
    guard(|| {
        let g = graph(g)?;
        let found = match algo {
            CvcAlgo::Pruned => solve_pruned(g, k, DEFAULT_SEARCH_CAP)?,
            CvcAlgo::Vi => solve_vi(g, k, None)?.solution.map(|s| s.orientation),
            other => minimize(g, other)?.filter(|s| s.size <= k).map(|s| s.orientation),
        };
        match found {
            Some(o) => {
                put_heads(&o, heads_out);
                Ok(CvcStatus::Ok)
            }
            None => Ok(CvcStatus::No),
        }
    })
}

/// Checks the orientation given by one head per edge. `Ok` when every
/// capacity holds, `No` otherwise; a head that is not an endpoint of its
/// edge is a `Structural` error. `size_out` (may be null) receives the size.
///
/// # Safety
/// `g` must be a live handle, `heads` must point to `m` values (or be null
/// when `m` is 0), and `size_out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_verify(
    g: *const CvcGraph,
    heads: *const usize,
    size_out: *mut usize,
) -> CvcStatus {
    guard(|| {
        let g = graph(g)?;
        if heads.is_null() && g.m() > 0 {
            return Err(null("heads"));
        }
        let heads = if g.m() == 0 { Vec::new() } else { std::slice::from_raw_parts(heads, g.m()).to_vec() };
        let rep = verify_orientation(g, &Orientation::from_heads(g, heads)?)?;
        if !size_out.is_null() {
            *size_out = rep.size;
        }
        Ok(if rep.feasible { CvcStatus::Ok } else { CvcStatus::No })
    })
}

fn reduce(kind: CvcReduction, text: &str) -> cvc_core::Result<ReductionOutput> {
    match kind {
        CvcReduction::Smc => reduce_smc(&SmcInstance::parse(text)?),
        CvcReduction::SatNatural => {
            let psi = Cnf1in3::parse(text)?;
            let grouping = group_formula(&psi, GroupingMode::Greedy);
            let families = default_families(&grouping, FamilyMode::Greedy)?;
            reduce_sat_natural(&psi, &grouping, &families)
        }
        CvcReduction::SatCw => reduce_sat_cw(&Cnf1in3::parse(text)?),
        CvcReduction::MccTd => Ok(reduce_mcc_td(&MccInstance::parse(text)?)?.0),
    }
}

/// Reduces a source instance given as text; the result carries its budget
/// (see [`cvc_graph_budget`]).
///
/// # Safety
/// `text_in` must be a NUL-terminated string, `out` writable, and `kind` a
/// declared [`CvcReduction`] value.
#[no_mangle]
pub unsafe extern "C" fn cvc_reduce(
    kind: CvcReduction,
    text_in: *const c_char,
    out: *mut *mut CvcGraph,
) -> CvcStatus {
    guard(|| {
        let out_graph = reduce(kind, text(text_in)?)?;
        put_graph(out, out_graph.graph)
    })
}
