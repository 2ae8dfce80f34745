//! C ABI over the `edvqe` solvers.
//!
//! Every fallible function returns an [`EdvqeStatus`]; on failure a message
//! is available from [`edvqe_last_error_message`] on the same thread.
//! Graphs and solve results are opaque handles released with their `_free`
//! functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use edvqe::bench::{generate, FamilyParams, GraphFamily};
use edvqe::graph::{brute_force_maxcut, read_graph};
use edvqe::gw::{gw_runs, GwConfig};
use edvqe::perturbation::{edvqe_solve as run_edvqe, warm_start_solve, EdvqeConfig, SolveResult};
use edvqe::{cut_value, CutAssignment, Error, WeightedGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdvqeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Capacity = 4,
    Numeric = 5,
    Io = 6,
    Parse = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdvqeFamily {
    Complete = 0,
    Cluster = 1,
    Regular3 = 2,
}

/// Weighted undirected graph.
pub struct EdvqeGraph {
    inner: WeightedGraph,
}

/// Outcome of [`edvqe_solve`] or [`edvqe_warm_start`].
pub struct EdvqeSolveResult {
    inner: SolveResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> EdvqeStatus {
    match err {
        Error::Dimension(_) => EdvqeStatus::Dimension,
        Error::Capacity(_) => EdvqeStatus::Capacity,
        Error::Numeric(_) | Error::NonFiniteEnergy { .. } => EdvqeStatus::Numeric,
        Error::Io { .. } => EdvqeStatus::Io,
        Error::Parse { .. } | Error::Json(_) => EdvqeStatus::Parse,
        _ => EdvqeStatus::InvalidArgument,
    }
}

struct Fail(EdvqeStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null_arg(name: &str) -> Fail {
    Fail(EdvqeStatus::NullPointer, format!("{name} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EdvqeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EdvqeStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            EdvqeStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null_arg(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(EdvqeStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null_arg(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn graph_arg<'a>(g: *const EdvqeGraph) -> Result<&'a WeightedGraph, Fail> {
    g.as_ref()
        .map(|g| &g.inner)
        .ok_or_else(|| null_arg("graph"))
}

unsafe fn edvqe_config(json: *const c_char) -> Result<EdvqeConfig, Fail> {
    if json.is_null() {
        return Ok(EdvqeConfig::default());
    }
    let text = str_arg(json, "config_json")?;
    serde_json::from_str(text).map_err(|e| Fail(EdvqeStatus::Parse, format!("config: {e}")))
}

unsafe fn write_bits(bits: &[u8], out: *mut u8, len: usize) -> Result<(), Fail> {
    if out.is_null() {
        return Ok(());
    }
    if len != bits.len() {
        return Err(Fail(
            EdvqeStatus::Dimension,
            format!("buffer holds {len} bits, assignment has {}", bits.len()),
        ));
    }
    std::ptr::copy_nonoverlapping(bits.as_ptr(), out, len);
    Ok(())
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn edvqe_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Builds a graph from parallel edge arrays.
///
/// # Safety
/// `i`, `j` and `w` must each point to `n_edges` readable elements (or may be
/// null when `n_edges` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn edvqe_graph_new(
    n_vertices: usize,
    i: *const u32,
    j: *const u32,
    w: *const f64,
    n_edges: usize,
    out: *mut *mut EdvqeGraph,
) -> EdvqeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let (i, j, w) = (
            slice_arg(i, n_edges, "i")?,
            slice_arg(j, n_edges, "j")?,
            slice_arg(w, n_edges, "w")?,
        );
        let edges = (0..n_edges).map(|k| (i[k] as usize, j[k] as usize, w[k]));
        let inner = WeightedGraph::new(n_vertices, edges)?;
        *out = Box::into_raw(Box::new(EdvqeGraph { inner }));
        Ok(())
    })
}

/// Reads an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn edvqe_graph_read(
    path: *const c_char,
    out: *mut *mut EdvqeGraph,
) -> EdvqeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let inner = read_graph(Path::new(str_arg(path, "path")?))?;
        *out = Box::into_raw(Box::new(EdvqeGraph { inner }));
        Ok(())
    })
}

/// Benchmark family instance with default weights.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn edvqe_graph_generate(
    family: EdvqeFamily,
    n_vertices: usize,
    seed: u64,
    out: *mut *mut EdvqeGraph,
) -> EdvqeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let family = match family {
            EdvqeFamily::Complete => GraphFamily::Complete,
            EdvqeFamily::Cluster => GraphFamily::Cluster,
            EdvqeFamily::Regular3 => GraphFamily::Regular3,
        };
        let inner = generate(family, n_vertices, seed, &FamilyParams::default())?;
        *out = Box::into_raw(Box::new(EdvqeGraph { inner }));
        Ok(())
    })
}

/// # Safety
/// `graph` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn edvqe_graph_free(graph: *mut EdvqeGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn edvqe_graph_n_vertices(graph: *const EdvqeGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.n_vertices())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn edvqe_graph_n_edges(graph: *const EdvqeGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.n_edges())
}

/// Cut weight of a 0/1 assignment.
///
/// # Safety
/// `bits` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn edvqe_cut_value(
    graph: *const EdvqeGraph,
    bits: *const u8,
    len: usize,
    out: *mut f64,
) -> EdvqeStatus {
    guard(|| {
        let g = graph_arg(graph)?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = cut_value(g, slice_arg(bits, len, "bits")?)?;
        Ok(())
    })
}

/// Full EDVQE pipeline. `config_json` may be null for defaults.
///
/// # Safety
/// `graph` must be a live handle, `config_json` null or NUL-terminated, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edvqe_solve(
    graph: *const EdvqeGraph,
    config_json: *const c_char,
    seed: u64,
    out: *mut *mut EdvqeSolveResult,
) -> EdvqeStatus {
    guard(|| {
        let g = graph_arg(graph)?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let inner = run_edvqe(g, &edvqe_config(config_json)?, seed)?;
        *out = Box::into_raw(Box::new(EdvqeSolveResult { inner }));
        Ok(())
    })
}

/// Refinement loop from a given 0/1 assignment.
///
/// # Safety
/// As [`edvqe_solve`]; `bits` must point to `len` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn edvqe_warm_start(
    graph: *const EdvqeGraph,
    bits: *const u8,
    len: usize,
    config_json: *const c_char,
    seed: u64,
    out: *mut *mut EdvqeSolveResult,
) -> EdvqeStatus {
    guard(|| {
        let g = graph_arg(graph)?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let initial = CutAssignment {
            bits: slice_arg(bits, len, "bits")?.to_vec(),
            cut: 0.0,
        };
        let inner = warm_start_solve(g, &initial, &edvqe_config(config_json)?, seed)?;
        *out = Box::into_raw(Box::new(EdvqeSolveResult { inner }));
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn edvqe_result_free(result: *mut EdvqeSolveResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Best cut found.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edvqe_result_best_cut(
    result: *const EdvqeSolveResult,
    out: *mut f64,
) -> EdvqeStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null_arg("result"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = r.inner.best.cut;
        Ok(())
    })
}

/// Cut of the starting assignment.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edvqe_result_initial_cut(
    result: *const EdvqeSolveResult,
    out: *mut f64,
) -> EdvqeStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null_arg("result"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = r.inner.initial.cut;
        Ok(())
    })
}

/// Copies the best assignment; `len` must equal the vertex count.
///
/// # Safety
/// `result` must be a live handle and `out` point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn edvqe_result_bits(
    result: *const EdvqeSolveResult,
    out: *mut u8,
    len: usize,
) -> EdvqeStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null_arg("result"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        write_bits(&r.inner.best.bits, out, len)
    })
}

/// Full result as JSON; release with [`edvqe_string_free`].
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edvqe_result_to_json(
    result: *const EdvqeSolveResult,
    out: *mut *mut c_char,
) -> EdvqeStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null_arg("result"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let json = serde_json::to_string(&r.inner).map_err(Error::from)?;
        *out = CString::new(json).expect("json has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn edvqe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Best cut over `runs` GW runs with `projections` roundings each.
/// `bits_out` may be null; otherwise it receives `len` (= vertex count)
/// bytes.
///
/// # Safety
/// `graph` must be a live handle, `best_cut` writable, `bits_out` null or
/// `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn edvqe_gw(
    graph: *const EdvqeGraph,
    projections: usize,
    runs: usize,
    seed: u64,
    best_cut: *mut f64,
    bits_out: *mut u8,
    len: usize,
) -> EdvqeStatus {
    guard(|| {
        let g = graph_arg(graph)?;
        if best_cut.is_null() {
            return Err(null_arg("best_cut"));
        }
        let cfg = GwConfig {
            projections,
            ..GwConfig::default()
        };
        let report = gw_runs(g, &cfg, runs, seed)?;
        write_bits(&report.best.bits, bits_out, len)?;
        *best_cut = report.best.cut;
        Ok(())
    })
}

/// Exact maximum cut by enumeration (small graphs only).
///
/// # Safety
/// As [`edvqe_gw`].
#[no_mangle]
pub unsafe extern "C" fn edvqe_brute_force(
    graph: *const EdvqeGraph,
    best_cut: *mut f64,
    bits_out: *mut u8,
    len: usize,
) -> EdvqeStatus {
    guard(|| {
        let g = graph_arg(graph)?;
        if best_cut.is_null() {
            return Err(null_arg("best_cut"));
        }
        let best = brute_force_maxcut(g)?;
        write_bits(&best.bits, bits_out, len)?;
        *best_cut = best.cut;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn triangle() -> *mut EdvqeGraph {
        let (i, j, w) = ([0u32, 0, 1], [1u32, 2, 2], [1.0, 1.0, 1.0]);
        let mut g = ptr::null_mut();
        let st = unsafe { edvqe_graph_new(3, i.as_ptr(), j.as_ptr(), w.as_ptr(), 3, &mut g) };
        assert_eq!(st, EdvqeStatus::Ok);
        g
    }

    #[test]
    fn status_mapping() {
        assert_eq!(
            status_of(&Error::Capacity("x".into())),
            EdvqeStatus::Capacity
        );
        assert_eq!(status_of(&Error::Numeric("x".into())), EdvqeStatus::Numeric);
        assert_eq!(
            status_of(&Error::InvalidConfig("x".into())),
            EdvqeStatus::InvalidArgument
        );
    }

    #[test]
    fn panic_is_caught() {
        let st = guard(|| panic!("boom"));
        assert_eq!(st, EdvqeStatus::Panic);
        let msg = unsafe { CStr::from_ptr(edvqe_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("boom"));
    }

    #[test]
    fn brute_and_bits() {
        let g = triangle();
        let mut cut = 0.0;
        let mut bits = [9u8; 3];
        unsafe {
            assert_eq!(
                edvqe_brute_force(g, &mut cut, bits.as_mut_ptr(), 3),
                EdvqeStatus::Ok
            );
            assert_eq!(cut, 2.0);
            let mut again = 0.0;
            assert_eq!(
                edvqe_cut_value(g, bits.as_ptr(), 3, &mut again),
                EdvqeStatus::Ok
            );
            assert_eq!(again, 2.0);
            assert_eq!(
                edvqe_brute_force(g, &mut cut, bits.as_mut_ptr(), 2),
                EdvqeStatus::Dimension
            );
            edvqe_graph_free(g);
        }
    }
}
