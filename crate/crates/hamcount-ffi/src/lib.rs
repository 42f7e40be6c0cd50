//! C ABI over the hamcount library: opaque graph handles, flat result
//! structs and integer status codes, so other languages can bind without
//! knowing anything about Rust. The companion header is generated into
//! `include/hamcount.h` at build time.
//!
//! Conventions: every function returns a [`HamStatus`]; outputs go through
//! pointers that are written only on `HamOk`; every object returned through
//! a handle must be released with the matching `*_free` function; a
//! human-readable message for the most recent failure on the current thread
//! is available via [`hamcount_last_error`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use hamcount::estimator::{estimate, BudgetMode, EstimatorConfig, EstimatorError};
use hamcount::exact::{hamilton_dp_capped, permanent_ryser_capped, OracleError};
use hamcount::graph::{gen_dense_digraph, WeightedDigraph};
use hamcount::sampler::{is_valid_cycle, TrialOptions, TrialStream};
use hamcount::scaling::{pad_zeros, scale};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(msg).ok();
    });
}

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HamStatus {
    HamOk = 0,
    /// A required pointer argument was null.
    HamErrNullArgument = 1,
    /// A string argument was not valid UTF-8.
    HamErrUtf8 = 2,
    /// The input file could not be read or parsed.
    HamErrParse = 3,
    /// A parameter was outside its documented domain.
    HamErrDomain = 4,
    /// Matrix scaling failed to converge.
    HamErrScaling = 5,
    /// An exact oracle was asked for an order above its cap.
    HamErrCapExceeded = 6,
    /// The trial budget ran out before the requested output was produced.
    HamErrBudgetExhausted = 7,
    /// Internal failure (panic or invariant breach); see last_error.
    HamErrInternal = 8,
}

/// Opaque digraph handle.
pub struct HamGraph {
    inner: WeightedDigraph,
}

/// Flat copy of an estimate report.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HamEstimate {
    pub n: u32,
    pub alpha: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    /// 0 = fixed budget, 1 = adaptive.
    pub adaptive: u8,
    pub trials: u64,
    pub acceptances: u64,
    pub log_br_c: f64,
    pub log_l: f64,
    /// -inf when no trial accepted.
    pub log_estimate: f64,
    /// exp(log_estimate); +inf when it overflows, 0 when s = 0.
    pub estimate: f64,
    pub clamp_events: u64,
    pub scaling_iters: u64,
    pub wall_ms: u64,
}

fn guard<F: FnOnce() -> HamStatus>(f: F) -> HamStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            HamStatus::HamErrInternal
        }
    }
}

fn estimator_status(err: &EstimatorError) -> HamStatus {
    match err {
        EstimatorError::Scaling(_) => HamStatus::HamErrScaling,
        EstimatorError::Trial(_) => HamStatus::HamErrInternal,
        EstimatorError::Bound(_) => HamStatus::HamErrInternal,
        _ => HamStatus::HamErrDomain,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hamcount_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent error on this thread, or null if none.
/// The pointer stays valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn hamcount_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.as_ptr(),
        None => std::ptr::null(),
    })
}

/// Build a graph from parallel edge arrays (1-based vertices, positive
/// weights). Pass `weights == null` for an unweighted graph.
///
/// # Safety
/// `tails` and `heads` (and `weights` when non-null) must point to at least
/// `edge_count` readable elements; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hamcount_graph_from_edges(
    n: u32,
    tails: *const u32,
    heads: *const u32,
    weights: *const f64,
    edge_count: usize,
    out: *mut *mut HamGraph,
) -> HamStatus {
    if out.is_null() || (edge_count > 0 && (tails.is_null() || heads.is_null())) {
        set_last_error("null argument");
        return HamStatus::HamErrNullArgument;
    }
    guard(|| {
        let tails = std::slice::from_raw_parts(tails, edge_count);
        let heads = std::slice::from_raw_parts(heads, edge_count);
        let edges: Vec<(u32, u32, f64)> = (0..edge_count)
            .map(|i| {
                let w = if weights.is_null() {
                    1.0
                } else {
                    *weights.add(i)
                };
                (tails[i], heads[i], w)
            })
            .collect();
        match WeightedDigraph::new(n, edges) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(HamGraph { inner: g }));
                HamStatus::HamOk
            }
            Err(e) => {
                set_last_error(e.to_string());
                HamStatus::HamErrDomain
            }
        }
    })
}

/// Read a digraph file in the text format of the CLI.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hamcount_graph_read(
    path: *const c_char,
    out: *mut *mut HamGraph,
) -> HamStatus {
    if path.is_null() || out.is_null() {
        set_last_error("null argument");
        return HamStatus::HamErrNullArgument;
    }
    guard(|| {
        let path = match CStr::from_ptr(path).to_str() {
            Ok(p) => p,
            Err(_) => {
                set_last_error("path is not valid UTF-8");
                return HamStatus::HamErrUtf8;
            }
        };
        match hamcount::io::read_digraph(Path::new(path)) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(HamGraph { inner: g }));
                HamStatus::HamOk
            }
            Err(e) => {
                set_last_error(e.to_string());
                HamStatus::HamErrParse
            }
        }
    })
}

/// Generate a random digraph whose every vertex keeps in- and outdegree at
/// least ceil(alpha * n); deterministic per seed.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hamcount_graph_gen_dense(
    n: u32,
    alpha: f64,
    seed: u64,
    out: *mut *mut HamGraph,
) -> HamStatus {
    if out.is_null() {
        set_last_error("null argument");
        return HamStatus::HamErrNullArgument;
    }
    guard(|| match gen_dense_digraph(n, alpha, seed) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(HamGraph { inner: g }));
            HamStatus::HamOk
        }
        Err(e) => {
            set_last_error(e.to_string());
            HamStatus::HamErrDomain
        }
    })
}

/// Release a graph handle. Null is a no-op.
///
/// # Safety
/// `g` must have been returned by one of the constructors and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn hamcount_graph_free(g: *mut HamGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn hamcount_graph_order(g: *const HamGraph) -> u32 {
    if g.is_null() {
        return 0;
    }
    (*g).inner.order()
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn hamcount_graph_edge_count(g: *const HamGraph) -> u64 {
    if g.is_null() {
        return 0;
    }
    (*g).inner.edge_count() as u64
}

/// Density ratio alpha = (minimum of in/out degrees over vertices) / n.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn hamcount_graph_alpha(g: *const HamGraph) -> f64 {
    if g.is_null() {
        return f64::NAN;
    }
    (*g).inner.density().alpha
}

/// Exact log of the total Hamiltonian cycle weight (subset DP). `cap` = 0
/// uses the default order cap.
///
/// # Safety
/// `g` must be a live graph handle, `out_log` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hamcount_exact_hamilton(
    g: *const HamGraph,
    cap: usize,
    out_log: *mut f64,
) -> HamStatus {
    exact_value(g, cap, out_log, true)
}

/// Exact log of the permanent (Gray-code inclusion-exclusion). `cap` = 0
/// uses the default order cap.
///
/// # Safety
/// `g` must be a live graph handle, `out_log` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hamcount_exact_permanent(
    g: *const HamGraph,
    cap: usize,
    out_log: *mut f64,
) -> HamStatus {
    exact_value(g, cap, out_log, false)
}

unsafe fn exact_value(
    g: *const HamGraph,
    cap: usize,
    out_log: *mut f64,
    hamilton: bool,
) -> HamStatus {
    if g.is_null() || out_log.is_null() {
        set_last_error("null argument");
        return HamStatus::HamErrNullArgument;
    }
    guard(|| {
        let a = (*g).inner.adjacency_matrix();
        let result = if hamilton {
            let cap = if cap == 0 {
                hamcount::exact::DEFAULT_HAMILTON_CAP
            } else {
                cap
            };
            hamilton_dp_capped(&a, cap)
        } else {
            let cap = if cap == 0 {
                hamcount::exact::DEFAULT_PERMANENT_CAP
            } else {
                cap
            };
            permanent_ryser_capped(&a, cap)
        };
        match result {
            Ok(v) => {
                *out_log = v.log_value();
                HamStatus::HamOk
            }
            Err(e @ OracleError::CapExceeded { .. }) => {
                set_last_error(e.to_string());
                HamStatus::HamErrCapExceeded
            }
            Err(e) => {
                set_last_error(e.to_string());
                HamStatus::HamErrDomain
            }
        }
    })
}

/// Run the acceptance/rejection estimator. `adaptive != 0` runs until
/// `target_acceptances` acceptances (0 picks the Chernoff default for
/// epsilon/delta); otherwise `n_budget` scales the fixed Chernoff budget
/// (0 picks the density heuristic). Results land in `*out`.
///
/// # Safety
/// `g` must be a live graph handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hamcount_estimate(
    g: *const HamGraph,
    epsilon: f64,
    delta: f64,
    adaptive: u8,
    n_budget: f64,
    target_acceptances: u64,
    seed: u64,
    max_trials: u64,
    threads: u32,
    out: *mut HamEstimate,
) -> HamStatus {
    if g.is_null() || out.is_null() {
        set_last_error("null argument");
        return HamStatus::HamErrNullArgument;
    }
    guard(|| {
        let graph = &(*g).inner;
        let mode = if adaptive != 0 {
            let target = if target_acceptances == 0 {
                match hamcount::estimator::default_adaptive_target(epsilon, delta) {
                    Ok(t) => t,
                    Err(e) => {
                        set_last_error(e.to_string());
                        return HamStatus::HamErrDomain;
                    }
                }
            } else {
                target_acceptances
            };
            BudgetMode::Adaptive {
                target_acceptances: target,
            }
        } else {
            let budget = if n_budget == 0.0 {
                match hamcount::estimator::suggest_budget(graph, graph.density().alpha) {
                    Ok(b) => b,
                    Err(e) => {
                        set_last_error(e.to_string());
                        return HamStatus::HamErrDomain;
                    }
                }
            } else {
                n_budget
            };
            BudgetMode::Fixed { budget }
        };
        let cfg = match EstimatorConfig::new(epsilon, delta, mode, seed) {
            Ok(mut c) => {
                if max_trials > 0 {
                    c.max_trials = max_trials;
                }
                c.threads = threads as usize;
                c
            }
            Err(e) => {
                set_last_error(e.to_string());
                return HamStatus::HamErrDomain;
            }
        };
        match estimate(graph, &cfg) {
            Ok(r) => {
                *out = HamEstimate {
                    n: r.n,
                    alpha: r.alpha,
                    epsilon: r.epsilon,
                    delta: r.delta,
                    seed: r.seed,
                    adaptive,
                    trials: r.trials,
                    acceptances: r.acceptances,
                    log_br_c: r.log_br_c,
                    log_l: r.log_scale,
                    log_estimate: r.log_estimate,
                    estimate: if r.log_estimate == f64::NEG_INFINITY {
                        0.0
                    } else {
                        r.log_estimate.exp()
                    },
                    clamp_events: r.clamp_events,
                    scaling_iters: r.scaling_sweeps,
                    wall_ms: r.wall_ms,
                };
                if r.acceptances == 0 {
                    set_last_error("no acceptance within the trial budget");
                    HamStatus::HamErrBudgetExhausted
                } else {
                    HamStatus::HamOk
                }
            }
            Err(e) => {
                set_last_error(e.to_string());
                estimator_status(&e)
            }
        }
    })
}

/// Draw Hamiltonian cycles proportionally to their weight. Writes up to
/// `count` cycles into `out_vertices`, each as n+1 vertices (1, ..., 1);
/// the buffer must hold `count * (n + 1)` elements. `*out_found` reports
/// how many cycles were written. Returns `HamErrBudgetExhausted` when
/// `max_trials` ran out first (the cycles found so far are still written).
///
/// # Safety
/// `g` must be a live graph handle; `out_vertices` must point to at least
/// `count * (order + 1)` writable elements; `out_found` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hamcount_sample(
    g: *const HamGraph,
    count: u64,
    epsilon: f64,
    seed: u64,
    max_trials: u64,
    threads: u32,
    out_vertices: *mut u32,
    out_found: *mut u64,
) -> HamStatus {
    if g.is_null() || out_vertices.is_null() || out_found.is_null() {
        set_last_error("null argument");
        return HamStatus::HamErrNullArgument;
    }
    guard(|| {
        let graph = &(*g).inner;
        let n = graph.order() as usize;
        *out_found = 0;
        let padded = match pad_zeros(&graph.adjacency_matrix(), epsilon) {
            Ok(p) => p,
            Err(e) => {
                set_last_error(e.to_string());
                return HamStatus::HamErrDomain;
            }
        };
        let inst = match scale(&padded) {
            Ok(i) => i,
            Err(e) => {
                set_last_error(e.to_string());
                return HamStatus::HamErrScaling;
            }
        };
        let mut stream =
            match TrialStream::new(&inst, seed, threads as usize, TrialOptions::default()) {
                Ok(s) => s,
                Err(e) => {
                    set_last_error(e.to_string());
                    return HamStatus::HamErrInternal;
                }
            };
        let max_trials = if max_trials == 0 {
            10_000_000
        } else {
            max_trials
        };
        let mut trials = 0u64;
        let mut found = 0u64;
        while found < count && trials < max_trials {
            let outcome = match stream.next().expect("stream is endless") {
                Ok(o) => o,
                Err(e) => {
                    set_last_error(e.to_string());
                    return HamStatus::HamErrInternal;
                }
            };
            trials += 1;
            if !outcome.accepted {
                continue;
            }
            let cycle = outcome.cycle.expect("accepted trials carry a cycle");
            if !is_valid_cycle(&cycle.vertices, graph) {
                continue; // phantom through a padded non-edge
            }
            let base = (found as usize) * (n + 1);
            for (k, &v) in cycle.vertices.iter().enumerate() {
                *out_vertices.add(base + k) = v;
            }
            found += 1;
            *out_found = found;
        }
        if found < count {
            set_last_error(format!(
                "budget of {max_trials} trials exhausted after {found} cycles"
            ));
            HamStatus::HamErrBudgetExhausted
        } else {
            HamStatus::HamOk
        }
    })
}
