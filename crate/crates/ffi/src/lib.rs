//! C interface to the vsep solver.
//!
//! Graphs and partitions are opaque heap objects owned by the caller and
//! released with the matching `*_free` function. Every fallible call
//! returns a [`VsepStatus`]; the message of the most recent failure on the
//! calling thread is available from [`vsep_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use vsep::io::{load_graph, GraphFormat};
use vsep::{solve, Label, MatchingRule, Partition, SolveOptions, VsepError, WeightedGraph};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VsepStatus {
    Ok = 0,
    InvalidArgument = 1,
    Io = 2,
    Parse = 3,
    Infeasible = 4,
    Internal = 5,
    NullPointer = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VsepRule {
    HeavyEdge = 0,
    Random = 1,
}

/// Values written by [`vsep_partition_labels`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VsepLabel {
    A = 0,
    B = 1,
    S = 2,
}

/// Solver settings. A NaN `gamma` means the per-level default.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct VsepOptions {
    pub balance: f64,
    pub seed: u64,
    pub rule: VsepRule,
    pub gamma: f64,
    pub epsilon: f64,
    pub eta: f64,
}

pub struct VsepGraph {
    inner: WeightedGraph,
}

pub struct VsepPartition {
    inner: Partition,
    levels: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &VsepError) -> VsepStatus {
    match e {
        VsepError::Io(_) => VsepStatus::Io,
        VsepError::Parse { .. }
        | VsepError::DuplicateEdge { .. }
        | VsepError::AsymmetricEdge { .. }
        | VsepError::NonPositiveWeight { .. }
        | VsepError::InvalidEdgeWeight { .. } => VsepStatus::Parse,
        VsepError::VertexOutOfRange { .. }
        | VsepError::DimensionMismatch { .. }
        | VsepError::InvalidArgument(_)
        | VsepError::SizeCap { .. } => VsepStatus::InvalidArgument,
        VsepError::Infeasible(_) => VsepStatus::Infeasible,
        VsepError::PreconditionViolated(_) | VsepError::InvalidSeparator { .. } => {
            VsepStatus::Internal
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), (VsepStatus, String)>) -> VsepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VsepStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside vsep".into());
            VsepStatus::Panic
        }
    }
}

fn fail(e: VsepError) -> (VsepStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (VsepStatus, String) {
    (VsepStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vsep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn vsep_options_default() -> VsepOptions {
    let d = SolveOptions::default();
    VsepOptions {
        balance: d.balance,
        seed: d.seed,
        rule: VsepRule::HeavyEdge,
        gamma: f64::NAN,
        epsilon: d.epsilon,
        eta: d.eta,
    }
}

/// Loads a METIS graph file.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vsep_graph_from_metis_file(
    path: *const c_char,
    out: *mut *mut VsepGraph,
) -> VsepStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| (VsepStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
        let g = load_graph(Path::new(path), GraphFormat::Metis).map_err(fail)?;
        *out = Box::into_raw(Box::new(VsepGraph { inner: g }));
        Ok(())
    })
}

/// Builds a graph on `n` vertices from `m` undirected edges `(us[k], vs[k])`
/// (0-based). `weights` may be null for unit edge weights.
///
/// # Safety
/// `us` and `vs` (and `weights` unless null) must point to `m` elements;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vsep_graph_from_edges(
    n: usize,
    us: *const usize,
    vs: *const usize,
    weights: *const f64,
    m: usize,
    out: *mut *mut VsepGraph,
) -> VsepStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if m > 0 && (us.is_null() || vs.is_null()) {
            return Err(null("edge array"));
        }
        let edges: Vec<(usize, usize, f64)> = (0..m)
            .map(|k| {
                let w = if weights.is_null() {
                    1.0
                } else {
                    *weights.add(k)
                };
                (*us.add(k), *vs.add(k), w)
            })
            .collect();
        let (g, _) = WeightedGraph::from_edges(n, &edges).map_err(fail)?;
        *out = Box::into_raw(Box::new(VsepGraph { inner: g }));
        Ok(())
    })
}

/// Replaces the vertex weights (all positive, `len` equal to the vertex count).
///
/// # Safety
/// `graph` must come from this library; `weights` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn vsep_graph_set_vertex_weights(
    graph: *mut VsepGraph,
    weights: *const f64,
    len: usize,
) -> VsepStatus {
    guard(|| {
        let g = graph.as_mut().ok_or_else(|| null("graph"))?;
        if weights.is_null() {
            return Err(null("weights"));
        }
        let w = std::slice::from_raw_parts(weights, len).to_vec();
        g.inner = g.inner.clone().with_vertex_weights(w).map_err(fail)?;
        Ok(())
    })
}

/// Replaces the vertex costs (`len` equal to the vertex count).
///
/// # Safety
/// `graph` must come from this library; `costs` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn vsep_graph_set_vertex_costs(
    graph: *mut VsepGraph,
    costs: *const f64,
    len: usize,
) -> VsepStatus {
    guard(|| {
        let g = graph.as_mut().ok_or_else(|| null("graph"))?;
        if costs.is_null() {
            return Err(null("costs"));
        }
        let c = std::slice::from_raw_parts(costs, len).to_vec();
        g.inner = g.inner.clone().with_vertex_costs(c).map_err(fail)?;
        Ok(())
    })
}

/// # Safety
/// `graph` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vsep_graph_num_vertices(graph: *const VsepGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.n())
}

/// # Safety
/// `graph` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vsep_graph_num_edges(graph: *const VsepGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.num_edges())
}

/// # Safety
/// `graph` must be null or come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn vsep_graph_free(graph: *mut VsepGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Computes a separator. `options` may be null for the defaults.
///
/// # Safety
/// `graph` must come from this library; `options` must be null or valid;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vsep_solve(
    graph: *const VsepGraph,
    options: *const VsepOptions,
    out: *mut *mut VsepPartition,
) -> VsepStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let o = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| vsep_options_default());
        let opts = SolveOptions {
            balance: o.balance,
            seed: o.seed,
            rule: match o.rule {
                VsepRule::HeavyEdge => MatchingRule::HeavyEdge,
                VsepRule::Random => MatchingRule::Random,
            },
            gamma: (!o.gamma.is_nan()).then_some(o.gamma),
            epsilon: o.epsilon,
            eta: o.eta,
            ..SolveOptions::default()
        };
        let (part, stats) = solve(&g.inner, &opts).map_err(fail)?;
        *out = Box::into_raw(Box::new(VsepPartition {
            inner: part,
            levels: stats.depth(),
        }));
        Ok(())
    })
}

/// Number of vertices covered by the partition.
///
/// # Safety
/// `part` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vsep_partition_len(part: *const VsepPartition) -> usize {
    part.as_ref().map_or(0, |p| p.inner.labels.len())
}

/// # Safety
/// `part` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vsep_partition_cost(part: *const VsepPartition) -> f64 {
    part.as_ref().map_or(f64::NAN, |p| p.inner.cost_s)
}

/// # Safety
/// `part` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vsep_partition_weight_a(part: *const VsepPartition) -> f64 {
    part.as_ref().map_or(f64::NAN, |p| p.inner.weight_a)
}

/// # Safety
/// `part` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vsep_partition_weight_b(part: *const VsepPartition) -> f64 {
    part.as_ref().map_or(f64::NAN, |p| p.inner.weight_b)
}

/// # Safety
/// `part` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vsep_partition_feasible(part: *const VsepPartition) -> bool {
    part.as_ref().is_some_and(|p| p.inner.feasible)
}

/// Number of levels in the hierarchy used for the solve.
///
/// # Safety
/// `part` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn vsep_partition_levels(part: *const VsepPartition) -> usize {
    part.as_ref().map_or(0, |p| p.levels)
}

/// Copies the labels (see [`VsepLabel`]) into `out`, which must hold
/// exactly [`vsep_partition_len`] bytes.
///
/// # Safety
/// `part` must come from this library; `out` must point to `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn vsep_partition_labels(
    part: *const VsepPartition,
    out: *mut u8,
    len: usize,
) -> VsepStatus {
    guard(|| {
        let p = part.as_ref().ok_or_else(|| null("partition"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let labels = &p.inner.labels;
        if len != labels.len() {
            return Err((
                VsepStatus::InvalidArgument,
                format!("buffer holds {len} labels, partition has {}", labels.len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (d, l) in dst.iter_mut().zip(labels) {
            *d = match l {
                Label::A => VsepLabel::A,
                Label::B => VsepLabel::B,
                Label::S => VsepLabel::S,
            } as u8;
        }
        Ok(())
    })
}

/// # Safety
/// `part` must be null or come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn vsep_partition_free(part: *mut VsepPartition) {
    if !part.is_null() {
        drop(Box::from_raw(part));
    }
}
