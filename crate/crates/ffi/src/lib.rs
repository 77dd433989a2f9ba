//! C ABI over the simgcf engine.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free`. Every fallible call returns a [`SimgcfStatus`];
//! on failure the message is available from [`simgcf_last_error`] on the
//! same thread until the next failing call. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use simgcf::evaluation::top_k;
use simgcf::filters::{sample_points, SampleMode};
use simgcf::propagation::propagate;
use simgcf::{DenseMatrix, EmbeddingModel, Error, FilterSpec, Quadrant, ScalerParams, SparseAdjacency, SplitDataset};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimgcfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Bad parameter, configuration or filter.
    InvalidArgument = 2,
    /// Unreadable or malformed file, or an index out of range.
    Data = 3,
    /// Rank-deficient fit, non-convergence or a stale model cache.
    Numerical = 4,
    /// Caller buffer too small; the required length was written.
    BufferTooSmall = 5,
    /// Internal panic caught at the boundary.
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimgcfBasis {
    Monomial = 0,
    Jacobi = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimgcfQuadrant {
    I = 1,
    II = 2,
    III = 3,
    IV = 4,
}

/// Filter construction parameters. `base_coefficients` is read only for the
/// monomial basis, where it holds `degree + 1` values.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SimgcfFilterParams {
    pub basis: SimgcfBasis,
    pub degree: usize,
    pub jacobi_a: f64,
    pub jacobi_b: f64,
    pub quadrant: SimgcfQuadrant,
    pub base_coefficients: *const f64,
    pub use_scaler: bool,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub space_flip: bool,
    pub fit_points: usize,
}

/// Normalised user-item adjacency.
pub struct SimgcfGraph(SparseAdjacency);

/// Fitted filter.
pub struct SimgcfFilter(FilterSpec);

/// Trained embedding model.
pub struct SimgcfModel(EmbeddingModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SimgcfStatus {
    match e.exit_code() {
        1 => SimgcfStatus::InvalidArgument,
        2 => SimgcfStatus::Data,
        _ => SimgcfStatus::Numerical,
    }
}

struct Failure(SimgcfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SimgcfStatus::NullArgument, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(SimgcfStatus::InvalidArgument, message.into())
}

/// Runs `body`, records any failure and maps it to a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SimgcfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SimgcfStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {message}"));
            SimgcfStatus::Internal
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn path<'a>(p: *const c_char) -> Result<&'a Path, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| invalid("path is not UTF-8"))?;
    Ok(Path::new(s))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Copies `values` into a caller buffer of `capacity`, always reporting the
/// required length through `len`.
unsafe fn copy_out<T: Copy>(values: &[T], out: *mut T, capacity: usize, len: *mut usize) -> Result<(), Failure> {
    if len.is_null() {
        return Err(null("len"));
    }
    *len = values.len();
    if capacity < values.len() {
        return Err(Failure(
            SimgcfStatus::BufferTooSmall,
            format!("buffer holds {capacity}, need {}", values.len()),
        ));
    }
    slice_mut(out, values.len(), "out")?.copy_from_slice(values);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn simgcf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null if none. Valid
/// until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn simgcf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds the normalised adjacency of `edge_count` user-item pairs.
///
/// # Safety
/// `edge_users` and `edge_items` point to `edge_count` values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn simgcf_graph_from_edges(
    user_count: usize,
    item_count: usize,
    edge_users: *const u32,
    edge_items: *const u32,
    edge_count: usize,
    out: *mut *mut SimgcfGraph,
) -> SimgcfStatus {
    guard(|| {
        let us = slice(edge_users, edge_count, "edge_users")?;
        let is = slice(edge_items, edge_count, "edge_items")?;
        let edges: Vec<(usize, usize)> = us.iter().zip(is).map(|(&u, &i)| (u as usize, i as usize)).collect();
        put(
            out,
            SimgcfGraph(SparseAdjacency::from_interactions(user_count, item_count, &edges)?),
        )
    })
}

/// Builds the train-graph adjacency of a split directory written by `prepare`.
///
/// # Safety
/// `dir` is a NUL-terminated path; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn simgcf_graph_from_split_dir(dir: *const c_char, out: *mut *mut SimgcfGraph) -> SimgcfStatus {
    guard(|| {
        let split = SplitDataset::read_from_dir(path(dir)?)?;
        put(out, SimgcfGraph(simgcf::graph::build_normalized_adjacency(&split)?))
    })
}

/// # Safety
/// `graph` is a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn simgcf_graph_node_count(graph: *const SimgcfGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.node_count())
}

/// Stored entries of the adjacency (twice the distinct edge count).
///
/// # Safety
/// `graph` is a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn simgcf_graph_nnz(graph: *const SimgcfGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.nnz())
}

/// # Safety
/// `graph` came from this library and is not used afterwards; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn simgcf_graph_free(graph: *mut SimgcfGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

fn quadrant(q: SimgcfQuadrant) -> Quadrant {
    match q {
        SimgcfQuadrant::I => Quadrant::I,
        SimgcfQuadrant::II => Quadrant::II,
        SimgcfQuadrant::III => Quadrant::III,
        SimgcfQuadrant::IV => Quadrant::IV,
    }
}

/// Builds a filter from `params` and fits its monomial coefficients on
/// `fit_points` uniform samples of `[-1, 1]`.
///
/// # Safety
/// `params` is readable, its `base_coefficients` holds `degree + 1` values
/// for the monomial basis, and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn simgcf_filter_fit(
    params: *const SimgcfFilterParams,
    out: *mut *mut SimgcfFilter,
) -> SimgcfStatus {
    guard(|| {
        let p = handle(params, "params")?;
        let q = quadrant(p.quadrant);
        let mut spec = match p.basis {
            SimgcfBasis::Monomial => {
                let base = slice(p.base_coefficients, p.degree + 1, "base_coefficients")?;
                FilterSpec::monomial(base.to_vec(), q)
            }
            SimgcfBasis::Jacobi => FilterSpec::jacobi(p.jacobi_a, p.jacobi_b, p.degree, q),
        };
        if p.use_scaler {
            spec = spec.with_scaler(ScalerParams {
                mu: p.mu,
                alpha: p.alpha,
                beta: p.beta,
            });
        }
        spec = spec.with_space_flip(p.space_flip);
        if p.fit_points == 0 {
            return Err(invalid("fit_points must be ≥ 1"));
        }
        spec.fit(&sample_points(p.fit_points, SampleMode::Uniform))?;
        put(out, SimgcfFilter(spec))
    })
}

/// Loads a filter JSON written by `fit-filter` or `train`, fitting it if it
/// carries no propagation coefficients.
///
/// # Safety
/// `file` is a NUL-terminated path; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn simgcf_filter_load(file: *const c_char, out: *mut *mut SimgcfFilter) -> SimgcfStatus {
    guard(|| {
        let text = std::fs::read_to_string(path(file)?).map_err(Error::from)?;
        let mut spec: FilterSpec = serde_json::from_str(&text).map_err(Error::from)?;
        if spec.propagation_coefficients.is_none() {
            spec.fit(&sample_points(1024, SampleMode::Uniform))?;
        }
        spec.validate()?;
        put(out, SimgcfFilter(spec))
    })
}

/// Copies the propagation coefficients `c₀,…,cₙ` into `out`. `len` receives
/// `n + 1` even when `capacity` is too small.
///
/// # Safety
/// `filter` is a live handle, `out` has room for `capacity` doubles, `len` is writable.
#[no_mangle]
pub unsafe extern "C" fn simgcf_filter_coefficients(
    filter: *const SimgcfFilter,
    out: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> SimgcfStatus {
    guard(|| {
        let f = handle(filter, "filter")?;
        copy_out(f.0.require_propagation_coefficients()?, out, capacity, len)
    })
}

/// Fitted filter value at `lambda ∈ [-1, 1]`.
///
/// # Safety
/// `filter` is a live handle and `value` is writable.
#[no_mangle]
pub unsafe extern "C" fn simgcf_filter_value(
    filter: *const SimgcfFilter,
    lambda: f64,
    value: *mut f64,
) -> SimgcfStatus {
    guard(|| {
        let f = handle(filter, "filter")?;
        if value.is_null() {
            return Err(null("value"));
        }
        *value =
            f.0.fitted_value(lambda)
                .ok_or_else(|| invalid("filter is not fitted"))?;
        Ok(())
    })
}

/// # Safety
/// `filter` is a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn simgcf_filter_space_flip(filter: *const SimgcfFilter) -> bool {
    filter.as_ref().is_some_and(|f| f.0.space_flip)
}

/// # Safety
/// `filter` came from this library and is not used afterwards; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn simgcf_filter_free(filter: *mut SimgcfFilter) {
    if !filter.is_null() {
        drop(Box::from_raw(filter));
    }
}

/// `E = Σ cᵢ Âⁱ E⁰` for row-major `E⁰` of shape `node_count × dim`,
/// written row-major to `out` of the same shape.
///
/// # Safety
/// `e0` and `out` each hold `node_count(graph) * dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn simgcf_propagate(
    graph: *const SimgcfGraph,
    filter: *const SimgcfFilter,
    e0: *const f64,
    dim: usize,
    out: *mut f64,
) -> SimgcfStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        let f = handle(filter, "filter")?;
        let n = g.0.node_count();
        let input = DenseMatrix::from_vec(n, dim, slice(e0, n * dim, "e0")?.to_vec())?;
        let e = propagate(&g.0, &input, f.0.require_propagation_coefficients()?)?;
        slice_mut(out, n * dim, "out")?.copy_from_slice(e.as_slice());
        Ok(())
    })
}

/// Loads a `model.bin` checkpoint. The model must be refreshed against a
/// graph before scoring.
///
/// # Safety
/// `file` is a NUL-terminated path; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn simgcf_model_load(file: *const c_char, out: *mut *mut SimgcfModel) -> SimgcfStatus {
    guard(|| {
        let p = path(file)?;
        let reader = BufReader::new(File::open(p).map_err(Error::from)?);
        put(out, SimgcfModel(EmbeddingModel::read_checkpoint(reader, p)?))
    })
}

/// Recomputes the propagated embeddings on `graph`.
///
/// # Safety
/// `model` and `graph` are live handles; `model` is not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn simgcf_model_refresh(model: *mut SimgcfModel, graph: *const SimgcfGraph) -> SimgcfStatus {
    guard(|| {
        let m = model.as_mut().ok_or_else(|| null("model"))?;
        m.0.refresh(&handle(graph, "graph")?.0)?;
        Ok(())
    })
}

/// # Safety
/// `model` is a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn simgcf_model_user_count(model: *const SimgcfModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.user_count())
}

/// # Safety
/// `model` is a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn simgcf_model_item_count(model: *const SimgcfModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.item_count())
}

/// Preference score of `user` for `item`.
///
/// # Safety
/// `model` is a live handle and `score` is writable.
#[no_mangle]
pub unsafe extern "C" fn simgcf_model_score(
    model: *const SimgcfModel,
    user: usize,
    item: usize,
    score: *mut f64,
) -> SimgcfStatus {
    guard(|| {
        let m = handle(model, "model")?;
        if score.is_null() {
            return Err(null("score"));
        }
        *score = m.0.score(user, item)?;
        Ok(())
    })
}

/// Writes up to `k` item indices for `user`, best first, skipping the
/// `exclude_count` items in `exclude`. `written` receives the count.
///
/// # Safety
/// `exclude` holds `exclude_count` values, `out` has room for `k`, and
/// `written` is writable.
#[no_mangle]
pub unsafe extern "C" fn simgcf_model_top_k(
    model: *const SimgcfModel,
    user: usize,
    k: usize,
    exclude: *const u32,
    exclude_count: usize,
    out: *mut u32,
    written: *mut usize,
) -> SimgcfStatus {
    guard(|| {
        let m = handle(model, "model")?;
        if written.is_null() {
            return Err(null("written"));
        }
        let mut mask: Vec<usize> = slice(exclude, exclude_count, "exclude")?
            .iter()
            .map(|&i| i as usize)
            .collect();
        mask.sort_unstable();
        mask.dedup();
        let scores = m.0.item_scores(user)?;
        let top: Vec<u32> = top_k(&scores, &mask, k).into_iter().map(|i| i as u32).collect();
        slice_mut(out, top.len(), "out")?.copy_from_slice(&top);
        *written = top.len();
        Ok(())
    })
}

/// # Safety
/// `model` came from this library and is not used afterwards; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn simgcf_model_free(model: *mut SimgcfModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}
