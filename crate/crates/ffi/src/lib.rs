//! C ABI for `ergocoef`.
//!
//! Matrices and graphs live behind opaque handles created by the `*_new` /
//! `*_parse` functions and released with the matching `*_free`. Every
//! fallible function returns an [`ErgoStatus`] and writes its result through
//! an out pointer only on success. After a failure,
//! [`ergo_last_error_message`] describes it; the message belongs to the
//! calling thread and stays valid until that thread's next failing call.
//!
//! Norms are selected with [`ERGO_NORM_ONE`] and [`ERGO_NORM_INF`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ergocoef::bounds::{
    estimate_largest, estimate_smallest, largest_bound, smallest_bound_nonsingular,
    smallest_bound_singular,
};
use ergocoef::graph::{
    connectivity_lower_bound_shift, connectivity_lower_bound_sup_default, laplacian,
    tau1_laplacian, tau_inf_laplacian, Graph,
};
use ergocoef::{tau, EMatrix, Error, Matrix, PNorm};

pub const ERGO_NORM_ONE: u32 = 1;
pub const ERGO_NORM_INF: u32 = 2;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErgoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    InvalidMatrix = 4,
    DimensionMismatch = 5,
    NotConstantRowSum = 6,
    SingularMatrix = 7,
    DegenerateCoefficient = 8,
    TrivialEigenvalueNotZero = 9,
    DimensionTooLarge = 10,
    NonConvergence = 11,
    GraphDisconnected = 12,
    NoEdges = 13,
    InvalidGraph = 14,
    Panic = 99,
}

impl From<&Error> for ErgoStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch { .. } => ErgoStatus::DimensionMismatch,
            Error::InvalidMatrix(_) => ErgoStatus::InvalidMatrix,
            Error::NotConstantRowSum { .. } => ErgoStatus::NotConstantRowSum,
            Error::SingularMatrix { .. } => ErgoStatus::SingularMatrix,
            Error::DegenerateCoefficient => ErgoStatus::DegenerateCoefficient,
            Error::TrivialEigenvalueNotZero(_) => ErgoStatus::TrivialEigenvalueNotZero,
            Error::DimensionTooLarge { .. } => ErgoStatus::DimensionTooLarge,
            Error::NonConvergence { .. } => ErgoStatus::NonConvergence,
            Error::GraphDisconnected => ErgoStatus::GraphDisconnected,
            Error::NoEdges => ErgoStatus::NoEdges,
            Error::InvalidGraph(_) => ErgoStatus::InvalidGraph,
            Error::Parse { .. } => ErgoStatus::Parse,
            Error::InvalidArgument(_) => ErgoStatus::InvalidArgument,
        }
    }
}

/// Opaque square matrix.
pub struct ErgoMatrix {
    inner: Matrix,
}

/// Opaque simple undirected graph.
pub struct ErgoGraph {
    inner: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(ErgoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(ErgoStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ErgoStatus::NullPointer, format!("{what} is null"))
}

fn guard<F>(f: F) -> ErgoStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ErgoStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            ErgoStatus::Panic
        }
    }
}

fn norm(p: u32) -> Result<PNorm, Failure> {
    match p {
        ERGO_NORM_ONE => Ok(PNorm::One),
        ERGO_NORM_INF => Ok(PNorm::Infinity),
        other => Err(Failure(
            ErgoStatus::InvalidArgument,
            format!("unknown norm selector {other}"),
        )),
    }
}

unsafe fn matrix_ref<'a>(m: *const ErgoMatrix) -> Result<&'a Matrix, Failure> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null("matrix"))
}

unsafe fn graph_ref<'a>(g: *const ErgoGraph) -> Result<&'a Graph, Failure> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null("graph"))
}

unsafe fn ematrix(m: *const ErgoMatrix) -> Result<EMatrix, Failure> {
    Ok(EMatrix::new(matrix_ref(m)?.clone())?)
}

unsafe fn utf8<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("text"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        Failure(
            ErgoStatus::InvalidArgument,
            "text is not valid UTF-8".into(),
        )
    })
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

/// Message of the last failure on this thread, or null if none occurred.
#[no_mangle]
pub extern "C" fn ergo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ergo_status_string(status: ErgoStatus) -> *const c_char {
    let s: &'static CStr = match status {
        ErgoStatus::Ok => c"ok",
        ErgoStatus::NullPointer => c"null pointer",
        ErgoStatus::InvalidArgument => c"invalid argument",
        ErgoStatus::Parse => c"parse error",
        ErgoStatus::InvalidMatrix => c"invalid matrix",
        ErgoStatus::DimensionMismatch => c"dimension mismatch",
        ErgoStatus::NotConstantRowSum => c"rows do not have a common sum",
        ErgoStatus::SingularMatrix => c"singular matrix",
        ErgoStatus::DegenerateCoefficient => c"coefficient vanishes",
        ErgoStatus::TrivialEigenvalueNotZero => c"trivial eigenvalue is not zero",
        ErgoStatus::DimensionTooLarge => c"dimension too large",
        ErgoStatus::NonConvergence => c"iteration did not converge",
        ErgoStatus::GraphDisconnected => c"graph is disconnected",
        ErgoStatus::NoEdges => c"graph has no edges",
        ErgoStatus::InvalidGraph => c"invalid graph",
        ErgoStatus::Panic => c"internal error",
    };
    s.as_ptr()
}

/// Creates an `n x n` matrix from `n * n` row-major entries.
///
/// # Safety
/// `data` must point to `n * n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_matrix_new(
    n: usize,
    data: *const f64,
    out: *mut *mut ErgoMatrix,
) -> ErgoStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        let len = n
            .checked_mul(n)
            .ok_or_else(|| Failure(ErgoStatus::InvalidArgument, "dimension overflows".into()))?;
        let entries = std::slice::from_raw_parts(data, len).to_vec();
        let inner = Matrix::new(n, entries)?;
        emit(out, ErgoMatrix { inner })
    })
}

/// Parses the matrix text format (optional `n` line, then rows; `#` comments).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_matrix_parse(
    text: *const c_char,
    out: *mut *mut ErgoMatrix,
) -> ErgoStatus {
    guard(|| {
        let inner = Matrix::parse(utf8(text)?)?;
        emit(out, ErgoMatrix { inner })
    })
}

/// Releases a matrix. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ergo_matrix_free(m: *mut ErgoMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of `m`, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ergo_matrix_dim(m: *const ErgoMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

/// Copies the `n * n` row-major entries into `out`.
///
/// # Safety
/// `m` must be a live handle; `out` must have room for `n * n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ergo_matrix_entries(m: *const ErgoMatrix, out: *mut f64) -> ErgoStatus {
    guard(|| {
        let m = matrix_ref(m)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        ptr::copy_nonoverlapping(m.entries().as_ptr(), out, m.entries().len());
        Ok(())
    })
}

/// `tau_p(m)`. Defined for any square matrix.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_tau(m: *const ErgoMatrix, p: u32, out: *mut f64) -> ErgoStatus {
    guard(|| write(out, tau(matrix_ref(m)?, norm(p)?)))
}

/// Common row sum of an e-matrix.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_trivial_eigenvalue(
    m: *const ErgoMatrix,
    out: *mut f64,
) -> ErgoStatus {
    guard(|| write(out, ematrix(m)?.trivial_eigenvalue()))
}

/// `tau_p(A^k)^(1/k)`, an upper bound on every non-trivial eigenvalue modulus.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_largest_bound(
    m: *const ErgoMatrix,
    p: u32,
    k: u64,
    out: *mut f64,
) -> ErgoStatus {
    guard(|| {
        let p = norm(p)?;
        write(out, largest_bound(&ematrix(m)?, p, k))
    })
}

unsafe fn write_estimate(
    est: ergocoef::Estimate,
    out_estimate: *mut f64,
    out_levels: *mut u32,
    out_converged: *mut bool,
) -> Result<(), Failure> {
    write(out_estimate, est.estimate)?;
    if !out_levels.is_null() {
        out_levels.write(est.levels_used);
    }
    if !out_converged.is_null() {
        out_converged.write(est.converged);
    }
    Ok(())
}

/// Doubling estimate of the largest non-trivial modulus. `out_levels` and
/// `out_converged` may be null.
///
/// # Safety
/// `m` must be a live handle; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_estimate_largest(
    m: *const ErgoMatrix,
    p: u32,
    rel_tol: f64,
    max_level: u32,
    out_estimate: *mut f64,
    out_levels: *mut u32,
    out_converged: *mut bool,
) -> ErgoStatus {
    guard(|| {
        let p = norm(p)?;
        let est = estimate_largest(&ematrix(m)?, p, rel_tol, max_level)?;
        write_estimate(est, out_estimate, out_levels, out_converged)
    })
}

/// Lower bound on the smallest non-trivial modulus. With `use_alpha` false
/// the matrix must be nonsingular; otherwise `A + alpha J` is inverted, which
/// requires a zero trivial eigenvalue that is simple.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_smallest_bound(
    m: *const ErgoMatrix,
    p: u32,
    k: u64,
    use_alpha: bool,
    alpha: f64,
    out: *mut f64,
) -> ErgoStatus {
    guard(|| {
        let p = norm(p)?;
        let a = ematrix(m)?;
        let value = if use_alpha {
            smallest_bound_singular(&a, p, k, alpha)?
        } else {
            smallest_bound_nonsingular(&a, p, k)?
        };
        write(out, value)
    })
}

/// Doubling estimate of the smallest non-trivial modulus; `use_alpha` as in
/// [`ergo_smallest_bound`].
///
/// # Safety
/// `m` must be a live handle; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_estimate_smallest(
    m: *const ErgoMatrix,
    p: u32,
    rel_tol: f64,
    max_level: u32,
    use_alpha: bool,
    alpha: f64,
    out_estimate: *mut f64,
    out_levels: *mut u32,
    out_converged: *mut bool,
) -> ErgoStatus {
    guard(|| {
        let p = norm(p)?;
        let est = estimate_smallest(
            &ematrix(m)?,
            p,
            rel_tol,
            max_level,
            use_alpha.then_some(alpha),
        )?;
        write_estimate(est, out_estimate, out_levels, out_converged)
    })
}

/// Creates a graph on `n` vertices from `edge_count` zero-based pairs stored
/// as `edges[2i], edges[2i + 1]`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (it may be null
/// when `edge_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut ErgoGraph,
) -> ErgoStatus {
    guard(|| {
        let pairs: Vec<(usize, usize)> = if edge_count == 0 {
            Vec::new()
        } else {
            if edges.is_null() {
                return Err(null("edges"));
            }
            std::slice::from_raw_parts(edges, 2 * edge_count)
                .chunks_exact(2)
                .map(|c| (c[0], c[1]))
                .collect()
        };
        let inner = Graph::new(n, pairs)?;
        emit(out, ErgoGraph { inner })
    })
}

/// Parses an edge list (`u v` per line, optional `n <count>` line, `#`
/// comments).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_graph_parse(
    text: *const c_char,
    one_based: bool,
    out: *mut *mut ErgoGraph,
) -> ErgoStatus {
    guard(|| {
        let inner = Graph::parse(utf8(text)?, one_based)?;
        emit(out, ErgoGraph { inner })
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ergo_graph_free(g: *mut ErgoGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count of `g`, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ergo_graph_vertex_count(g: *const ErgoGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.n())
}

/// Laplacian `D - Adj` as a new matrix handle.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_graph_laplacian(
    g: *const ErgoGraph,
    out: *mut *mut ErgoMatrix,
) -> ErgoStatus {
    guard(|| {
        let inner = laplacian(graph_ref(g)?).into_matrix();
        emit(out, ErgoMatrix { inner })
    })
}

/// Closed-form `tau_1` and `tau_inf` of the Laplacian.
///
/// # Safety
/// `g` must be a live handle; both out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_graph_tau(
    g: *const ErgoGraph,
    out_tau1: *mut u64,
    out_tau_inf: *mut u64,
) -> ErgoStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if out_tau_inf.is_null() {
            return Err(null("output pointer"));
        }
        write(out_tau1, tau1_laplacian(g))?;
        write(out_tau_inf, tau_inf_laplacian(g))
    })
}

/// Lower bound on the algebraic connectivity through `(L + alpha J)^-k`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_graph_connectivity_bound(
    g: *const ErgoGraph,
    p: u32,
    k: u64,
    alpha: f64,
    out: *mut f64,
) -> ErgoStatus {
    guard(|| {
        let p = norm(p)?;
        let report = connectivity_lower_bound_shift(graph_ref(g)?, p, k, alpha)?;
        write(out, report.lower_bound)
    })
}

/// Lower bound on the algebraic connectivity maximized over diagonal shifts
/// `(L + alpha I)^-k`; `out_alpha` (may be null) receives the best shift.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_graph_connectivity_bound_sup(
    g: *const ErgoGraph,
    p: u32,
    k: u64,
    out: *mut f64,
    out_alpha: *mut f64,
) -> ErgoStatus {
    guard(|| {
        let p = norm(p)?;
        let report = connectivity_lower_bound_sup_default(graph_ref(g)?, p, k)?;
        write(out, report.lower_bound)?;
        if !out_alpha.is_null() {
            out_alpha.write(report.alpha_used);
        }
        Ok(())
    })
}
