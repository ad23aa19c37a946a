//! C ABI over the `rca` crate.
//!
//! Matrices cross the boundary as row-major `double` buffers with explicit
//! row and column counts. Fits live behind opaque handles that the caller
//! releases with the matching `*_free` function. Every fallible call returns
//! an [`RcaStatus`]; on failure `rca_last_error()` describes the problem for
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rca::itrca::predict_view1_rows;
use rca::{
    cca_fit, iterative_rca, ppca_fit, rca_fit, CcaFit, CovarianceSpec, ItrcaConfig, Matrix,
    Predictor, RankRule, RcaError, RcaFit, SharedPrivateModel,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    NotSymmetric = 5,
    NotPositiveDefinite = 6,
    DegenerateView = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

/// Rank rule for the shared/private fit.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcaRankRule {
    SamplingEdge = 0,
    Strict = 1,
}

/// Conditional-mean predictor for view 1 given view 2.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcaPredictor {
    Printed = 0,
    Exact = 1,
}

/// Residual-component fit (also produced by the PPCA constructor).
pub struct RcaFitHandle(RcaFit);

/// Canonical correlation fit.
pub struct RcaCcaHandle(CcaFit);

/// Shared/private latent model.
pub struct RcaModelHandle(SharedPrivateModel);

struct Failure(RcaStatus, String);

impl From<RcaError> for Failure {
    fn from(e: RcaError) -> Self {
        let status = status_of(&e);
        Failure(status, e.to_string())
    }
}

fn status_of(e: &RcaError) -> RcaStatus {
    match e {
        RcaError::Dimension { .. } | RcaError::Empty { .. } => RcaStatus::DimensionMismatch,
        RcaError::NonFinite { .. } => RcaStatus::NonFinite,
        RcaError::NotSymmetric { .. } => RcaStatus::NotSymmetric,
        RcaError::NotPositiveDefinite { .. } => RcaStatus::NotPositiveDefinite,
        RcaError::DegenerateView { .. } => RcaStatus::DegenerateView,
        RcaError::Iteration { source, .. } | RcaError::File { source, .. } => status_of(source),
        RcaError::InvalidParameter { .. } | RcaError::SingleClass => RcaStatus::InvalidArgument,
        _ => RcaStatus::Internal,
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RcaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RcaStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            RcaStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(RcaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_matrix(
    data: *const f64,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<Matrix, Failure> {
    if data.is_null() {
        return Err(null(what));
    }
    if rows == 0 || cols == 0 {
        return Err(Failure(
            RcaStatus::DimensionMismatch,
            format!("{what} is empty"),
        ));
    }
    let len = rows
        .checked_mul(cols)
        .ok_or_else(|| Failure(RcaStatus::InvalidArgument, format!("{what} is too large")))?;
    let slice = std::slice::from_raw_parts(data, len);
    Ok(Matrix::from_row_slice(rows, cols, slice))
}

unsafe fn write_out(
    out: *mut f64,
    len: usize,
    values: impl ExactSizeIterator<Item = f64>,
) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len < values.len() {
        return Err(Failure(
            RcaStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    for (i, v) in values.enumerate() {
        *out.add(i) = v;
    }
    Ok(())
}

unsafe fn write_matrix(out: *mut f64, len: usize, m: &Matrix) -> Result<(), Failure> {
    let (r, c) = m.shape();
    write_out(out, len, (0..r * c).map(|k| m[(k / c, k % c)]))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null("handle"))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn rca_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Fits the residual components of `gram` (`n × n`) against `sigma`.
/// A NULL `sigma` means `sigma2 · I`.
///
/// # Safety
/// `gram` must hold `n·n` doubles, `sigma` (if non-null) likewise, and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rca_fit_new(
    gram: *const f64,
    n: usize,
    sigma: *const f64,
    sigma2: f64,
    out: *mut *mut RcaFitHandle,
) -> RcaStatus {
    guard(|| {
        let g = read_matrix(gram, n, n, "gram")?;
        let spec = if sigma.is_null() {
            CovarianceSpec::ScaledIdentity(sigma2)
        } else {
            CovarianceSpec::Explicit(read_matrix(sigma, n, n, "sigma")?)
        };
        let fit = rca_fit(&g, &spec)?;
        put(out, Box::into_raw(Box::new(RcaFitHandle(fit))))
    })
}

/// Probabilistic PCA of `y` (`rows × cols`, one sample per row) with noise
/// variance `sigma2`. The handle's loadings are the maximum-likelihood `W`.
///
/// # Safety
/// `y` must hold `rows·cols` doubles and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rca_ppca_new(
    y: *const f64,
    rows: usize,
    cols: usize,
    sigma2: f64,
    out: *mut *mut RcaFitHandle,
) -> RcaStatus {
    guard(|| {
        let y = read_matrix(y, rows, cols, "y")?;
        let fit = ppca_fit(&y, sigma2)?;
        put(out, Box::into_raw(Box::new(RcaFitHandle(fit.rca))))
    })
}

/// Dimension `n` and retained rank `q` of a fit.
///
/// # Safety
/// `h` must come from `rca_fit_new`/`rca_ppca_new`; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rca_fit_shape(
    h: *const RcaFitHandle,
    n: *mut usize,
    q: *mut usize,
) -> RcaStatus {
    guard(|| {
        let fit = &handle(h)?.0;
        put(n, fit.eig.values.len())?;
        put(q, fit.q)
    })
}

/// Copies all `n` generalized eigenvalues, descending.
///
/// # Safety
/// `h` must be a live fit handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rca_fit_eigenvalues(
    h: *const RcaFitHandle,
    out: *mut f64,
    len: usize,
) -> RcaStatus {
    guard(|| write_out(out, len, handle(h)?.0.eig.values.iter().copied()))
}

/// Copies the `n × q` loadings, row-major.
///
/// # Safety
/// `h` must be a live fit handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rca_fit_loadings(
    h: *const RcaFitHandle,
    out: *mut f64,
    len: usize,
) -> RcaStatus {
    guard(|| write_matrix(out, len, &handle(h)?.0.loadings))
}

/// Log-likelihood stored with the fit.
///
/// # Safety
/// `h` must be a live fit handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rca_fit_log_likelihood(
    h: *const RcaFitHandle,
    out: *mut f64,
) -> RcaStatus {
    guard(|| put(out, handle(h)?.0.log_likelihood))
}

/// Releases a fit handle. NULL is ignored.
///
/// # Safety
/// `h` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rca_fit_free(h: *mut RcaFitHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Canonical correlation analysis of two views sharing `rows` samples.
///
/// # Safety
/// `y1` must hold `rows·d1` doubles, `y2` `rows·d2`, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rca_cca_new(
    y1: *const f64,
    y2: *const f64,
    rows: usize,
    d1: usize,
    d2: usize,
    out: *mut *mut RcaCcaHandle,
) -> RcaStatus {
    guard(|| {
        let a = read_matrix(y1, rows, d1, "y1")?;
        let b = read_matrix(y2, rows, d2, "y2")?;
        let fit = cca_fit(&a, &b)?;
        put(out, Box::into_raw(Box::new(RcaCcaHandle(fit))))
    })
}

/// Number of retained canonical pairs.
///
/// # Safety
/// `h` must be a live CCA handle and `q` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rca_cca_rank(h: *const RcaCcaHandle, q: *mut usize) -> RcaStatus {
    guard(|| put(q, handle(h)?.0.q()))
}

/// Copies the `q` canonical correlations, descending.
///
/// # Safety
/// `h` must be a live CCA handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rca_cca_correlations(
    h: *const RcaCcaHandle,
    out: *mut f64,
    len: usize,
) -> RcaStatus {
    guard(|| write_out(out, len, handle(h)?.0.correlations.iter().copied()))
}

/// Copies the canonical directions of `view` (1 or 2), `d_view × q` row-major.
///
/// # Safety
/// `h` must be a live CCA handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rca_cca_directions(
    h: *const RcaCcaHandle,
    view: u32,
    out: *mut f64,
    len: usize,
) -> RcaStatus {
    guard(|| {
        let fit = &handle(h)?.0;
        match view {
            1 => write_matrix(out, len, &fit.s1),
            2 => write_matrix(out, len, &fit.s2),
            _ => Err(Failure(
                RcaStatus::InvalidArgument,
                format!("view must be 1 or 2, got {view}"),
            )),
        }
    })
}

/// Releases a CCA handle. NULL is ignored.
///
/// # Safety
/// `h` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rca_cca_free(h: *mut RcaCcaHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Fits the shared/private model. `tol <= 0` selects the default tolerance.
///
/// # Safety
/// `y1` must hold `rows·d1` doubles, `y2` `rows·d2`, and `out` must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn rca_itrca_new(
    y1: *const f64,
    y2: *const f64,
    rows: usize,
    d1: usize,
    d2: usize,
    alpha: f64,
    tol: f64,
    max_iter: usize,
    rank_rule: RcaRankRule,
    out: *mut *mut RcaModelHandle,
) -> RcaStatus {
    guard(|| {
        let a = read_matrix(y1, rows, d1, "y1")?;
        let b = read_matrix(y2, rows, d2, "y2")?;
        let config = ItrcaConfig {
            alpha,
            tol: (tol > 0.0).then_some(tol),
            max_iter,
            rank_rule: match rank_rule {
                RcaRankRule::SamplingEdge => RankRule::SamplingEdge,
                RcaRankRule::Strict => RankRule::Strict,
            },
        };
        let model = iterative_rca(&a, &b, &config)?;
        put(out, Box::into_raw(Box::new(RcaModelHandle(model))))
    })
}

/// Shared rank and the two private ranks.
///
/// # Safety
/// `h` must be a live model handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rca_itrca_ranks(
    h: *const RcaModelHandle,
    qs: *mut usize,
    q1: *mut usize,
    q2: *mut usize,
) -> RcaStatus {
    guard(|| {
        let (a, b, s) = handle(h)?.0.ranks();
        put(q1, a)?;
        put(q2, b)?;
        put(qs, s)
    })
}

/// Iterations run, whether the tolerance was met, and the final log-likelihood.
///
/// # Safety
/// `h` must be a live model handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rca_itrca_summary(
    h: *const RcaModelHandle,
    iterations: *mut usize,
    converged: *mut bool,
    log_likelihood: *mut f64,
) -> RcaStatus {
    guard(|| {
        let m = &handle(h)?.0;
        put(iterations, m.iterations())?;
        put(converged, m.converged)?;
        put(log_likelihood, m.final_log_likelihood().unwrap_or(f64::NAN))
    })
}

/// Predicts view 1 for each row of `y2` (`rows × d2`), writing `rows × d1`
/// values row-major into `out`.
///
/// # Safety
/// `h` must be a live model handle, `y2` must hold `rows·d2` doubles and `out`
/// must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rca_itrca_predict(
    h: *const RcaModelHandle,
    y2: *const f64,
    rows: usize,
    predictor: RcaPredictor,
    out: *mut f64,
    len: usize,
) -> RcaStatus {
    guard(|| {
        let m = &handle(h)?.0;
        let input = read_matrix(y2, rows, m.d2(), "y2")?;
        let p = match predictor {
            RcaPredictor::Printed => Predictor::Printed,
            RcaPredictor::Exact => Predictor::Exact,
        };
        write_matrix(out, len, &predict_view1_rows(m, &input, p)?)
    })
}

/// Releases a model handle. NULL is ignored.
///
/// # Safety
/// `h` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rca_itrca_free(h: *mut RcaModelHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
