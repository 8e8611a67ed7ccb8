//! C ABI for `apo-core`.
//!
//! Every fallible function returns an [`ApoStatus`]; `APO_STATUS_OK` is zero.
//! On failure a message is stored per thread and can be read with
//! [`apo_last_error_message`]. Results are returned through opaque
//! [`ApoResultHandle`] pointers that must be released with [`apo_result_free`].
//!
//! No function unwinds across the boundary: panics are caught and reported as
//! `APO_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use apo_core::apo::{optimize, ApoParams, ApoResult};
use apo_core::bench::benchmark;
use apo_core::segmentation::{mcet_objective, psnr, solve_thresholds, ssim, GrayHistogram, RgbImage};
use apo_core::space::{Bounds, ObjectiveFn};
use apo_core::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Parameter = 4,
    Budget = 5,
    InvalidFitness = 6,
    Config = 7,
    Input = 8,
    OutOfRange = 9,
    Internal = 10,
    Panic = 11,
}

/// One line of the convergence trace.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApoTraceEntry {
    pub iter: usize,
    pub fes: usize,
    pub best: f64,
    pub diversity: f64,
}

/// Objective callback: returns `f(x)` for the `dim` values at `x`.
pub type ApoObjectiveCallback = Option<unsafe extern "C" fn(x: *const f64, dim: usize, user_data: *mut c_void) -> f64>;

/// Opaque run result.
pub struct ApoResultHandle {
    result: ApoResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> ApoStatus {
    match e {
        Error::Dimension { .. } => ApoStatus::Dimension,
        Error::Parameter(_) | Error::Bounds(_) => ApoStatus::Parameter,
        Error::Budget { .. } => ApoStatus::Budget,
        Error::InvalidFitness { .. } => ApoStatus::InvalidFitness,
        Error::Config(_) => ApoStatus::Config,
        Error::Input(_) | Error::Format { .. } | Error::UnsupportedVariant(_) | Error::Transform(_) => ApoStatus::Input,
        _ => ApoStatus::Internal,
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (ApoStatus, String)>) -> ApoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ApoStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ApoStatus::Panic
        }
    }
}

fn core_err(e: Error) -> (ApoStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (ApoStatus, String) {
    (ApoStatus::NullPointer, format!("{what} is null"))
}

fn params(ps: usize, np: usize, pf_max: f64, max_fes: usize) -> Result<ApoParams, (ApoStatus, String)> {
    ApoParams::new(ps, np, pf_max, max_fes).map_err(core_err)
}

fn store(result: ApoResult, out: *mut *mut ApoResultHandle) {
    let handle = Box::new(ApoResultHandle { result });
    // SAFETY: callers check `out` for null before running the optimizer.
    unsafe { *out = Box::into_raw(handle) };
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn apo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Minimizes a registered benchmark function (e.g. `"sphere"`) over
/// `[-100, 100]^dim`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn apo_optimize_benchmark(
    name: *const c_char,
    dim: usize,
    ps: usize,
    np: usize,
    pf_max: f64,
    max_fes: usize,
    seed: u64,
    out: *mut *mut ApoResultHandle,
) -> ApoStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: checked non-null; caller guarantees NUL termination.
        let name = unsafe { CStr::from_ptr(name) }
            .to_str()
            .map_err(|_| (ApoStatus::InvalidArgument, "name is not UTF-8".to_string()))?;
        let f = benchmark(name, dim).map_err(core_err)?;
        let result = optimize(&f.objective(), &params(ps, np, pf_max, max_fes)?, seed).map_err(core_err)?;
        store(result, out);
        Ok(())
    })
}

struct Callback {
    f: unsafe extern "C" fn(*const f64, usize, *mut c_void) -> f64,
    user_data: *mut c_void,
}

// SAFETY: the optimizer calls the objective only from the thread that entered
// `apo_optimize_callback`, which the caller controls.
unsafe impl Send for Callback {}
unsafe impl Sync for Callback {}

impl Callback {
    fn call(&self, x: &[f64]) -> f64 {
        // SAFETY: the callback contract is the caller's responsibility.
        unsafe { (self.f)(x.as_ptr(), x.len(), self.user_data) }
    }
}

/// Minimizes a caller-supplied objective over the box `[lower, upper]`.
///
/// # Safety
/// `lower` and `upper` must point to `dim` doubles, `out` must be valid, and
/// `callback` must be safe to call with `user_data` for the duration of the run.
#[no_mangle]
pub unsafe extern "C" fn apo_optimize_callback(
    callback: ApoObjectiveCallback,
    user_data: *mut c_void,
    lower: *const f64,
    upper: *const f64,
    dim: usize,
    ps: usize,
    np: usize,
    pf_max: f64,
    max_fes: usize,
    seed: u64,
    out: *mut *mut ApoResultHandle,
) -> ApoStatus {
    guard(|| {
        let f = callback.ok_or_else(|| null("callback"))?;
        if lower.is_null() || upper.is_null() {
            return Err(null("bounds"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        if dim == 0 {
            return Err((ApoStatus::Dimension, "dim must be positive".into()));
        }
        // SAFETY: checked non-null; caller guarantees `dim` readable values.
        let (lo, hi) = unsafe {
            (
                std::slice::from_raw_parts(lower, dim).to_vec(),
                std::slice::from_raw_parts(upper, dim).to_vec(),
            )
        };
        let bounds = Bounds::new(lo, hi).map_err(core_err)?;
        let cb = Callback { f, user_data };
        let objective = ObjectiveFn::new("callback", bounds, move |x| cb.call(x));
        let result = optimize(&objective, &params(ps, np, pf_max, max_fes)?, seed).map_err(core_err)?;
        store(result, out);
        Ok(())
    })
}

fn handle<'a>(h: *const ApoResultHandle) -> Option<&'a ApoResult> {
    // SAFETY: non-null handles come from `store` and live until `apo_result_free`.
    unsafe { h.as_ref() }.map(|h| &h.result)
}

/// Best objective value, or NaN for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apo_result_best_fitness(h: *const ApoResultHandle) -> f64 {
    handle(h).map_or(f64::NAN, |r| r.best.fitness)
}

/// Dimension of the best position (0 for a null handle).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apo_result_dim(h: *const ApoResultHandle) -> usize {
    handle(h).map_or(0, |r| r.best.position.len())
}

/// Evaluations consumed (0 for a null handle).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apo_result_fes_used(h: *const ApoResultHandle) -> usize {
    handle(h).map_or(0, |r| r.fes_used)
}

/// Copies the best position into `out`, which must hold `len >= dim` doubles.
///
/// # Safety
/// `h` must be null or a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn apo_result_best_position(h: *const ApoResultHandle, out: *mut f64, len: usize) -> ApoStatus {
    guard(|| {
        let r = handle(h).ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let x = &r.best.position;
        if len < x.len() {
            return Err((ApoStatus::OutOfRange, format!("buffer holds {len} values, need {}", x.len())));
        }
        // SAFETY: checked non-null and large enough.
        unsafe { ptr::copy_nonoverlapping(x.as_ptr(), out, x.len()) };
        Ok(())
    })
}

/// Number of trace entries (0 for a null handle).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apo_result_trace_len(h: *const ApoResultHandle) -> usize {
    handle(h).map_or(0, |r| r.trace.len())
}

/// Reads trace entry `index`.
///
/// # Safety
/// `h` must be null or a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn apo_result_trace_entry(h: *const ApoResultHandle, index: usize, out: *mut ApoTraceEntry) -> ApoStatus {
    guard(|| {
        let r = handle(h).ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let rec = r
            .trace
            .get(index)
            .ok_or_else(|| (ApoStatus::OutOfRange, format!("trace has {} entries", r.trace.len())))?;
        // SAFETY: checked non-null.
        unsafe {
            *out = ApoTraceEntry {
                iter: rec.iter,
                fes: rec.fes,
                best: rec.best,
                diversity: rec.diversity,
            }
        };
        Ok(())
    })
}

/// Releases a result. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apo_result_free(h: *mut ApoResultHandle) {
    if !h.is_null() {
        // SAFETY: the handle came from `Box::into_raw` in `store`.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Minimum cross-entropy thresholds for a 256-bin histogram. Writes `n` gray
/// values (0-based, strictly increasing) to `thresholds` and the objective
/// value to `objective` when it is not null.
///
/// # Safety
/// `counts` must point to 256 values and `thresholds` to `n` writable values.
#[no_mangle]
pub unsafe extern "C" fn apo_mcet_thresholds(
    counts: *const u64,
    n: usize,
    ps: usize,
    iters: usize,
    seed: u64,
    thresholds: *mut u32,
    objective: *mut f64,
) -> ApoStatus {
    guard(|| {
        if counts.is_null() {
            return Err(null("counts"));
        }
        if thresholds.is_null() {
            return Err(null("thresholds"));
        }
        let mut c = [0u64; 256];
        // SAFETY: caller guarantees 256 readable values.
        c.copy_from_slice(unsafe { std::slice::from_raw_parts(counts, 256) });
        let hist = GrayHistogram::from_counts(c).map_err(core_err)?;
        let p = ApoParams::with_generations(ps, 1, 0.1, iters).map_err(core_err)?;
        let ts = solve_thresholds(&hist, n, &p, seed).map_err(core_err)?;
        for (k, &t) in ts.as_slice().iter().enumerate() {
            // SAFETY: caller guarantees `n` writable slots; `ts` has exactly `n`.
            unsafe { *thresholds.add(k) = (t - 1) as u32 };
        }
        if !objective.is_null() {
            // SAFETY: checked non-null.
            unsafe { *objective = mcet_objective(&hist, &ts) };
        }
        Ok(())
    })
}

unsafe fn image(rgb: *const u8, width: usize, height: usize) -> Result<RgbImage, (ApoStatus, String)> {
    if rgb.is_null() {
        return Err(null("image"));
    }
    let len = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| (ApoStatus::InvalidArgument, "image too large".to_string()))?;
    // SAFETY: caller guarantees `3 * width * height` readable bytes.
    let data = unsafe { std::slice::from_raw_parts(rgb, len) };
    RgbImage::from_interleaved(width, height, data).map_err(core_err)
}

/// PSNR in dB between two interleaved RGB images; `+inf` when identical.
///
/// # Safety
/// `a` and `b` must point to `3 * width * height` bytes; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn apo_psnr(a: *const u8, b: *const u8, width: usize, height: usize, out: *mut f64) -> ApoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (ia, ib) = unsafe { (image(a, width, height)?, image(b, width, height)?) };
        let v = psnr(&ia, &ib).map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = v };
        Ok(())
    })
}

/// Mean SSIM over 8x8 windows and channels of two interleaved RGB images.
///
/// # Safety
/// `a` and `b` must point to `3 * width * height` bytes; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn apo_ssim(a: *const u8, b: *const u8, width: usize, height: usize, out: *mut f64) -> ApoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (ia, ib) = unsafe { (image(a, width, height)?, image(b, width, height)?) };
        let v = ssim(&ia, &ib).map_err(core_err)?;
        // SAFETY: checked non-null.
        unsafe { *out = v };
        Ok(())
    })
}
