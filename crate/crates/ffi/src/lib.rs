//! C ABI over `bw-core`.
//!
//! Every function returns a [`BwStatus`]; results are written through out
//! pointers. Distributions and fits live behind opaque handles that the caller
//! releases with the matching `_free` function. The message of the most
//! recent failure on the calling thread is available from
//! [`bw_last_error_message`].

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use bw_core::dist;
use bw_core::estimation::{fit_mle, FitOptions, FitResult, Model};
use bw_core::moments::moment_summary;
use bw_core::quantile;
use bw_core::rng::SeededStream;
use bw_core::{BwError, BwParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BwStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Range = 3,
    Convergence = 4,
    Integration = 5,
    Validity = 6,
    Parse = 7,
    Report = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BwModel {
    Bw = 0,
    BurrIii = 1,
    Weibull = 2,
}

/// Opaque distribution handle.
pub struct BwDist {
    params: BwParams,
}

/// Opaque fit-result handle.
pub struct BwFit {
    result: FitResult,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BwMomentSummary {
    pub raw_moments: [f64; 6],
    pub sd: f64,
    pub cv: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &BwError) -> BwStatus {
    match e {
        BwError::Domain(_) => BwStatus::Domain,
        BwError::Range(_) => BwStatus::Range,
        BwError::Convergence(_) => BwStatus::Convergence,
        BwError::Integration(_) => BwStatus::Integration,
        BwError::Validity(_) => BwStatus::Validity,
        BwError::Parse { .. } => BwStatus::Parse,
        BwError::Report(_) => BwStatus::Report,
        BwError::Io(_) => BwStatus::Io,
    }
}

enum Fail {
    Core(BwError),
    Null(&'static str),
    Buffer(usize),
}

impl From<BwError> for Fail {
    fn from(e: BwError) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BwStatus::Ok,
        Ok(Err(Fail::Core(e))) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            BwStatus::NullPointer
        }
        Ok(Err(Fail::Buffer(need))) => {
            set_error(format!("buffer too small, need {need} elements"));
            BwStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("panic inside bw-ffi".into());
            BwStatus::Panic
        }
    }
}

fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    // SAFETY: callers pass either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or(Fail::Null(what))
}

fn dist_ref<'a>(d: *const BwDist) -> Result<&'a BwDist, Fail> {
    // SAFETY: non-null handles come from `bw_dist_new` and are live until freed.
    unsafe { d.as_ref() }.ok_or(Fail::Null("dist"))
}

fn fit_ref<'a>(f: *const BwFit) -> Result<&'a BwFit, Fail> {
    // SAFETY: non-null handles come from `bw_fit` and are live until freed.
    unsafe { f.as_ref() }.ok_or(Fail::Null("fit"))
}

/// Copies the last error message of this thread into `buf` (NUL terminated,
/// truncated to `len - 1` bytes). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn bw_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            // SAFETY: `buf` holds `len` bytes and `n < len`.
            unsafe {
                std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// Creates a distribution handle; all four parameters must be finite and positive.
///
/// # Safety
/// `out_dist` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn bw_dist_new(c: f64, k: f64, lambda: f64, beta: f64, out_dist: *mut *mut BwDist) -> BwStatus {
    guard(|| {
        let slot = out(out_dist, "out_dist")?;
        let params = BwParams::new(c, k, lambda, beta)?;
        *slot = Box::into_raw(Box::new(BwDist { params }));
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a handle from `bw_dist_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bw_dist_free(d: *mut BwDist) {
    if !d.is_null() {
        // SAFETY: see the contract above.
        drop(unsafe { Box::from_raw(d) });
    }
}

fn eval(d: *const BwDist, x: f64, y: *mut f64, f: fn(&BwParams, f64) -> bw_core::Result<f64>) -> BwStatus {
    guard(|| {
        let d = dist_ref(d)?;
        let y = out(y, "out")?;
        *y = f(&d.params, x)?;
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle and `y` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bw_dist_pdf(d: *const BwDist, x: f64, y: *mut f64) -> BwStatus {
    eval(d, x, y, dist::pdf)
}

/// # Safety
/// `d` must be a live handle and `y` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bw_dist_cdf(d: *const BwDist, x: f64, y: *mut f64) -> BwStatus {
    eval(d, x, y, dist::cdf)
}

/// # Safety
/// `d` must be a live handle and `y` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bw_dist_survival(d: *const BwDist, x: f64, y: *mut f64) -> BwStatus {
    eval(d, x, y, dist::survival)
}

/// # Safety
/// `d` must be a live handle and `y` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bw_dist_hazard(d: *const BwDist, x: f64, y: *mut f64) -> BwStatus {
    eval(d, x, y, dist::hazard)
}

/// # Safety
/// `d` must be a live handle and `x` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bw_dist_quantile(d: *const BwDist, u: f64, x: *mut f64) -> BwStatus {
    eval(d, u, x, quantile::quantile)
}

/// Writes `n` variates from stream `(seed, stream)` into `buf`.
///
/// # Safety
/// `d` must be a live handle and `buf` must hold `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bw_dist_sample(d: *const BwDist, n: usize, seed: u64, stream: u64, buf: *mut f64) -> BwStatus {
    guard(|| {
        let d = dist_ref(d)?;
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        let xs = quantile::sample(&d.params, n, SeededStream::new(seed, stream))?;
        // SAFETY: `buf` holds `n` doubles per the contract.
        unsafe { std::ptr::copy_nonoverlapping(xs.as_ptr(), buf, n) };
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle and `m` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bw_dist_moments(d: *const BwDist, m: *mut BwMomentSummary) -> BwStatus {
    guard(|| {
        let d = dist_ref(d)?;
        let m = out(m, "out")?;
        let s = moment_summary(&d.params)?;
        *m = BwMomentSummary {
            raw_moments: s.raw_moments,
            sd: s.sd,
            cv: s.cv,
            skewness: s.skewness,
            kurtosis: s.kurtosis,
        };
        Ok(())
    })
}

/// Maximum likelihood fit of `model` to `n` observations.
///
/// # Safety
/// `data` must point to `n` readable doubles and `out_fit` to writable storage
/// for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn bw_fit(
    data: *const f64,
    n: usize,
    model: BwModel,
    multistart: usize,
    seed: u64,
    out_fit: *mut *mut BwFit,
) -> BwStatus {
    guard(|| {
        let slot = out(out_fit, "out_fit")?;
        if data.is_null() {
            return Err(Fail::Null("data"));
        }
        // SAFETY: `data` holds `n` doubles per the contract.
        let x = unsafe { std::slice::from_raw_parts(data, n) };
        let model = match model {
            BwModel::Bw => Model::Bw,
            BwModel::BurrIii => Model::BurrIII,
            BwModel::Weibull => Model::Weibull,
        };
        let opts = FitOptions {
            multistart_count: multistart,
            seed,
            ..FitOptions::default()
        };
        let result = fit_mle(x, model, &opts)?;
        *slot = Box::into_raw(Box::new(BwFit { result }));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle from `bw_fit` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bw_fit_free(f: *mut BwFit) {
    if !f.is_null() {
        // SAFETY: see the contract above.
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Copies the fitted parameters (4 for BW, 2 for the components) into `buf`
/// and their count into `count`.
///
/// # Safety
/// `f` must be a live handle, `buf` must hold `len` doubles and `count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bw_fit_params(f: *const BwFit, buf: *mut f64, len: usize, count: *mut usize) -> BwStatus {
    guard(|| {
        let f = fit_ref(f)?;
        let count = out(count, "count")?;
        let p = &f.result.params;
        *count = p.len();
        if len < p.len() {
            return Err(Fail::Buffer(p.len()));
        }
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        // SAFETY: `buf` holds `len >= p.len()` doubles.
        unsafe { std::ptr::copy_nonoverlapping(p.as_ptr(), buf, p.len()) };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BwFitSummary {
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub aicc: f64,
    pub gradient_norm: f64,
    pub n: usize,
    pub iterations: u64,
    pub converged: bool,
}

/// # Safety
/// `f` must be a live handle and `s` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bw_fit_summary(f: *const BwFit, s: *mut BwFitSummary) -> BwStatus {
    guard(|| {
        let r = &fit_ref(f)?.result;
        *out(s, "out")? = BwFitSummary {
            log_likelihood: r.log_likelihood,
            aic: r.aic,
            bic: r.bic,
            aicc: r.aicc,
            gradient_norm: r.gradient_norm_at_solution,
            n: r.n,
            iterations: r.iterations,
            converged: r.converged,
        };
        Ok(())
    })
}
