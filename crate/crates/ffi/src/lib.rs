//! C ABI over `trimdist`.
//!
//! Every function returns a [`TdStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and read with
//! [`td_last_error`]. Handles are opaque and released with their `_free`
//! function. Panics never cross the boundary: they come back as
//! `TD_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trimdist::{
    empirical_cdf, gaussian_trimmed_distance, min_contamination_level, mixture_cdf, oracle_distance, trimmed_distance,
    uniform_nodes, DistributionSpec, GridFunction, Regime, TrimError, TrimParams, TrimResult,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdStatus {
    Ok = 0,
    InvalidInput = 1,
    UnsupportedDistribution = 2,
    UnsupportedCase = 3,
    BoundaryDegenerate = 4,
    DegenerateCase = 5,
    NotAttained = 6,
    NullPointer = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Curves stored in a [`TdTrimResult`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdCurve {
    /// The optimal trimming function `h_α`.
    HOpt = 0,
    /// `h_α(t) - t / (1 - α)`.
    HTilde = 1,
    /// `Γ = F0 ∘ F⁻¹`.
    Gamma = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdRegime {
    LocationShift = 0,
    ScaleBelowOne = 1,
    ScaleInBand = 2,
    ScaleAboveBand = 3,
}

/// Opaque distribution handle.
pub struct TdDistribution(DistributionSpec);

/// Opaque result of [`td_trimmed_distance`].
pub struct TdTrimResult(TrimResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(TdStatus, String);

impl From<TrimError> for Failure {
    fn from(e: TrimError) -> Self {
        let status = match e {
            TrimError::InvalidInput(_) => TdStatus::InvalidInput,
            TrimError::UnsupportedDistribution(_) => TdStatus::UnsupportedDistribution,
            TrimError::UnsupportedCase(_) => TdStatus::UnsupportedCase,
            TrimError::BoundaryDegenerate(_) => TdStatus::BoundaryDegenerate,
            TrimError::DegenerateCase(_) => TdStatus::DegenerateCase,
            TrimError::NotAttained { .. } => TdStatus::NotAttained,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(TdStatus::NullPointer, format!("{name} is null"))
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_last_error();
            TdStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            TdStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn slice<'a>(data: *const f64, len: usize, name: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

fn boxed_distribution(spec: DistributionSpec) -> *mut TdDistribution {
    Box::into_raw(Box::new(TdDistribution(spec)))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn td_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `N(mu, sigma²)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn td_distribution_normal(mu: f64, sigma: f64, out: *mut *mut TdDistribution) -> TdStatus {
    guard(|| {
        let spec = DistributionSpec::normal(mu, sigma)?;
        write(out, boxed_distribution(spec), "out")
    })
}

/// `U(a, b)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn td_distribution_uniform(a: f64, b: f64, out: *mut *mut TdDistribution) -> TdStatus {
    guard(|| {
        let spec = DistributionSpec::uniform(a, b)?;
        write(out, boxed_distribution(spec), "out")
    })
}

/// Empirical law of `n` values; the data is copied.
///
/// # Safety
/// `sample` must point to `n` readable doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn td_distribution_empirical(
    sample: *const f64,
    n: usize,
    out: *mut *mut TdDistribution,
) -> TdStatus {
    guard(|| {
        let spec = empirical_cdf(slice(sample, n, "sample")?)?;
        write(out, boxed_distribution(spec), "out")
    })
}

/// `(1 - alpha) base + alpha other`. The inputs stay owned by the caller.
///
/// # Safety
/// `base` and `other` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn td_distribution_mixture(
    base: *const TdDistribution,
    other: *const TdDistribution,
    alpha: f64,
    out: *mut *mut TdDistribution,
) -> TdStatus {
    guard(|| {
        let spec = mixture_cdf(&borrow(base, "base")?.0, &borrow(other, "other")?.0, alpha)?;
        write(out, boxed_distribution(spec), "out")
    })
}

/// # Safety
/// `dist` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn td_distribution_free(dist: *mut TdDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// # Safety
/// `dist` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn td_distribution_cdf(dist: *const TdDistribution, x: f64, out: *mut f64) -> TdStatus {
    guard(|| {
        let d = borrow(dist, "dist")?;
        write(out, d.0.cdf(x), "out")
    })
}

/// `d_K(F0, R_α(F))`. `grid_size` is ignored for an empirical `f`.
///
/// # Safety
/// `f0` and `f` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn td_trimmed_distance(
    f0: *const TdDistribution,
    f: *const TdDistribution,
    alpha: f64,
    grid_size: usize,
    out: *mut *mut TdTrimResult,
) -> TdStatus {
    guard(|| {
        let params = TrimParams::new(alpha)?;
        let r = trimmed_distance(&borrow(f0, "f0")?.0, &borrow(f, "f")?.0, params, grid_size)?;
        write(out, Box::into_raw(Box::new(TdTrimResult(r))), "out")
    })
}

/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn td_trim_result_distance(result: *const TdTrimResult, out: *mut f64) -> TdStatus {
    guard(|| write(out, borrow(result, "result")?.0.distance, "out"))
}

fn curve(r: &TrimResult, which: TdCurve) -> &GridFunction {
    match which {
        TdCurve::HOpt => &r.h_opt,
        TdCurve::HTilde => &r.h_tilde,
        TdCurve::Gamma => &r.gamma,
    }
}

/// Number of `(t, value)` rows in a curve, counting both sides of a jump.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn td_trim_result_curve_len(
    result: *const TdTrimResult,
    which: TdCurve,
    out: *mut usize,
) -> TdStatus {
    guard(|| write(out, curve(&borrow(result, "result")?.0, which).samples().len(), "out"))
}

/// Copies a curve's rows into `t` and `value`, each of capacity `cap`.
/// At a jump the left value comes first. Fails with
/// `TD_STATUS_BUFFER_TOO_SMALL` when `cap` is short, writing nothing.
///
/// # Safety
/// `t` and `value` must each point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn td_trim_result_curve_copy(
    result: *const TdTrimResult,
    which: TdCurve,
    t: *mut f64,
    value: *mut f64,
    cap: usize,
) -> TdStatus {
    guard(|| {
        let rows = curve(&borrow(result, "result")?.0, which).samples();
        if rows.len() > cap {
            return Err(Failure(
                TdStatus::BufferTooSmall,
                format!("curve has {} rows, buffer holds {cap}", rows.len()),
            ));
        }
        if t.is_null() || value.is_null() {
            return Err(null("t or value"));
        }
        for (i, (x, v)) in rows.into_iter().enumerate() {
            t.add(i).write(x);
            value.add(i).write(v);
        }
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn td_trim_result_free(result: *mut TdTrimResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Closed form for `N(mu, sigma²)` against `N(0, 1)`. `regime` may be null.
///
/// # Safety
/// `distance` must be writable; `regime` null or writable.
#[no_mangle]
pub unsafe extern "C" fn td_gaussian_trimmed_distance(
    mu: f64,
    sigma: f64,
    alpha: f64,
    distance: *mut f64,
    regime: *mut TdRegime,
) -> TdStatus {
    guard(|| {
        let (d, case) = gaussian_trimmed_distance(mu, sigma, alpha)?;
        write(distance, d, "distance")?;
        if !regime.is_null() {
            regime.write(match case.regime {
                Regime::LocationShift => TdRegime::LocationShift,
                Regime::ScaleBelowOne => TdRegime::ScaleBelowOne,
                Regime::ScaleInBand => TdRegime::ScaleInBand,
                Regime::ScaleAboveBand => TdRegime::ScaleAboveBand,
            });
        }
        Ok(())
    })
}

/// Smallest `alpha` with distance at most `threshold`.
///
/// # Safety
/// `f0` and `f` must be live handles and `alpha_hat` writable.
#[no_mangle]
pub unsafe extern "C" fn td_min_contamination_level(
    f0: *const TdDistribution,
    f: *const TdDistribution,
    threshold: f64,
    grid_size: usize,
    alpha_hat: *mut f64,
) -> TdStatus {
    guard(|| {
        let r = min_contamination_level(&borrow(f0, "f0")?.0, &borrow(f, "f")?.0, threshold, grid_size)?;
        write(alpha_hat, r.alpha_hat, "alpha_hat")
    })
}

/// Bisection oracle on the step heights `F0(x_(1)), ..., F0(x_(n))`.
///
/// # Safety
/// `heights` must point to `n` readable doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn td_oracle_distance(heights: *const f64, n: usize, alpha: f64, out: *mut f64) -> TdStatus {
    guard(|| {
        let h = slice(heights, n, "heights")?;
        if h.is_empty() {
            return Err(Failure(TdStatus::InvalidInput, "no step heights given".into()));
        }
        let mut values = vec![0.0];
        values.extend_from_slice(h);
        let gamma = GridFunction::step_left(uniform_nodes(values.len()), values)?;
        write(out, oracle_distance(&gamma, TrimParams::new(alpha)?)?, "out")
    })
}
