//! C ABI for `collision-cd`.
//!
//! Every fallible function returns a [`CcdStatus`] and writes its result
//! through an out-pointer. Observations and sweep results are opaque
//! handles owned by the caller and released with the matching `_free`
//! function. On failure a human-readable message is available from
//! [`ccd_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use collision_cd::calibration::{self, CalibrationRow, Scenario, SweepConfig};
use collision_cd::inference::{self, CollisionRadius, Distance, Method, Observation};
use collision_cd::specfun::{self, Noncentrality};
use collision_cd::Error;

/// Number of histogram bins in [`CcdPitSummary`].
pub const CCD_PIT_BINS: usize = 20;

const _: () = assert!(CCD_PIT_BINS == calibration::PIT_BINS);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcdStatus {
    Ok = 0,
    DomainError = 1,
    BracketError = 2,
    ConvergenceError = 3,
    OutOfRange = 4,
    InvalidInput = 5,
    NullPointer = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcdMethod {
    Bayes = 0,
    Cd = 1,
}

impl From<CcdMethod> for Method {
    fn from(m: CcdMethod) -> Method {
        match m {
            CcdMethod::Bayes => Method::Bayes,
            CcdMethod::Cd => Method::Cd,
        }
    }
}

/// Opaque observation handle.
pub struct CcdObservation(Observation);

/// Opaque handle to the rows of a calibration sweep.
pub struct CcdSweep(Vec<CalibrationRow>);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CcdEstimate {
    pub delta: f64,
    /// True when the estimate was clipped to δ = 0.
    pub at_boundary: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CcdInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_clipped: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CcdExactRow {
    pub mean_bayes: f64,
    pub mean_cd: f64,
    pub freq_bayes: f64,
    pub freq_cd: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CcdCalibrationRow {
    pub sigma: f64,
    pub n_reps: u64,
    pub mean_noncol_bayes: f64,
    pub mean_noncol_cd: f64,
    pub freq_high_bayes: f64,
    pub freq_high_cd: f64,
    pub stderr_mean_bayes: f64,
    pub stderr_mean_cd: f64,
    pub stderr_freq_bayes: f64,
    pub stderr_freq_cd: f64,
    pub exact: CcdExactRow,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CcdPitSummary {
    pub n: u64,
    pub ks_stat: f64,
    pub critical_value: f64,
    pub passes: bool,
    pub mean: f64,
    pub histogram: [u64; CCD_PIT_BINS],
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CcdStatus {
    match e {
        Error::Domain { .. } => CcdStatus::DomainError,
        Error::Bracket { .. } => CcdStatus::BracketError,
        Error::Convergence { .. } => CcdStatus::ConvergenceError,
        Error::OutOfRange { .. } => CcdStatus::OutOfRange,
        Error::InvalidInput(_) => CcdStatus::InvalidInput,
    }
}

struct Failure(CcdStatus);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        set_last_error(e.to_string());
        Failure(status_of(&e))
    }
}

fn null(name: &str) -> Failure {
    set_last_error(format!("{name} is NULL"));
    Failure(CcdStatus::NullPointer)
}

fn guard<F>(body: F) -> CcdStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CcdStatus::Ok,
        Ok(Err(Failure(s))) => s,
        Err(_) => {
            set_last_error("panic inside collision-cd".into());
            CcdStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    // SAFETY: caller guarantees `out` is valid for writes of `T`.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn observation<'a>(obs: *const CcdObservation) -> Result<&'a Observation, Failure> {
    // SAFETY: caller guarantees a live handle from `ccd_observation_*`.
    unsafe { obs.as_ref() }.map(|o| &o.0).ok_or_else(|| null("obs"))
}

/// Static description of a status code. Never NULL.
#[no_mangle]
pub extern "C" fn ccd_status_string(status: CcdStatus) -> *const c_char {
    let s: &'static std::ffi::CStr = match status {
        CcdStatus::Ok => c"ok",
        CcdStatus::DomainError => c"argument outside the function's domain",
        CcdStatus::BracketError => c"root-finding target not bracketed",
        CcdStatus::ConvergenceError => c"iteration did not converge",
        CcdStatus::OutOfRange => c"probability out of range",
        CcdStatus::InvalidInput => c"invalid input",
        CcdStatus::NullPointer => c"null pointer argument",
        CcdStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message for the most recent failure on this thread, or NULL. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ccd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ccd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn ccd_bessel_i0(x: f64, out: *mut f64) -> CcdStatus {
    guard(|| unsafe { write(out, "out", specfun::bessel_i0(x)?) })
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn ccd_bessel_i0_scaled(x: f64, out: *mut f64) -> CcdStatus {
    guard(|| unsafe { write(out, "out", specfun::bessel_i0_scaled(x)?) })
}

/// Γ₂(x, ν), the CDF of a non-central χ² with two degrees of freedom.
///
/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn ccd_noncentral_chisq2_cdf(x: f64, nu: f64, out: *mut f64) -> CcdStatus {
    guard(|| {
        let p = specfun::noncentral_chisq2_cdf(x, Noncentrality::new(nu)?)?;
        unsafe { write(out, "out", p.get()) }
    })
}

/// Creates an observation from ‖y‖ and σ.
///
/// # Safety
/// `out` must be valid for writing one pointer. Release the handle with
/// [`ccd_observation_free`].
#[no_mangle]
pub unsafe extern "C" fn ccd_observation_from_norm(
    norm: f64,
    sigma: f64,
    out: *mut *mut CcdObservation,
) -> CcdStatus {
    guard(|| {
        let obs = Observation::from_norm(norm, sigma)?;
        unsafe { write(out, "out", Box::into_raw(Box::new(CcdObservation(obs)))) }
    })
}

/// Creates an observation from the displacement pair (y1, y2) and σ.
///
/// # Safety
/// As for [`ccd_observation_from_norm`].
#[no_mangle]
pub unsafe extern "C" fn ccd_observation_from_pair(
    y1: f64,
    y2: f64,
    sigma: f64,
    out: *mut *mut CcdObservation,
) -> CcdStatus {
    guard(|| {
        let obs = Observation::from_pair(y1, y2, sigma)?;
        unsafe { write(out, "out", Box::into_raw(Box::new(CcdObservation(obs)))) }
    })
}

/// # Safety
/// `obs` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ccd_observation_free(obs: *mut CcdObservation) {
    if !obs.is_null() {
        // SAFETY: handle came from Box::into_raw in a constructor above.
        drop(unsafe { Box::from_raw(obs) });
    }
}

/// Shared body of the functions of (observation, δ) below.
unsafe fn eval_at<F>(obs: *const CcdObservation, delta: f64, out: *mut f64, f: F) -> CcdStatus
where
    F: FnOnce(&Observation, Distance) -> Result<f64, Error>,
{
    guard(|| {
        let o = unsafe { observation(obs)? };
        let v = f(o, Distance::new(delta)?)?;
        unsafe { write(out, "out", v) }
    })
}

/// Posterior cumulative B(δ | y).
///
/// # Safety
/// `obs` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn ccd_bayes_cdf(obs: *const CcdObservation, delta: f64, out: *mut f64) -> CcdStatus {
    unsafe { eval_at(obs, delta, out, |o, d| Ok(inference::bayes_cdf(o, d)?.get())) }
}

/// Confidence distribution C(δ | y).
///
/// # Safety
/// `obs` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn ccd_cd_cdf(obs: *const CcdObservation, delta: f64, out: *mut f64) -> CcdStatus {
    unsafe { eval_at(obs, delta, out, |o, d| Ok(inference::cd_cdf(o, d)?.get())) }
}

/// Confidence curve |1 − 2C(δ | y)|.
///
/// # Safety
/// `obs` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn ccd_confidence_curve(obs: *const CcdObservation, delta: f64, out: *mut f64) -> CcdStatus {
    unsafe { eval_at(obs, delta, out, inference::confidence_curve) }
}

/// Credibility curve |1 − 2B(δ | y)|.
///
/// # Safety
/// `obs` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn ccd_credibility_curve(obs: *const CcdObservation, delta: f64, out: *mut f64) -> CcdStatus {
    unsafe { eval_at(obs, delta, out, inference::credibility_curve) }
}

/// Confidence in collision C(R | y).
///
/// # Safety
/// `obs` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn ccd_collision_confidence(
    obs: *const CcdObservation,
    radius: f64,
    out: *mut f64,
) -> CcdStatus {
    guard(|| {
        let o = unsafe { observation(obs)? };
        let p = inference::collision_confidence(o, CollisionRadius::new(radius)?)?;
        unsafe { write(out, "out", p.get()) }
    })
}

/// p-value for no collision, 1 − C(R | y).
///
/// # Safety
/// `obs` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn ccd_noncollision_pvalue(
    obs: *const CcdObservation,
    radius: f64,
    out: *mut f64,
) -> CcdStatus {
    guard(|| {
        let o = unsafe { observation(obs)? };
        let p = inference::noncollision_pvalue(o, CollisionRadius::new(radius)?)?;
        unsafe { write(out, "out", p.get()) }
    })
}

/// δ at which the method's CDF equals `p`, clipped at 0.
///
/// # Safety
/// `obs` must be a live handle and `out` valid for one `CcdEstimate`.
#[no_mangle]
pub unsafe extern "C" fn ccd_quantile(
    obs: *const CcdObservation,
    method: CcdMethod,
    p: f64,
    out: *mut CcdEstimate,
) -> CcdStatus {
    guard(|| {
        let o = unsafe { observation(obs)? };
        let e = inference::quantile(o, method.into(), p)?;
        unsafe {
            write(
                out,
                "out",
                CcdEstimate {
                    delta: e.delta.get(),
                    at_boundary: e.at_boundary,
                },
            )
        }
    })
}

/// # Safety
/// As for [`ccd_quantile`].
#[no_mangle]
pub unsafe extern "C" fn ccd_median(
    obs: *const CcdObservation,
    method: CcdMethod,
    out: *mut CcdEstimate,
) -> CcdStatus {
    unsafe { ccd_quantile(obs, method, 0.5, out) }
}

/// Equal-tailed interval at `level` in (0, 1).
///
/// # Safety
/// `obs` must be a live handle and `out` valid for one `CcdInterval`.
#[no_mangle]
pub unsafe extern "C" fn ccd_level_interval(
    obs: *const CcdObservation,
    method: CcdMethod,
    level: f64,
    out: *mut CcdInterval,
) -> CcdStatus {
    guard(|| {
        let o = unsafe { observation(obs)? };
        let i = inference::level_interval(o, method.into(), level)?;
        unsafe {
            write(
                out,
                "out",
                CcdInterval {
                    lo: i.lo.get(),
                    hi: i.hi.get(),
                    lo_clipped: i.lo_clipped,
                },
            )
        }
    })
}

/// Evaluates B, C and both curves on `grid[0..len]`, writing into the four
/// caller-provided arrays of the same length.
///
/// # Safety
/// `grid` must be readable and `b`, `c`, `cc`, `cred` writable for `len`
/// doubles each.
#[no_mangle]
pub unsafe extern "C" fn ccd_tabulate_curves(
    obs: *const CcdObservation,
    grid: *const f64,
    len: usize,
    b: *mut f64,
    c: *mut f64,
    cc: *mut f64,
    cred: *mut f64,
) -> CcdStatus {
    guard(|| {
        let o = unsafe { observation(obs)? };
        if len == 0 {
            return Ok(());
        }
        for (p, name) in [(b, "b"), (c, "c"), (cc, "cc"), (cred, "cred")] {
            if p.is_null() {
                return Err(null(name));
            }
        }
        if grid.is_null() {
            return Err(null("grid"));
        }
        // SAFETY: non-null and sized by the caller's contract.
        let grid = unsafe { std::slice::from_raw_parts(grid, len) };
        let t = inference::tabulate_curves(o, grid)?;
        unsafe {
            ptr::copy_nonoverlapping(t.b.as_ptr(), b, len);
            ptr::copy_nonoverlapping(t.c.as_ptr(), c, len);
            ptr::copy_nonoverlapping(t.cc.as_ptr(), cc, len);
            ptr::copy_nonoverlapping(t.cred.as_ptr(), cred, len);
        }
        Ok(())
    })
}

fn exact_to_c(e: calibration::ExactSummary) -> CcdExactRow {
    CcdExactRow {
        mean_bayes: e.mean_bayes,
        mean_cd: e.mean_cd,
        freq_bayes: e.freq_bayes,
        freq_cd: e.freq_cd,
    }
}

/// Exact means and exceedance frequencies of the non-collision
/// probabilities for one scenario.
///
/// # Safety
/// `out` must be valid for one `CcdExactRow`.
#[no_mangle]
pub unsafe extern "C" fn ccd_exact_row(
    delta_true: f64,
    sigma: f64,
    radius: f64,
    threshold: f64,
    out: *mut CcdExactRow,
) -> CcdStatus {
    guard(|| {
        let s = Scenario::new(delta_true, sigma, radius)?;
        let e = calibration::exact_row(&s, threshold)?;
        unsafe { write(out, "out", exact_to_c(e)) }
    })
}

/// Runs a Monte Carlo sweep over `sigmas[0..n_sigmas]`.
///
/// # Safety
/// `sigmas` must be readable for `n_sigmas` doubles and `out` writable for
/// one pointer. Release the result with [`ccd_sweep_free`].
#[no_mangle]
pub unsafe extern "C" fn ccd_sweep_run(
    delta_true: f64,
    radius: f64,
    sigmas: *const f64,
    n_sigmas: usize,
    n_reps: u64,
    seed: u64,
    threshold: f64,
    out: *mut *mut CcdSweep,
) -> CcdStatus {
    guard(|| {
        if sigmas.is_null() && n_sigmas > 0 {
            return Err(null("sigmas"));
        }
        let grid = if n_sigmas == 0 {
            Vec::new()
        } else {
            // SAFETY: non-null and sized by the caller's contract.
            unsafe { std::slice::from_raw_parts(sigmas, n_sigmas) }.to_vec()
        };
        let config = SweepConfig {
            sigma_grid: grid,
            n_reps: usize::try_from(n_reps).map_err(|_| Error::InvalidInput("n_reps too large".into()))?,
            seed,
            threshold,
        };
        let rows = calibration::run_sweep(Distance::new(delta_true)?, CollisionRadius::new(radius)?, &config)?;
        unsafe { write(out, "out", Box::into_raw(Box::new(CcdSweep(rows)))) }
    })
}

/// Number of rows in a sweep; 0 for NULL.
///
/// # Safety
/// `sweep` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ccd_sweep_len(sweep: *const CcdSweep) -> usize {
    unsafe { sweep.as_ref() }.map_or(0, |s| s.0.len())
}

/// # Safety
/// `sweep` must be a live handle and `out` valid for one row.
#[no_mangle]
pub unsafe extern "C" fn ccd_sweep_row(
    sweep: *const CcdSweep,
    index: usize,
    out: *mut CcdCalibrationRow,
) -> CcdStatus {
    guard(|| {
        let s = unsafe { sweep.as_ref() }.ok_or_else(|| null("sweep"))?;
        let r = s.0.get(index).ok_or_else(|| {
            Failure::from(Error::InvalidInput(format!(
                "row {index} out of bounds for sweep of {} rows",
                s.0.len()
            )))
        })?;
        let row = CcdCalibrationRow {
            sigma: r.sigma,
            n_reps: r.n_reps as u64,
            mean_noncol_bayes: r.mean_noncol_bayes,
            mean_noncol_cd: r.mean_noncol_cd,
            freq_high_bayes: r.freq_high_bayes,
            freq_high_cd: r.freq_high_cd,
            stderr_mean_bayes: r.stderr_mean_bayes,
            stderr_mean_cd: r.stderr_mean_cd,
            stderr_freq_bayes: r.stderr_freq_bayes,
            stderr_freq_cd: r.stderr_freq_cd,
            exact: exact_to_c(r.exact),
        };
        unsafe { write(out, "out", row) }
    })
}

/// # Safety
/// `sweep` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ccd_sweep_free(sweep: *mut CcdSweep) {
    if !sweep.is_null() {
        // SAFETY: handle came from Box::into_raw in `ccd_sweep_run`.
        drop(unsafe { Box::from_raw(sweep) });
    }
}

/// PIT diagnostic of 1 − C(R | Y) over `n` (≥ 100) simulated observations.
///
/// # Safety
/// `out` must be valid for one `CcdPitSummary`.
#[no_mangle]
pub unsafe extern "C" fn ccd_pit_sample(
    delta_true: f64,
    sigma: f64,
    radius: f64,
    n: u64,
    seed: u64,
    out: *mut CcdPitSummary,
) -> CcdStatus {
    guard(|| {
        let s = Scenario::new(delta_true, sigma, radius)?;
        let n = usize::try_from(n).map_err(|_| Error::InvalidInput("n too large".into()))?;
        let p = calibration::pit_sample(&s, n, seed)?;
        let mut histogram = [0u64; CCD_PIT_BINS];
        histogram.copy_from_slice(&p.histogram);
        let summary = CcdPitSummary {
            n: p.n as u64,
            ks_stat: p.ks_stat,
            critical_value: p.critical_value(),
            passes: p.passes(),
            mean: p.mean,
            histogram,
        };
        unsafe { write(out, "out", summary) }
    })
}
