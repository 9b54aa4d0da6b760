//! C interface to the `sprc` simulator and numerical kernels.
//!
//! Every function returns an [`SprcStatus`]; on failure a description is
//! available from [`sprc_last_error_message`]. Objects are opaque handles
//! created by `*_new` functions and released by the matching `*_free`.
//! Matrices cross the boundary as row-major `double` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nalgebra::DMatrix;
use sprc::harness::{run_load_case, LoadCaseConfig, RunResult};
use sprc::numerics::{solve_dare, RlsState};
use sprc::plant::{DisturbanceModel, FaultKind, FaultScenario, PlantConfig, SurrogatePlant};
use sprc::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SprcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    NotConverged = 4,
    NotStabilizing = 5,
    Diverged = 6,
    Config = 7,
    Io = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(err: &Error) -> SprcStatus {
    match err {
        Error::Dimension(_) | Error::InsufficientHistory { .. } => SprcStatus::Dimension,
        Error::DareNotConverged { .. } | Error::IllConditioned { .. } => SprcStatus::NotConverged,
        Error::DareNotStabilizing { .. } => SprcStatus::NotStabilizing,
        Error::Diverged(_) => SprcStatus::Diverged,
        Error::Config(_) | Error::Json(_) => SprcStatus::Config,
        Error::Io(_) | Error::Csv(_) => SprcStatus::Io,
        Error::NonFinite(_) | Error::InvalidParameter(_) => SprcStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SprcStatus, String)>) -> SprcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SprcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SprcStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (SprcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SprcStatus, String) {
    (SprcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], (SprcStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn slice_mut<'a>(p: *mut f64, n: usize, what: &str) -> Result<&'a mut [f64], (SprcStatus, String)> {
    if n == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, n))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SprcStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (SprcStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message of the last failure on this thread, or null. Owned by the
/// library and valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sprc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sprc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sprc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------- plant

/// Surrogate rotor with its disturbance generator and fault scenario.
pub struct SprcPlant {
    plant: SurrogatePlant,
    dist: DisturbanceModel,
    fault: FaultScenario,
}

/// Creates a healthy default plant with the given disturbance.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn sprc_plant_new(
    amp_1p: f64,
    amp_2p: f64,
    sigma_e: f64,
    seed: u64,
    out: *mut *mut SprcPlant,
) -> SprcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if !(amp_1p.is_finite() && amp_2p.is_finite() && sigma_e.is_finite() && sigma_e >= 0.0) {
            return Err((SprcStatus::InvalidArgument, "disturbance amplitudes must be finite, sigma >= 0".into()));
        }
        let plant = SurrogatePlant::from_config(&PlantConfig::default()).map_err(lib_err)?;
        let h = SprcPlant {
            plant,
            dist: DisturbanceModel::new(amp_1p, amp_2p, sigma_e, seed),
            fault: FaultScenario::healthy(),
        };
        *out = Box::into_raw(Box::new(h));
        Ok(())
    })
}

/// Fault codes accepted by [`sprc_plant_set_fault`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SprcFault {
    Healthy = 0,
    /// Pitch actuator stuck at `value` degrees.
    Pas = 1,
    /// Pitch actuator degradation with scale `value`.
    Pad = 2,
    /// Blade stiffness scaled by `value`.
    BladeStiffness = 3,
}

/// Schedules a fault on `blade` (1-based) from sample `onset`.
///
/// # Safety
/// `plant` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sprc_plant_set_fault(
    plant: *mut SprcPlant,
    kind: SprcFault,
    value: f64,
    blade: usize,
    onset: usize,
) -> SprcStatus {
    guard(|| {
        let h = plant.as_mut().ok_or_else(|| null("plant"))?;
        let kind = match kind {
            SprcFault::Healthy => FaultKind::Healthy,
            SprcFault::Pas => FaultKind::Pas { stuck_deg: value },
            SprcFault::Pad => FaultKind::Pad { scale: value },
            SprcFault::BladeStiffness => FaultKind::BladeStiffness { a: value },
        };
        h.fault = FaultScenario::new(kind, blade, onset).map_err(lib_err)?;
        Ok(())
    })
}

/// Measures the loads at sample `k` into `y_out[3]`, then advances the
/// state with the pitch command `u[3]` (degrees about the collective).
///
/// # Safety
/// `plant` must be a live handle, `u` and `y_out` arrays of 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn sprc_plant_step(
    plant: *mut SprcPlant,
    k: usize,
    u: *const f64,
    y_out: *mut f64,
) -> SprcStatus {
    guard(|| {
        let h = plant.as_mut().ok_or_else(|| null("plant"))?;
        let u = slice(u, 3, "u")?;
        let y_out = slice_mut(y_out, 3, "y_out")?;
        let cmd = [u[0], u[1], u[2]];
        let y = h.plant.measure(k, &mut h.dist, &h.fault).map_err(lib_err)?;
        h.plant.advance(&cmd, &h.fault, k).map_err(lib_err)?;
        y_out.copy_from_slice(&y);
        Ok(())
    })
}

/// # Safety
/// `plant` must be null or a handle from [`sprc_plant_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sprc_plant_free(plant: *mut SprcPlant) {
    if !plant.is_null() {
        drop(Box::from_raw(plant));
    }
}

// ---------------------------------------------------------------- RLS

/// Exponentially weighted least squares in square-root form.
pub struct SprcRls(RlsState);

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn sprc_rls_new(
    n_out: usize,
    n_reg: usize,
    lambda: f64,
    delta: f64,
    out: *mut *mut SprcRls,
) -> SprcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let st = RlsState::new(n_out, n_reg, lambda, delta).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SprcRls(st)));
        Ok(())
    })
}

/// One update with regressor `z[n_reg]` and target `t[n_out]`.
///
/// # Safety
/// `rls` must be a live handle; `z` and `t` must hold `n_z` and `n_t` doubles.
#[no_mangle]
pub unsafe extern "C" fn sprc_rls_update(
    rls: *mut SprcRls,
    z: *const f64,
    n_z: usize,
    t: *const f64,
    n_t: usize,
) -> SprcStatus {
    guard(|| {
        let h = rls.as_mut().ok_or_else(|| null("rls"))?;
        let z = slice(z, n_z, "z")?;
        let t = slice(t, n_t, "t")?;
        h.0.update(z, t).map_err(lib_err)
    })
}

/// Copies the `n_out × n_reg` estimate, row-major, into `out[len]`.
///
/// # Safety
/// `rls` must be a live handle and `out` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sprc_rls_estimate(rls: *const SprcRls, out: *mut f64, len: usize) -> SprcStatus {
    guard(|| {
        let h = rls.as_ref().ok_or_else(|| null("rls"))?;
        let est = h.0.estimate();
        if len != est.len() {
            return Err((SprcStatus::Dimension, format!("estimate has {} entries, buffer {len}", est.len())));
        }
        let out = slice_mut(out, len, "out")?;
        for (dst, v) in out.iter_mut().zip(est.transpose().iter()) {
            *dst = *v;
        }
        Ok(())
    })
}

/// # Safety
/// `rls` must be null or a handle from [`sprc_rls_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sprc_rls_free(rls: *mut SprcRls) {
    if !rls.is_null() {
        drop(Box::from_raw(rls));
    }
}

// ---------------------------------------------------------------- DARE

/// Stabilising solution of the discrete algebraic Riccati equation for
/// `A (n×n)`, `B (n×m)`, `Q (n×n)`, `R (m×m)`. Writes `P (n×n)` and the
/// gain `K (m×n)`; `iterations` may be null.
///
/// # Safety
/// All matrix pointers must hold the stated number of doubles.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn sprc_dare_solve(
    n: usize,
    m: usize,
    a: *const f64,
    b: *const f64,
    q: *const f64,
    r: *const f64,
    tol: f64,
    max_iter: usize,
    p_out: *mut f64,
    k_out: *mut f64,
    iterations: *mut usize,
) -> SprcStatus {
    guard(|| {
        if n == 0 || m == 0 {
            return Err((SprcStatus::Dimension, "empty system".into()));
        }
        let mat = |p, rows, cols, what| slice(p, rows * cols, what).map(|s| DMatrix::from_row_slice(rows, cols, s));
        let (a, b, q, r) = (mat(a, n, n, "A")?, mat(b, n, m, "B")?, mat(q, n, n, "Q")?, mat(r, m, m, "R")?);
        let p_out = slice_mut(p_out, n * n, "P")?;
        let k_out = slice_mut(k_out, m * n, "K")?;
        let sol = solve_dare(&a, &b, &q, &r, tol, max_iter).map_err(lib_err)?;
        for (dst, v) in p_out.iter_mut().zip(sol.cost_matrix.transpose().iter()) {
            *dst = *v;
        }
        for (dst, v) in k_out.iter_mut().zip(sol.gain.transpose().iter()) {
            *dst = *v;
        }
        if !iterations.is_null() {
            *iterations = sol.iterations;
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- runs

/// Completed load-case simulation.
pub struct SprcRunResult(RunResult);

/// Runs one load case described by a JSON document (same schema as the CLI).
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn sprc_run_load_case(config_json: *const c_char, out: *mut *mut SprcRunResult) -> SprcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = c_str(config_json, "config_json")?;
        let cfg: LoadCaseConfig = serde_json::from_str(text).map_err(|e| (SprcStatus::Config, e.to_string()))?;
        let res = run_load_case(&cfg).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SprcRunResult(res)));
        Ok(())
    })
}

/// Number of samples in the stored series.
///
/// # Safety
/// `result` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn sprc_run_result_len(result: *const SprcRunResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.series.len())
}

/// Copies the series as rows `t,u1,u2,u3,y1,y2,y3,psi` into `out[len]`,
/// where `len` must equal 8 × [`sprc_run_result_len`].
///
/// # Safety
/// `result` must be a live handle and `out` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sprc_run_result_series(result: *const SprcRunResult, out: *mut f64, len: usize) -> SprcStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        let s = &r.0.series;
        if len != 8 * s.len() {
            return Err((SprcStatus::Dimension, format!("series needs {} doubles, buffer {len}", 8 * s.len())));
        }
        let out = slice_mut(out, len, "out")?;
        for (k, row) in out.chunks_exact_mut(8).enumerate() {
            row[0] = s.t[k];
            row[1..4].copy_from_slice(&s.u[k]);
            row[4..7].copy_from_slice(&s.y[k]);
            row[7] = s.psi[k];
        }
        Ok(())
    })
}

/// Metrics summary as a JSON string; release with [`sprc_string_free`].
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sprc_run_result_metrics_json(
    result: *const SprcRunResult,
    out: *mut *mut c_char,
) -> SprcStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let json = serde_json::to_string(&r.0.metrics).map_err(|e| (SprcStatus::Io, e.to_string()))?;
        *out = CString::new(json).map_err(|e| (SprcStatus::Io, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a handle from [`sprc_run_load_case`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sprc_run_result_free(result: *mut SprcRunResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
