//! C interface to the `ris-sop` evaluators.
//!
//! Configurations live behind an opaque handle created by
//! [`ris_sop_config_new_default`] or [`ris_sop_config_from_json`] and
//! released with [`ris_sop_config_free`]. Every other function returns a
//! [`RisSopStatus`]; on failure [`ris_sop_last_error_message`] describes the
//! error for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ris_sop::mc::{self, McMode, McOptions, Scheme};
use ris_sop::{analytic, asymptotic, quadrature, SopError, SystemConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RisSopStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Schema = 4,
    Validation = 5,
    Domain = 6,
    Capacity = 7,
    Contract = 8,
    Evaluation = 9,
    Accuracy = 10,
    Io = 11,
    Panic = 12,
}

/// Scheduling scheme for Monte Carlo estimates.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RisSopScheme {
    Ous = 0,
    NomaBestUser = 1,
    NomaWorstUser = 2,
}

/// Opaque system configuration.
pub struct RisSopConfig {
    inner: SystemConfig,
}

/// Monte Carlo result.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RisSopMcEstimate {
    pub trials: u64,
    pub outages: u64,
    pub sop: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &SopError) -> RisSopStatus {
    match e {
        SopError::Domain(_) => RisSopStatus::Domain,
        SopError::Validation(_) => RisSopStatus::Validation,
        SopError::Capacity { .. } => RisSopStatus::Capacity,
        SopError::Contract(_) => RisSopStatus::Contract,
        SopError::Evaluation(_) => RisSopStatus::Evaluation,
        SopError::Accuracy { .. } => RisSopStatus::Accuracy,
        SopError::Parse { .. } => RisSopStatus::Parse,
        SopError::Schema(_) => RisSopStatus::Schema,
        SopError::Io(_) => RisSopStatus::Io,
    }
}

/// Runs `f`, converting errors and panics to status codes.
fn guard<F: FnOnce() -> Result<(), (RisSopStatus, String)>>(f: F) -> RisSopStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RisSopStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RisSopStatus::Panic
        }
    }
}

fn lib_err(e: SopError) -> (RisSopStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (RisSopStatus, String) {
    (RisSopStatus::NullPointer, format!("{what} is null"))
}

unsafe fn config_ref<'a>(cfg: *const RisSopConfig) -> Result<&'a SystemConfig, (RisSopStatus, String)> {
    cfg.as_ref().map(|c| &c.inner).ok_or_else(|| null("config"))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (RisSopStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

/// Creates a configuration with the default operating point.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ris_sop_config_new_default(out: *mut *mut RisSopConfig) -> RisSopStatus {
    guard(|| {
        let h = Box::into_raw(Box::new(RisSopConfig { inner: SystemConfig::default() }));
        write_out(out, h).inspect_err(|_| drop(Box::from_raw(h)))
    })
}

/// Creates a configuration from a JSON object. Absent fields take their
/// defaults; unknown fields are rejected.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ris_sop_config_from_json(json: *const c_char, out: *mut *mut RisSopConfig) -> RisSopStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (RisSopStatus::InvalidUtf8, e.to_string()))?;
        let cfg: SystemConfig = serde_json::from_str(text).map_err(|e| {
            let status = if e.is_data() { RisSopStatus::Schema } else { RisSopStatus::Parse };
            (status, e.to_string())
        })?;
        cfg.validate().map_err(lib_err)?;
        let h = Box::into_raw(Box::new(RisSopConfig { inner: cfg }));
        write_out(out, h).inspect_err(|_| drop(Box::from_raw(h)))
    })
}

/// Releases a configuration. Null is ignored.
///
/// # Safety
/// `cfg` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ris_sop_config_free(cfg: *mut RisSopConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Sets the transmit SNR in dB.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ris_sop_config_set_gamma0_db(cfg: *mut RisSopConfig, gamma0_db: f64) -> RisSopStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(|| null("config"))?;
        let next = SystemConfig { gamma0_db, ..c.inner };
        next.validate().map_err(lib_err)?;
        c.inner = next;
        Ok(())
    })
}

/// Sets the number of RIS elements and users.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ris_sop_config_set_sizes(
    cfg: *mut RisSopConfig,
    n_elements: u32,
    n_users: u32,
) -> RisSopStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(|| null("config"))?;
        let next = SystemConfig { n_elements: n_elements as usize, n_users: n_users as usize, ..c.inner };
        next.validate().map_err(lib_err)?;
        c.inner = next;
        Ok(())
    })
}

/// Closed-form SOP of opportunistic scheduling.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ris_sop_closed_form(cfg: *const RisSopConfig, out: *mut f64) -> RisSopStatus {
    guard(|| {
        let r = analytic::sop_theorem1(config_ref(cfg)?).map_err(lib_err)?;
        write_out(out, r.value)
    })
}

/// High-SNR SOP from the basic system parameters.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ris_sop_asymptotic(cfg: *const RisSopConfig, out: *mut f64) -> RisSopStatus {
    guard(|| {
        let v = asymptotic::sop_asymptotic_closed(config_ref(cfg)?).map_err(lib_err)?;
        write_out(out, v)
    })
}

/// SOP by quadrature. `exact_q` selects the exact Q-function instead of the
/// three-exponential approximation. `abs_error` may be null.
///
/// # Safety
/// `cfg` must be a live handle, `out` writable, `abs_error` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ris_sop_quadrature(
    cfg: *const RisSopConfig,
    exact_q: bool,
    out: *mut f64,
    abs_error: *mut f64,
) -> RisSopStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let r = if exact_q { quadrature::sop_quad_exact_q(c) } else { quadrature::sop_quad_approx_q(c) }
            .map_err(lib_err)?;
        write_out(out, r.value)?;
        if !abs_error.is_null() {
            abs_error.write(r.error_estimate.unwrap_or(0.0));
        }
        Ok(())
    })
}

/// Monte Carlo SOP. `independent_eve` draws a separate S-R channel for the
/// eavesdropper path; `workers` = 0 uses all cores. The result depends only
/// on the configuration, scheme, trials, seed and mode.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ris_sop_monte_carlo(
    cfg: *const RisSopConfig,
    scheme: RisSopScheme,
    trials: u64,
    seed: u64,
    independent_eve: bool,
    workers: u32,
    out: *mut RisSopMcEstimate,
) -> RisSopStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let scheme = match scheme {
            RisSopScheme::Ous => Scheme::Ous,
            RisSopScheme::NomaBestUser => Scheme::NomaBu,
            RisSopScheme::NomaWorstUser => Scheme::NomaWu,
        };
        let opts = McOptions {
            trials,
            seed,
            mode: if independent_eve { McMode::Independent } else { McMode::Physical },
            workers: workers as usize,
            ..McOptions::default()
        };
        let e = mc::estimate_sop(c, scheme, &opts).map_err(lib_err)?;
        write_out(
            out,
            RisSopMcEstimate {
                trials: e.trials,
                outages: e.outages,
                sop: e.sop_hat,
                ci_low: e.ci_low,
                ci_high: e.ci_high,
            },
        )
    })
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ris_sop_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a NUL-terminated string with static lifetime.
#[no_mangle]
pub extern "C" fn ris_sop_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
