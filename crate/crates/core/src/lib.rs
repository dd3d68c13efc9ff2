//! Secrecy outage probability (SOP) of opportunistic user scheduling (OUS)
//! in an RIS-aided multi-user downlink with a passive eavesdropper.
//!
//! Four evaluators cross-check each other:
//!
//! * [`analytic::sop_theorem1`]: closed form built on a three-exponential
//!   approximation of the Gaussian Q-function and multinomial expansion;
//! * [`asymptotic`]: high-SNR saturation level, both through the high-SNR
//!   branch integrals and in terms of the basic system parameters;
//! * [`quadrature`]: adaptive Gauss-Kronrod integration of the defining
//!   integrals, with exact or approximated Q;
//! * [`mc`]: a physical Monte Carlo simulator of the fading channel, which
//!   also covers the two-user NOMA benchmark.
//!
//! [`sweep`] drives all of them over parameter grids and writes CSV.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod asymptotic;
pub mod error;
pub mod mc;
pub mod quadrature;
pub mod specfun;
pub mod sweep;
pub mod sysmodel;

pub use error::{Result, SopError};
pub use sysmodel::{derive_clt_params, CltParams, SystemConfig};

/// Which route produced an SOP value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Asymptotic,
    Quadrature,
    MonteCarlo,
}

/// One SOP value with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SopResult {
    /// Reported value, in `[0, 1]`.
    pub value: f64,
    /// Value before clamping to `[0, 1]`.
    pub raw: f64,
    pub clamped: bool,
    pub method: Method,
    /// Absolute error estimate, for quadrature.
    pub error_estimate: Option<f64>,
    /// 95% interval, for Monte Carlo.
    pub ci: Option<(f64, f64)>,
    pub warnings: Vec<String>,
}

impl SopResult {
    pub(crate) fn clamped(raw: f64, method: Method) -> Self {
        let value = raw.clamp(0.0, 1.0);
        Self { value, raw, clamped: value != raw, method, error_estimate: None, ci: None, warnings: Vec::new() }
    }
}
