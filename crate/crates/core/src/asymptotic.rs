//! High-SNR behavior of the OUS secrecy outage probability.
//!
//! For large transmit SNR the `+1` terms in both capacities are dropped, so
//! the destination CDF is evaluated at `rho x`. With `xi = 1` the SOP splits
//! as
//!
//! `SOP = e^{-alpha/lambda} - sum_m V(M,m) I+^(m) - (I+^(M) - J+^(M))`
//!
//! where `alpha = mu^2 Gamma0 / rho` and all integrals use the high-SNR
//! argument. The ratio `alpha/lambda = N pi^2 zeta_RD / (16 rho zeta_RE)` does
//! not involve the transmit SNR, which is why the SOP saturates.

use std::f64::consts::PI;

use crate::analytic::{self, Lower, TermContext};
use crate::error::{Result, SopError};
use crate::specfun::{self, MAX_ORDER, Q_EXPONENTS, Q_WEIGHTS};
use crate::sysmodel::{derive_clt_params, path_loss_linear, CltParams, SystemConfig};

/// The three parts of the high-SNR SOP, `SOP = 1 - p1 - p2 - p3`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticBreakdown {
    /// `1 - exp(-mu^2 Gamma0 / (rho lambda_E))`.
    pub p1: f64,
    /// `I+^(M) - J+^(M)`, high-SNR versions. Non-positive.
    pub p2: f64,
    /// `sum_m V(M,m) I+^(m)`, high-SNR versions.
    pub p3: f64,
    /// `1 - p1 - p3`: the SOP with `p2` dropped.
    pub sop_simplified: f64,
    /// Closed form in terms of `N`, `M`, `rho` and `zeta_RD/zeta_RE` only.
    pub sop_closed: f64,
    pub warnings: Vec<String>,
}

/// One high-SNR term: `int_{mu^2 Gamma0/rho}^inf (1/2) exp(-(sqrt(rho x/Gamma0) - mu)^2/(2 sigma_mk^2)) f_E dx`.
pub fn i_plus_term_asym(ctx: &TermContext, params: &CltParams) -> Result<f64> {
    analytic::term_value(ctx.sigma_mk * ctx.sigma_mk, params, 0.0, Lower::Kink)
}

/// High-SNR counterpart of [`analytic::j_plus_term`]: integral over `[0, inf)`.
pub fn j_plus_term_asym(ctx: &TermContext, params: &CltParams) -> Result<f64> {
    analytic::term_value(ctx.sigma_mk * ctx.sigma_mk, params, 0.0, Lower::Origin)
}

fn sum_terms(m: usize, params: &CltParams, f: fn(&TermContext, &CltParams) -> Result<f64>) -> Result<f64> {
    let mut acc = 0.0;
    for t in specfun::multinomial_set(m)? {
        acc += t.scale() * f(&TermContext::new(t, params), params)?;
    }
    Ok(acc)
}

pub fn i_plus_asym(m: usize, params: &CltParams) -> Result<f64> {
    sum_terms(m, params, i_plus_term_asym)
}

pub fn j_plus_asym(m: usize, params: &CltParams) -> Result<f64> {
    sum_terms(m, params, j_plus_term_asym)
}

fn check_users(m: usize) -> Result<()> {
    if m > MAX_ORDER {
        return Err(SopError::Capacity { what: "number of users", value: m, limit: MAX_ORDER });
    }
    Ok(())
}

/// High-SNR SOP and its parts.
pub fn sop_asymptotic(cfg: &SystemConfig) -> Result<AsymptoticBreakdown> {
    let params = derive_clt_params(cfg)?;
    let big_m = cfg.n_users;
    check_users(big_m)?;

    let ratio = params.mu_d * params.mu_d * params.gamma0 / (params.rho * params.lambda_e);
    let p1 = -(-ratio).exp_m1();
    let mut p3 = 0.0;
    let mut i_top = 0.0;
    for m in 1..=big_m {
        let i = i_plus_asym(m, &params)?;
        p3 += specfun::signed_binom(big_m, m)? as f64 * i;
        i_top = i;
    }
    let p2 = i_top - j_plus_asym(big_m, &params)?;

    let mut warnings = Vec::new();
    if big_m < 3 {
        warnings.push(format!("n_users = {big_m} < 3: the dropped p2 term may not be negligible"));
    }
    if cfg.n_elements < 32 {
        warnings.push(format!("n_elements = {} < 32: large-N approximations are strained", cfg.n_elements));
    }

    Ok(AsymptoticBreakdown {
        p1,
        p2,
        p3,
        sop_simplified: 1.0 - p1 - p3,
        sop_closed: sop_asymptotic_closed(cfg)?,
        warnings,
    })
}

/// High-SNR SOP in terms of the basic system parameters.
///
/// Only `N`, `M`, `rho` and the path-loss ratio `zeta_RD/zeta_RE` enter, so
/// the value is bit-identical across transmit SNRs and S-R distances.
pub fn sop_asymptotic_closed(cfg: &SystemConfig) -> Result<f64> {
    cfg.validate()?;
    check_users(cfg.n_users)?;
    let ratio = path_loss_linear(cfg.d_rd, cfg.z0, cfg.upsilon)? / path_loss_linear(cfg.d_re, cfg.z0, cfg.upsilon)?;
    Ok(closed_from_ratio(cfg.n_elements, cfg.n_users, cfg.rho(), ratio)?.max(0.0))
}

/// [`sop_asymptotic_closed`] with the path-loss ratio given directly and
/// without clamping. Once the value falls to around `1e-25` the
/// approximation error of the Q expansion dominates and the raw value can
/// turn slightly negative.
pub fn closed_from_ratio(n: usize, big_m: usize, rho: f64, ratio: f64) -> Result<f64> {
    check_users(big_m)?;
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(SopError::Domain(format!("path-loss ratio must be positive, got {ratio}")));
    }
    let n = n as f64;
    let c = 16.0 - PI * PI;
    let e = (-n * PI * PI * ratio / (16.0 * rho)).exp();

    let mut sum = 0.0;
    for m in 1..=big_m {
        let v = specfun::signed_binom(big_m, m)? as f64;
        for t in specfun::multinomial_set(m)? {
            let a = (c / 16.0) / t.p_dot_k;
            let d = rho + 2.0 * a * ratio;
            let root = (2.0 * PI * rho * n * t.p_dot_k / (c * d)).sqrt();
            let mut term = a * ratio / d * e;
            for (w, p) in Q_WEIGHTS.iter().zip(Q_EXPONENTS) {
                let ex = -n * PI * PI * ratio * (0.5 + a * p * ratio / rho) / (8.0 * d);
                term += a * w * PI * ratio / (2.0 * d) * root * ex.exp();
            }
            sum += v * t.scale() * term;
        }
    }
    Ok(e - sum)
}
