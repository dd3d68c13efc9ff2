//! Closed-form SOP of the OUS scheme.
//!
//! The destination CDF of the best of `M` users is expanded binomially into
//! powers `Q(chi)^m`; each power of the three-exponential Q is expanded
//! multinomially into terms `exp(-(p.k) chi^2/2)`; each such term against
//! the exponential eavesdropper density has the closed form evaluated by
//! [`term_value`]. The integration domain is split at `alpha`, where the Q
//! argument changes sign.

use std::f64::consts::PI;

use crate::error::{Result, SopError};
use crate::specfun::{self, MultinomialTerm, MAX_ORDER};
use crate::sysmodel::{derive_clt_params, CltParams, SystemConfig};
use crate::{Method, SopResult};

/// Per-term quantities of the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermContext {
    pub m: usize,
    pub term: MultinomialTerm,
    /// `sigma_D / sqrt(p.k)`.
    pub sigma_mk: f64,
    /// `1/(2 sigma_mk^2) + Gamma0/(rho lambda_E)`.
    pub upsilon_mk: f64,
    /// `(mu_D^2 Gamma0 - (rho - 1))/rho`; negative on the `J+`-only branch.
    pub alpha: f64,
}

impl TermContext {
    pub fn new(term: MultinomialTerm, params: &CltParams) -> Self {
        let sigma2_mk = params.sigma2_d / term.p_dot_k;
        Self {
            m: term.m,
            term,
            sigma_mk: sigma2_mk.sqrt(),
            upsilon_mk: upsilon(sigma2_mk, params),
            alpha: params.alpha(),
        }
    }

    fn sigma2_mk(&self) -> f64 {
        self.sigma_mk * self.sigma_mk
    }
}

fn upsilon(sigma2_mk: f64, params: &CltParams) -> f64 {
    0.5 / sigma2_mk + params.gamma0 / (params.rho * params.lambda_e)
}

/// Lower limit of a term integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Lower {
    /// `x = 0`.
    Origin,
    /// `x = (mu_D^2 Gamma0 - shift)/rho`, where the Q argument vanishes.
    Kink,
}

/// `int_lower^inf (1/2) exp(-(s(x) - mu_D)^2 / (2 sigma2_mk)) f_E(x) dx`,
/// `s(x) = sqrt((shift + rho x)/Gamma0)`.
///
/// With `a = Gamma0/(rho lambda_E)` the exponent completes to
/// `-Upsilon (s - c)^2 + ln E`, `c = mu_D/(2 sigma2_mk Upsilon)`, which gives
///
/// `a/(2 Upsilon) [ e^{L0} + mu_D sqrt(pi)/(sigma2_mk sqrt(Upsilon)) E Q(sqrt(2 Upsilon)(s_lo - c)) ]`
///
/// where `L0 = ln E - Upsilon (s_lo - c)^2` is the integrand exponent at the
/// lower limit. Whenever the Q argument is non-negative the `E Q` product is
/// rebuilt as `e^{L0} erfcx/2`, so no intermediate exponent can overflow.
pub(crate) fn term_value(sigma2_mk: f64, params: &CltParams, shift: f64, lower: Lower) -> Result<f64> {
    let mu = params.mu_d;
    let rl = params.rho * params.lambda_e;
    let a = params.gamma0 / rl;
    let ups = upsilon(sigma2_mk, params);
    let c = mu / (2.0 * sigma2_mk * ups);

    let (s_lo, b, x_lo_scaled) = match lower {
        Lower::Origin => {
            let s = (shift / params.gamma0).sqrt();
            (s, (2.0 * ups).sqrt() * (s - c), 0.0)
        }
        // s = mu exactly; the Q argument simplifies to sqrt(2) mu a / sqrt(Upsilon).
        Lower::Kink => (mu, std::f64::consts::SQRT_2 * mu * a / ups.sqrt(), (mu * mu * params.gamma0 - shift) / rl),
    };
    let l0 = -(s_lo - mu).powi(2) / (2.0 * sigma2_mk) - x_lo_scaled;
    let ln_pref = (a / (2.0 * ups)).ln();
    let ln_coef = (mu * PI.sqrt() / (sigma2_mk * ups.sqrt())).ln();

    let second = if b >= 0.0 {
        l0 + specfun::log_q_scaled(b)
    } else {
        let ln_e = shift / rl - mu * mu * a / (2.0 * sigma2_mk * ups);
        ln_e + specfun::log_q(b)
    };
    let value = (ln_pref + l0).exp() + (ln_pref + ln_coef + second).exp();
    if !value.is_finite() {
        return Err(SopError::Evaluation(format!(
            "term overflow: sigma2_mk={sigma2_mk:e} upsilon={ups:e} l0={l0:e} second={second:e}"
        )));
    }
    Ok(value)
}

/// One multinomial term of `J+^(m)`: the integral over `[0, inf)`.
pub fn j_plus_term(ctx: &TermContext, params: &CltParams) -> Result<f64> {
    term_value(ctx.sigma2_mk(), params, params.rho - 1.0, Lower::Origin)
}

/// One multinomial term of `I+^(m)`: the integral over `[alpha, inf)`.
pub fn i_plus_term(ctx: &TermContext, params: &CltParams) -> Result<f64> {
    if !(ctx.alpha > 0.0) {
        return Err(SopError::Contract(format!("I+ term needs alpha > 0, got {}", ctx.alpha)));
    }
    term_value(ctx.sigma2_mk(), params, params.rho - 1.0, Lower::Kink)
}

fn check_order(m: usize) -> Result<()> {
    if m == 0 {
        return Err(SopError::Domain("expansion order must be at least 1".into()));
    }
    if m > MAX_ORDER {
        return Err(SopError::Capacity { what: "number of users", value: m, limit: MAX_ORDER });
    }
    Ok(())
}

fn expand<F>(m: usize, params: &CltParams, term: F) -> Result<f64>
where
    F: Fn(&TermContext, &CltParams) -> Result<f64>,
{
    check_order(m)?;
    let mut acc = 0.0;
    for t in specfun::multinomial_set(m)? {
        let ctx = TermContext::new(t, params);
        acc += t.scale() * term(&ctx, params)?;
    }
    Ok(acc)
}

/// `J+^(m) = int_0^inf g(chi)^m f_E dx` with `g` the three-exponential tail.
pub fn j_plus(m: usize, params: &CltParams) -> Result<f64> {
    expand(m, params, j_plus_term)
}

/// `I+^(m) = int_alpha^inf g(chi)^m f_E dx`.
pub fn i_plus(m: usize, params: &CltParams) -> Result<f64> {
    expand(m, params, i_plus_term)
}

/// `I-^(m) = int_0^alpha (1 - g(chi))^m f_E dx`, via the binomial theorem.
pub fn i_minus(m: usize, params: &CltParams) -> Result<f64> {
    let alpha = params.alpha();
    if !(alpha > 0.0) {
        return Err(SopError::Contract(format!(
            "I- requires mu_D^2 Gamma0 > rho - 1 (margin {})",
            params.branch_margin()
        )));
    }
    check_order(m)?;
    let mut j = Vec::with_capacity(m);
    let mut i = Vec::with_capacity(m);
    for order in 1..=m {
        j.push(j_plus(order, params)?);
        i.push(i_plus(order, params)?);
    }
    i_minus_from(m, alpha / params.lambda_e, &j, &i)
}

/// `1 - e^{-alpha/lambda} - sum_j V(m,j) (J+^(j) - I+^(j))` from tabulated sums.
fn i_minus_from(m: usize, alpha_over_lambda: f64, j: &[f64], i: &[f64]) -> Result<f64> {
    let mut acc = -(-alpha_over_lambda).exp_m1();
    for order in 1..=m {
        acc -= specfun::signed_binom(m, order)? as f64 * (j[order - 1] - i[order - 1]);
    }
    Ok(acc)
}

/// Closed-form SOP of the OUS scheme.
pub fn sop_theorem1(cfg: &SystemConfig) -> Result<SopResult> {
    let params = derive_clt_params(cfg)?;
    sop_theorem1_params(&params)
}

pub fn sop_theorem1_params(params: &CltParams) -> Result<SopResult> {
    let big_m = params.n_users;
    check_order(big_m)?;
    let j: Vec<f64> = (1..=big_m).map(|m| j_plus(m, params)).collect::<Result<_>>()?;

    // Non-strict: mu^2 Gamma0 <= rho - 1 stays on the J+-only branch.
    let per_order: Vec<f64> = if params.branch_margin() <= 0.0 {
        j
    } else {
        let i: Vec<f64> = (1..=big_m).map(|m| i_plus(m, params)).collect::<Result<_>>()?;
        let aol = params.alpha() / params.lambda_e;
        (1..=big_m).map(|m| Ok(i[m - 1] + i_minus_from(m, aol, &j, &i)?)).collect::<Result<_>>()?
    };

    let mut sum = 0.0;
    for (idx, p) in per_order.iter().enumerate() {
        let m = idx + 1;
        sum += specfun::signed_binom(big_m, m)? as f64 * params.xi.powi(m as i32) * p;
    }
    Ok(SopResult::clamped(1.0 - sum, Method::ClosedForm))
}
