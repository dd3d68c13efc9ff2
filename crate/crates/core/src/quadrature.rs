//! Adaptive Gauss-Kronrod integration of the SOP-defining integrals.
//!
//! Every integral here has the form `int_lower^inf h(x) f_E(x) dx` with
//! `f_E` the exponential eavesdropper density. The variable is rescaled as
//! `x = lambda_E u`, the domain is truncated `tail_span` e-foldings past the
//! last breakpoint, and each panel is refined with a 21-point Kronrod rule
//! until the summed error estimate falls under `rel_tol * |value|`.
//!
//! Nothing in this module calls into [`crate::analytic`]; it is the
//! independent reference for the closed forms.

use std::collections::BinaryHeap;

use crate::error::{Result, SopError};
use crate::specfun::{self, MultinomialTerm};
use crate::sysmodel::{derive_clt_params, CltParams, SystemConfig};
use crate::{Method, SopResult};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Lower integration limit in SNR units.
    pub lower: f64,
    /// Target relative accuracy.
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Interior points where the integrand has a kink; become panel edges.
    pub breakpoints: Vec<f64>,
    /// Truncation distance past `max(lower, breakpoints)`, in units of the scale.
    pub tail_span: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { lower: 0.0, rel_tol: 1e-10, max_subdivisions: 1 << 20, breakpoints: Vec::new(), tail_span: 35.0 }
    }
}

impl QuadratureSpec {
    pub fn from(lower: f64) -> Self {
        Self { lower, ..Self::default() }
    }

    pub fn with_breakpoint(mut self, x: f64) -> Self {
        self.breakpoints.push(x);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-4) {
            return Err(SopError::Validation(format!("rel_tol must lie in (0, 1e-4], got {}", self.rel_tol)));
        }
        if !(self.lower >= 0.0) {
            return Err(SopError::Validation(format!("lower limit must be >= 0, got {}", self.lower)));
        }
        if !(self.tail_span > 0.0) {
            return Err(SopError::Validation("tail_span must be positive".into()));
        }
        Ok(())
    }
}

/// Integral value with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 21-point Kronrod estimate and `|K21 - G10|` on `[a, b]`.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration over consecutive `edges`.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: F,
    edges: &[f64],
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Integral> {
    let mut heap = BinaryHeap::new();
    let (mut total, mut total_err) = (0.0, 0.0);
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk21(&f, w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Panel { a: w[0], b: w[1], value, error });
    }
    let mut subdivisions = heap.len();
    loop {
        if !total.is_finite() {
            return Err(SopError::Evaluation(format!("non-finite integrand value ({total})")));
        }
        if total_err <= rel_tol * total.abs() || total_err < f64::MIN_POSITIVE {
            break;
        }
        if subdivisions >= max_subdivisions {
            return Err(SopError::Accuracy { estimate: total, error: total_err, subdivisions });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point; keep its estimate.
            total_err -= worst.error;
            heap.push(Panel { error: 0.0, ..worst });
            continue;
        }
        let (lv, le) = gk21(&f, worst.a, mid);
        let (rv, re) = gk21(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
        subdivisions += 1;
    }
    // Recompute the sums from the panels to shed accumulated cancellation.
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum::<f64>().max(0.0);
    Ok(Integral { value, error, subdivisions })
}

/// `int_lower^inf integrand(x) dx` where the integrand decays at least like
/// `exp(-x / lambda_scale)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    spec: &QuadratureSpec,
    lambda_scale: f64,
    integrand: F,
) -> Result<Integral> {
    spec.validate()?;
    if !(lambda_scale > 0.0 && lambda_scale.is_finite()) {
        return Err(SopError::Validation(format!("scale must be positive, got {lambda_scale}")));
    }
    let lo = spec.lower / lambda_scale;
    let mut edges = vec![lo];
    let mut inner: Vec<f64> =
        spec.breakpoints.iter().map(|b| b / lambda_scale).filter(|&u| u > lo && u.is_finite()).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    let last = inner.last().copied().unwrap_or(lo);
    edges.extend(inner);
    edges.push(last + spec.tail_span);
    let g = |u: f64| lambda_scale * integrand(lambda_scale * u);
    integrate_panels(g, &edges, spec.rel_tol, spec.max_subdivisions)
}

/// Which Q-function goes into the destination CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QModel {
    Exact,
    /// Three-exponential approximation, branch chosen by the argument sign.
    Approx3,
}

/// `1 - xi Q(chi)` without cancellation on the `chi < 0` side.
fn one_minus_xi_q(chi: f64, xi: f64, mu_over_sigma: f64, model: QModel) -> f64 {
    match model {
        QModel::Exact if chi < 0.0 => xi * (specfun::q(-chi) - specfun::q(mu_over_sigma)).max(0.0),
        QModel::Exact => 1.0 - xi * specfun::q(chi),
        QModel::Approx3 => 1.0 - xi * specfun::q_approx3(chi),
    }
}

/// `int_0^inf F_D*(rho x + shift) f_E(x) dx` with `F_D* = (1 - xi Q(chi))^M`.
fn sop_integral(params: &CltParams, shift: f64, model: QModel, rel_tol: f64) -> Result<Integral> {
    let m = params.n_users as i32;
    let mos = params.mu_d / params.sigma_d();
    let kink = (params.mu_d * params.mu_d * params.gamma0 - shift) / params.rho;
    let mut spec = QuadratureSpec { rel_tol, ..QuadratureSpec::default() };
    if kink > 0.0 {
        spec.breakpoints.push(kink);
    }
    integrate_semi_infinite(&spec, params.lambda_e, |x| {
        let chi = params.chi(x, shift);
        one_minus_xi_q(chi, params.xi, mos, model).powi(m) * params.eve_pdf(x)
    })
}

fn quad_result(params: &CltParams, shift: f64, model: QModel, rel_tol: f64) -> Result<SopResult> {
    let int = sop_integral(params, shift, model, rel_tol)?;
    let mut res = SopResult::clamped(int.value, Method::Quadrature);
    res.error_estimate = Some(int.error);
    Ok(res)
}

/// SOP under the CLT model with the exact Q-function and exact `xi`.
pub fn sop_quad_exact_q(cfg: &SystemConfig) -> Result<SopResult> {
    let p = derive_clt_params(cfg)?;
    quad_result(&p, p.rho - 1.0, QModel::Exact, QuadratureSpec::default().rel_tol)
}

/// SOP with the three-exponential Q inside the integrand; numerically
/// integrates exactly what the closed form integrates analytically.
pub fn sop_quad_approx_q(cfg: &SystemConfig) -> Result<SopResult> {
    let p = derive_clt_params(cfg)?;
    quad_result(&p, p.rho - 1.0, QModel::Approx3, QuadratureSpec::default().rel_tol)
}

/// High-SNR SOP: destination CDF evaluated at `rho x` instead of `rho x + rho - 1`.
pub fn sop_quad_asymptotic(cfg: &SystemConfig) -> Result<SopResult> {
    let p = derive_clt_params(cfg)?;
    quad_result(&p, 0.0, QModel::Exact, QuadratureSpec::default().rel_tol)
}

/// Same as [`sop_quad_exact_q`] on precomputed parameters with a chosen
/// tolerance and shift.
pub fn sop_quad_with(params: &CltParams, shift: f64, model: QModel, rel_tol: f64) -> Result<Integral> {
    sop_integral(params, shift, model, rel_tol)
}

// ---------------------------------------------------------------------------
// Branch and term integrals of the closed form.
// ---------------------------------------------------------------------------

/// Integration domain of a branch integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `[0, inf)`.
    Full,
    /// `[alpha, inf)`.
    AboveKink,
    /// `[0, alpha)`.
    BelowKink,
}

fn kink(params: &CltParams, shift: f64) -> f64 {
    (params.mu_d * params.mu_d * params.gamma0 - shift) / params.rho
}

fn branch_integral<H: Fn(f64) -> f64>(params: &CltParams, shift: f64, domain: Domain, h: H) -> Result<Integral> {
    let alpha = kink(params, shift);
    let integrand = |x: f64| h(params.chi(x, shift)) * params.eve_pdf(x);
    match domain {
        Domain::Full => {
            let mut spec = QuadratureSpec::default();
            if alpha > 0.0 {
                spec.breakpoints.push(alpha);
            }
            integrate_semi_infinite(&spec, params.lambda_e, integrand)
        }
        Domain::AboveKink => {
            let spec = QuadratureSpec::from(alpha.max(0.0));
            integrate_semi_infinite(&spec, params.lambda_e, integrand)
        }
        Domain::BelowKink => {
            if alpha <= 0.0 {
                return Ok(Integral { value: 0.0, error: 0.0, subdivisions: 0 });
            }
            let s = params.lambda_e;
            integrate_panels(|u| s * integrand(s * u), &[0.0, alpha / s], 1e-10, 1 << 20)
        }
    }
}

/// `int (1/2) exp(-p.k chi^2 / 2) f_E dx` over `domain`: one multinomial term.
pub fn term_quad(term: &MultinomialTerm, params: &CltParams, shift: f64, domain: Domain) -> Result<Integral> {
    let pk = term.p_dot_k;
    branch_integral(params, shift, domain, |chi| 0.5 * (-0.5 * pk * chi * chi).exp())
}

/// `int g(chi)^m f_E dx` with `g` the three-exponential tail, over `domain`.
pub fn power_quad(m: usize, params: &CltParams, shift: f64, domain: Domain) -> Result<Integral> {
    let m = m as i32;
    branch_integral(params, shift, domain, |chi| specfun::q_approx3_tail(chi).powi(m))
}

/// `int_0^alpha (1 - g(chi))^m f_E dx`.
pub fn complement_power_quad(m: usize, params: &CltParams, shift: f64) -> Result<Integral> {
    let m = m as i32;
    branch_integral(params, shift, Domain::BelowKink, |chi| (1.0 - specfun::q_approx3_tail(chi)).powi(m))
}

/// `int Q(|chi|)^m f_E dx` over `[0, inf)`: the exact-Q counterpart of [`power_quad`].
pub fn exact_tail_power_quad(m: usize, params: &CltParams, shift: f64) -> Result<Integral> {
    let m = m as i32;
    branch_integral(params, shift, Domain::Full, |chi| specfun::q(chi.abs()).powi(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_of_exponential_pdf() {
        for lambda in [1e-6, 0.3, 1.0, 57.0, 1e8] {
            let int =
                integrate_semi_infinite(&QuadratureSpec::default(), lambda, |x| (-x / lambda).exp() / lambda).unwrap();
            assert!((int.value - 1.0).abs() < 1e-12, "lambda={lambda}: {}", int.value);
        }
    }

    #[test]
    fn constant_cdf_integrates_to_one() {
        let lambda = 3.7;
        let spec = QuadratureSpec::default().with_breakpoint(2.0);
        let int = integrate_semi_infinite(&spec, lambda, |x| 1.0 * (-x / lambda).exp() / lambda).unwrap();
        assert!((int.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_mean() {
        for lambda in [0.01, 2.5, 1e4] {
            let spec = QuadratureSpec { tail_span: 45.0, ..QuadratureSpec::default() };
            let int = integrate_semi_infinite(&spec, lambda, |x| x * (-x / lambda).exp() / lambda).unwrap();
            assert!(((int.value - lambda) / lambda).abs() < 1e-10);
        }
    }

    #[test]
    fn shifted_lower_limit() {
        let lambda = 2.0;
        let spec = QuadratureSpec::from(3.0);
        let int = integrate_semi_infinite(&spec, lambda, |x| (-x / lambda).exp() / lambda).unwrap();
        assert!(((int.value - (-1.5f64).exp()) / (-1.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        let bad = QuadratureSpec { rel_tol: 1e-3, ..QuadratureSpec::default() };
        assert!(integrate_semi_infinite(&bad, 1.0, |x| (-x).exp()).is_err());
        let bad = QuadratureSpec { lower: -1.0, ..QuadratureSpec::default() };
        assert!(integrate_semi_infinite(&bad, 1.0, |x| (-x).exp()).is_err());
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let spec = QuadratureSpec { max_subdivisions: 4, ..QuadratureSpec::default() };
        // 1/sqrt(x) singularity at the origin never meets 1e-10 within 4 panels.
        let err = integrate_semi_infinite(&spec, 1.0, |x| (-x).exp() / x.sqrt()).unwrap_err();
        match err {
            SopError::Accuracy { estimate, .. } => assert!(estimate > 1.0 && estimate < 2.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kink_is_a_panel_edge() {
        // |x - a| e^-x has a derivative jump at a; with the kink as an edge,
        // each side is smooth and converges in very few panels.
        let a = 1.3f64;
        let exact = a - 1.0 + 2.0 * (-a).exp();
        let with =
            integrate_semi_infinite(&QuadratureSpec::default().with_breakpoint(a), 1.0, |x| (x - a).abs() * (-x).exp())
                .unwrap();
        let without = integrate_semi_infinite(&QuadratureSpec::default(), 1.0, |x| (x - a).abs() * (-x).exp()).unwrap();
        assert!(((with.value - exact) / exact).abs() < 1e-12);
        assert!(with.subdivisions < without.subdivisions, "{} vs {}", with.subdivisions, without.subdivisions);
    }

    #[test]
    fn no_power_limit_is_one() {
        let cfg = SystemConfig { gamma0_db: -60.0, ..SystemConfig::default() };
        let r = sop_quad_exact_q(&cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
        assert_eq!(r.method, Method::Quadrature);
    }

    #[test]
    fn truncation_insensitive() {
        for g in [0.0, 20.0, 40.0] {
            let p = derive_clt_params(&SystemConfig { gamma0_db: g, ..SystemConfig::default() }).unwrap();
            let alpha = p.alpha();
            let run = |tail: f64| {
                let spec = QuadratureSpec { tail_span: tail, ..QuadratureSpec::default() }.with_breakpoint(alpha);
                integrate_semi_infinite(&spec, p.lambda_e, |x| {
                    one_minus_xi_q(p.chi(x, p.rho - 1.0), p.xi, p.mu_d / p.sigma_d(), QModel::Exact).powi(3)
                        * p.eve_pdf(x)
                })
                .unwrap()
                .value
            };
            let (a, b) = (run(35.0), run(70.0));
            assert!(((a - b) / b).abs() <= 1e-10, "g={g}: {a} {b}");
        }
    }

    #[test]
    fn halving_tolerance_within_error_estimate() {
        for (n, m, g) in [(64, 3, 0.0), (64, 1, 20.0), (128, 3, 10.0), (32, 2, -5.0)] {
            let p = derive_clt_params(&SystemConfig { n_elements: n, n_users: m, gamma0_db: g, ..Default::default() })
                .unwrap();
            for model in [QModel::Exact, QModel::Approx3] {
                let a = sop_quad_with(&p, p.rho - 1.0, model, 1e-8).unwrap();
                let b = sop_quad_with(&p, p.rho - 1.0, model, 5e-9).unwrap();
                assert!((a.value - b.value).abs() <= a.error, "{n} {m} {g}: {a:?} {b:?}");
            }
        }
    }
}
