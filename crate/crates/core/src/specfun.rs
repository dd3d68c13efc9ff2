//! Gaussian Q-function evaluations, the three-exponential Q approximation,
//! and the multinomial/binomial bookkeeping used by the closed forms.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Result, SopError};

/// Weights of the three-exponential Q approximation.
pub const Q_WEIGHTS: [f64; 3] = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0];
/// Exponent multipliers of the three-exponential Q approximation.
pub const Q_EXPONENTS: [f64; 3] = [1.0, 4.0, 4.0 / 3.0];

/// Largest expansion order accepted by [`multinomial_set`].
pub const MAX_ORDER: usize = 16;

/// Fixed weights and exponents of the approximation
/// `Q(x) ~ sum_i w_i/2 exp(-p_i x^2/2)` for `x >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QApproxWeights {
    pub w: [f64; 3],
    pub p: [f64; 3],
}

impl Default for QApproxWeights {
    fn default() -> Self {
        Self { w: Q_WEIGHTS, p: Q_EXPONENTS }
    }
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < 5.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    // Continued fraction, evaluated bottom-up:
    // erfcx(x) = 1/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let depth = if x < 10.0 {
        80
    } else if x < 50.0 {
        30
    } else {
        12
    };
    let mut tail = x;
    for k in (1..=depth).rev() {
        tail = x + (k as f64 * 0.5) / tail;
    }
    1.0 / (PI.sqrt() * tail)
}

/// Gaussian Q-function, `Q(x) = erfc(x/sqrt 2)/2`. NaN propagates.
#[inline]
pub fn q(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Gaussian Q-function with a domain check on the argument.
pub fn q_exact(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(SopError::Domain("Q-function argument is NaN".into()));
    }
    Ok(q(x))
}

/// `ln Q(x) + x^2/2`, finite for every `x >= 0` including far tails.
pub fn log_q_scaled(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    (0.5 * erfcx(x * FRAC_1_SQRT_2)).ln()
}

/// `ln Q(x)`. Large positive `x` go through the scaled erfc, negative `x`
/// through `ln(1 - Q(|x|))`.
pub fn log_q(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 0.0 {
        if x == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        log_q_scaled(x) - 0.5 * x * x
    } else {
        (-q(-x)).ln_1p()
    }
}

/// `exp(a) Q(b)` assembled as `exp(a + ln Q(b))`.
pub fn exp_times_q(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return 0.0;
    }
    (a + log_q(b)).exp()
}

/// `sum_i w_i/2 exp(-p_i x^2/2)`, the positive-argument branch of the
/// three-exponential approximation (even in `x`).
#[inline]
pub fn q_approx3_tail(x: f64) -> f64 {
    let x2 = x * x;
    Q_WEIGHTS.iter().zip(Q_EXPONENTS.iter()).map(|(w, p)| 0.5 * w * (-0.5 * p * x2).exp()).sum()
}

/// Three-exponential approximation of Q; `x = 0` takes the `x >= 0` branch.
pub fn q_approx3(x: f64) -> f64 {
    let tail = q_approx3_tail(x);
    if x >= 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// One composition `k` of the expansion order `m` with its multinomial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultinomialTerm {
    pub m: usize,
    pub k: [u32; 3],
    /// `m! / (k1! k2! k3!)`.
    pub coef: f64,
    /// `w1^k1 w2^k2 w3^k3 / 2^(m-1)`.
    pub weight_product: f64,
    /// `sum_i k_i p_i`.
    pub p_dot_k: f64,
}

impl MultinomialTerm {
    /// `coef * weight_product`.
    pub fn scale(&self) -> f64 {
        self.coef * self.weight_product
    }
}

/// Every `(k1, k2, k3)` with `k1 + k2 + k3 = m`, once each.
pub fn multinomial_set(m: usize) -> Result<Vec<MultinomialTerm>> {
    multinomial_set_capped(m, MAX_ORDER)
}

pub fn multinomial_set_capped(m: usize, cap: usize) -> Result<Vec<MultinomialTerm>> {
    if m == 0 {
        return Err(SopError::Domain("expansion order must be at least 1".into()));
    }
    if m > cap {
        return Err(SopError::Capacity { what: "expansion order", value: m, limit: cap });
    }
    let half_pow = 0.5f64.powi(m as i32 - 1);
    let mut out = Vec::with_capacity((m + 1) * (m + 2) / 2);
    for k1 in (0..=m).rev() {
        for k2 in (0..=m - k1).rev() {
            let k3 = m - k1 - k2;
            let coef = binomial(m as u64, k1 as u64) * binomial((m - k1) as u64, k2 as u64);
            let k = [k1 as u32, k2 as u32, k3 as u32];
            let weight_product =
                Q_WEIGHTS.iter().zip(k.iter()).map(|(w, &ki)| w.powi(ki as i32)).product::<f64>() * half_pow;
            let p_dot_k = Q_EXPONENTS.iter().zip(k.iter()).map(|(p, &ki)| p * ki as f64).sum();
            out.push(MultinomialTerm { m, k, coef: coef as f64, weight_product, p_dot_k });
        }
    }
    Ok(out)
}

/// Exact binomial coefficient; callers keep `n` small enough for `u64`.
fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `(-1)^(y+1) C(x, y)`.
pub fn signed_binom(x: usize, y: usize) -> Result<i64> {
    if y > x {
        return Err(SopError::Domain(format!("signed_binom requires y <= x, got ({x}, {y})")));
    }
    if x > 62 {
        return Err(SopError::Capacity { what: "binomial order", value: x, limit: 62 });
    }
    let c = binomial(x as u64, y as u64) as i64;
    Ok(if y % 2 == 1 { c } else { -c })
}
