//! Physical configuration of the RIS-aided downlink and the distribution
//! parameters derived from it.
//!
//! Path loss is carried in linear units everywhere past the configuration
//! boundary; dB only appears in [`SystemConfig`].

use serde::{Deserialize, Serialize};

use crate::error::{Result, SopError};
use crate::specfun;

/// All physical parameters of one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemConfig {
    /// Number of RIS reflecting elements.
    pub n_elements: usize,
    /// Number of candidate destination users.
    pub n_users: usize,
    /// Source to RIS distance in meters.
    pub d_sr: f64,
    /// RIS to each destination distance in meters.
    pub d_rd: f64,
    /// RIS to eavesdropper distance in meters.
    pub d_re: f64,
    /// Reference path loss at 1 m, in dB.
    pub z0: f64,
    /// Path-loss exponent.
    pub upsilon: f64,
    /// Transmit SNR in dB.
    pub gamma0_db: f64,
    /// Secrecy rate threshold in bits per channel use.
    pub r_th: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            n_elements: 64,
            n_users: 3,
            d_sr: 45.0,
            d_rd: 45.0,
            d_re: 30.0,
            z0: 42.0,
            upsilon: 3.5,
            gamma0_db: 20.0,
            r_th: 1.0,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SopError::Validation(msg));
        if self.n_elements == 0 {
            return bad("n_elements must be at least 1".into());
        }
        if self.n_users == 0 {
            return bad("n_users must be at least 1".into());
        }
        for (name, d) in [("d_sr", self.d_sr), ("d_rd", self.d_rd), ("d_re", self.d_re)] {
            if !(d.is_finite() && d > 0.0) {
                return bad(format!("{name} must be a positive finite distance, got {d}"));
            }
        }
        if !(self.upsilon.is_finite() && self.upsilon > 0.0) {
            return bad(format!("upsilon must be positive, got {}", self.upsilon));
        }
        if !(self.r_th.is_finite() && self.r_th > 0.0) {
            return bad(format!("r_th must be positive, got {}", self.r_th));
        }
        if !self.z0.is_finite() {
            return bad(format!("z0 must be finite, got {}", self.z0));
        }
        if !self.gamma0_db.is_finite() {
            return bad(format!("gamma0_db must be finite, got {}", self.gamma0_db));
        }
        Ok(())
    }

    /// Linear path-loss gains of the three links.
    pub fn link_gains(&self) -> Result<LinkGains> {
        Ok(LinkGains {
            sr: path_loss_linear(self.d_sr, self.z0, self.upsilon)?,
            rd: path_loss_linear(self.d_rd, self.z0, self.upsilon)?,
            re: path_loss_linear(self.d_re, self.z0, self.upsilon)?,
        })
    }

    pub fn gamma0_linear(&self) -> f64 {
        db_to_linear(self.gamma0_db)
    }

    pub fn rho(&self) -> f64 {
        rho_of(self.r_th)
    }
}

/// Linear power gains of the S-R, R-D and R-E links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    pub sr: f64,
    pub rd: f64,
    pub re: f64,
}

/// Statistics of the CLT-approximated destination amplitude and of the
/// exponential eavesdropper SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltParams {
    /// Mean of `sum_n |h_rd| |h_sr|`.
    pub mu_d: f64,
    /// Variance of the same sum.
    pub sigma2_d: f64,
    /// Truncation normalization `1 / Q(-mu_d / sigma_d)`.
    pub xi: f64,
    /// Mean eavesdropper SNR.
    pub lambda_e: f64,
    pub gamma0: f64,
    pub rho: f64,
    pub zeta_sr: f64,
    pub zeta_rd: f64,
    pub zeta_re: f64,
    pub n_elements: usize,
    pub n_users: usize,
}

impl CltParams {
    pub fn sigma_d(&self) -> f64 {
        self.sigma2_d.sqrt()
    }

    /// `mu_d^2 Gamma0 - (rho - 1)`; its sign selects the closed-form branch.
    pub fn branch_margin(&self) -> f64 {
        self.mu_d * self.mu_d * self.gamma0 - (self.rho - 1.0)
    }

    /// Eavesdropper SNR at which the destination argument of Q crosses zero.
    pub fn alpha(&self) -> f64 {
        self.branch_margin() / self.rho
    }

    /// Normalized destination argument `(sqrt((shift + rho x)/Gamma0) - mu_d)/sigma_d`.
    pub fn chi(&self, x: f64, shift: f64) -> f64 {
        (((shift + self.rho * x) / self.gamma0).sqrt() - self.mu_d) / self.sigma_d()
    }

    /// Exponential eavesdropper SNR density.
    pub fn eve_pdf(&self, x: f64) -> f64 {
        (-x / self.lambda_e).exp() / self.lambda_e
    }
}

/// Log-distance path loss `10^((z0 - 10 upsilon log10 d)/10)`.
pub fn path_loss_linear(d: f64, z0: f64, upsilon: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(SopError::Domain(format!("distance must be positive, got {d}")));
    }
    Ok(db_to_linear(z0 - 10.0 * upsilon * d.log10()))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear secrecy threshold `2^r_th`.
pub fn rho_of(r_th: f64) -> f64 {
    r_th.exp2()
}

pub fn derive_clt_params(cfg: &SystemConfig) -> Result<CltParams> {
    cfg.validate()?;
    let gains = cfg.link_gains()?;
    let n = cfg.n_elements as f64;
    let gamma0 = cfg.gamma0_linear();
    let pi = std::f64::consts::PI;

    let mu_d = n * pi * (gains.rd * gains.sr).sqrt() / 4.0;
    let sigma2_d = n * gains.rd * gains.sr * (16.0 - pi * pi) / 16.0;
    // xi = 1/Q(-mu/sigma), evaluated in the log domain.
    let xi = (-specfun::log_q(-mu_d / sigma2_d.sqrt())).exp();
    let lambda_e = n * gamma0 * gains.re * gains.sr;

    Ok(CltParams {
        mu_d,
        sigma2_d,
        xi,
        lambda_e,
        gamma0,
        rho: cfg.rho(),
        zeta_sr: gains.sr,
        zeta_rd: gains.rd,
        zeta_re: gains.re,
        n_elements: cfg.n_elements,
        n_users: cfg.n_users,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn path_loss_values() {
        assert!(rel(path_loss_linear(1.0, 42.0, 3.5).unwrap(), 10f64.powf(4.2)) < 1e-14);
        assert!(rel(path_loss_linear(1.0, 42.0, 3.5).unwrap(), 15848.93) < 1e-6);
        let pl45 = path_loss_linear(45.0, 42.0, 3.5).unwrap();
        assert!(rel(pl45, 2.593e-2) < 1e-3, "{pl45}");
        assert!(rel(pl45, 10f64.powf(-1.586_243_798_213_703)) < 1e-6);
        // zero-dB crossing
        let d = 10f64.powf(42.0 / 35.0);
        assert!((path_loss_linear(d, 42.0, 3.5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn path_loss_rejects_non_positive_distance() {
        assert!(matches!(path_loss_linear(0.0, 42.0, 3.5), Err(SopError::Domain(_))));
        assert!(matches!(path_loss_linear(-3.0, 42.0, 3.5), Err(SopError::Domain(_))));
        assert!(path_loss_linear(f64::NAN, 42.0, 3.5).is_err());
    }

    #[test]
    fn path_loss_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let v = path_loss_linear(i as f64 * 0.5, 42.0, 3.5).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho_of(1.0), 2.0);
        assert_eq!(rho_of(3.0), 8.0);
        let r = rho_of(1e-9);
        assert!(r > 1.0 && r - 1.0 < 1e-8);
    }

    /// Config whose three links all have unit gain (d = zero-dB crossing).
    fn unit_gain_cfg(n: usize) -> SystemConfig {
        let d = 10f64.powf(42.0 / 35.0);
        SystemConfig { n_elements: n, d_sr: d, d_rd: d, d_re: d, gamma0_db: 0.0, ..SystemConfig::default() }
    }

    #[test]
    fn clt_unit_gains() {
        let p = derive_clt_params(&unit_gain_cfg(64)).unwrap();
        assert!(rel(p.mu_d, 16.0 * PI) < 1e-12);
        assert!(rel(p.mu_d, 50.2655) < 1e-5);
        assert!(rel(p.sigma2_d, 4.0 * (16.0 - PI * PI)) < 1e-12);
        assert!(rel(p.sigma2_d, 24.5216) < 1e-5);
        assert!(rel(p.mu_d / p.sigma_d(), 10.156) < 1e-3);
        assert!((p.xi - 1.0).abs() < 1e-15);

        let p1 = derive_clt_params(&unit_gain_cfg(1)).unwrap();
        assert!(rel(p1.lambda_e, 1.0) < 1e-12);
        assert!(p1.xi >= 1.0 && p1.xi < 2.0);
    }

    #[test]
    fn clt_linear_scaling() {
        let base = SystemConfig::default();
        let p = derive_clt_params(&base).unwrap();
        let p2 = derive_clt_params(&SystemConfig { n_elements: 128, ..base }).unwrap();
        assert!(rel(p2.mu_d, 2.0 * p.mu_d) < 1e-14);
        assert!(rel(p2.sigma2_d, 2.0 * p.sigma2_d) < 1e-14);
        assert!(rel(p2.lambda_e, 2.0 * p.lambda_e) < 1e-14);
        let db3 = 10.0 * 2f64.log10();
        let pg = derive_clt_params(&SystemConfig { gamma0_db: base.gamma0_db + db3, ..base }).unwrap();
        assert!(rel(pg.lambda_e, 2.0 * p.lambda_e) < 1e-12);
        assert_eq!(pg.mu_d, p.mu_d);
    }

    #[test]
    fn xi_tends_to_one() {
        let mut prev = f64::INFINITY;
        for n in 1..=64 {
            let p = derive_clt_params(&SystemConfig { n_elements: n, ..SystemConfig::default() }).unwrap();
            assert!(p.xi < 2.0);
            // xi = 1/(1-Q(mu/sigma)) so xi >= 1 and shrinks towards 1.
            assert!(p.xi >= 1.0 && p.xi <= prev, "n={n} xi={}", p.xi);
            if n >= 16 {
                assert!((p.xi - 1.0).abs() < 1e-6);
            }
            prev = p.xi;
        }
    }

    #[test]
    fn validation_errors() {
        let ok = SystemConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            SystemConfig { n_users: 0, ..ok },
            SystemConfig { n_elements: 0, ..ok },
            SystemConfig { d_re: 0.0, ..ok },
            SystemConfig { r_th: 0.0, ..ok },
            SystemConfig { upsilon: -1.0, ..ok },
            SystemConfig { gamma0_db: f64::NAN, ..ok },
        ] {
            assert!(matches!(bad.validate(), Err(SopError::Validation(_))), "{bad:?}");
        }
    }
}
