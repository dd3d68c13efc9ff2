//! SOP estimation over many slots.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::ChannelRealization;
use super::slot::{noma_outcome, ous_outcome, slot_gains};
use crate::error::{Result, SopError};
use crate::sysmodel::{db_to_linear, SystemConfig};

/// Slots per work unit. Fixed so results do not depend on the worker count.
const CHUNK: u64 = 4096;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "OUS")]
    Ous,
    #[serde(rename = "NOMA_BU")]
    NomaBu,
    #[serde(rename = "NOMA_WU")]
    NomaWu,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Ous => "OUS",
            Scheme::NomaBu => "NOMA_BU",
            Scheme::NomaWu => "NOMA_WU",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = SopError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "OUS" => Ok(Scheme::Ous),
            "NOMA_BU" => Ok(Scheme::NomaBu),
            "NOMA_WU" => Ok(Scheme::NomaWu),
            other => Err(SopError::Validation(format!("unknown scheme {other:?}"))),
        }
    }
}

/// How the eavesdropper's S-R coefficients relate to the destination's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum McMode {
    /// One S-R draw shared by both paths, as in the physical channel.
    #[default]
    Physical,
    /// A fresh S-R draw for the eavesdropper path.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub trials: u64,
    pub seed: u64,
    pub mode: McMode,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    pub power_grid_size: usize,
}

impl Default for McOptions {
    fn default() -> Self {
        Self { trials: 1_000_000, seed: 1, mode: McMode::Physical, workers: 0, power_grid_size: 99 }
    }
}

/// Empirical SOP with a 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub scheme: Scheme,
    pub trials: u64,
    pub outages: u64,
    pub sop_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl McEstimate {
    pub fn new(scheme: Scheme, trials: u64, outages: u64, seed: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(outages, trials);
        Self { scheme, trials, outages, sop_hat: outages as f64 / trials as f64, ci_low, ci_high, seed }
    }

    /// Wilson-score standard error: half-width of the 95% interval over the
    /// normal quantile, before clamping.
    pub fn wilson_standard_error(&self) -> f64 {
        let n = self.trials as f64;
        let z2 = Z95 * Z95;
        (self.sop_hat * (1.0 - self.sop_hat) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
    }

    /// Binomial standard error at a reference probability.
    pub fn standard_error_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = Z95 * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    // Guard rounding so that low <= p <= high always holds.
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

/// SOP of one scheme.
pub fn estimate_sop(cfg: &SystemConfig, scheme: Scheme, opts: &McOptions) -> Result<McEstimate> {
    Ok(estimate_schemes(cfg, &[scheme], opts)?.remove(0))
}

/// SOP of several schemes from the same channel draws.
pub fn estimate_schemes(cfg: &SystemConfig, schemes: &[Scheme], opts: &McOptions) -> Result<Vec<McEstimate>> {
    let point = OperatingPoint { gamma0_db: cfg.gamma0_db, r_th: cfg.r_th };
    Ok(estimate_batch(cfg, &[point], schemes, opts)?.remove(0))
}

/// Transmit SNR and secrecy threshold of one point in a batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub gamma0_db: f64,
    pub r_th: f64,
}

/// SOP at several transmit SNRs and thresholds over one set of channel draws.
///
/// Neither parameter changes the fading, so every point sees the slots it
/// would see in its own run: each returned estimate equals the one
/// [`estimate_schemes`] gives for `cfg` with that point substituted. The
/// result holds one vector per point, ordered like `schemes`.
pub fn estimate_batch(
    cfg: &SystemConfig,
    points: &[OperatingPoint],
    schemes: &[Scheme],
    opts: &McOptions,
) -> Result<Vec<Vec<McEstimate>>> {
    cfg.validate()?;
    for p in points {
        SystemConfig { gamma0_db: p.gamma0_db, r_th: p.r_th, ..*cfg }.validate()?;
    }
    if opts.trials == 0 {
        return Err(SopError::Validation("trials must be at least 1".into()));
    }
    if schemes.is_empty() {
        return Err(SopError::Validation("no scheme requested".into()));
    }
    let need_noma = schemes.iter().any(|s| *s != Scheme::Ous);
    if need_noma && cfg.n_users < 2 {
        return Err(SopError::Contract(format!("NOMA pairing needs at least 2 users, got {}", cfg.n_users)));
    }
    if need_noma && opts.power_grid_size == 0 {
        return Err(SopError::Validation("power grid must have at least one point".into()));
    }
    let gains = cfg.link_gains()?;
    let independent = opts.mode == McMode::Independent;
    let linear: Vec<(f64, f64)> = points.iter().map(|p| (db_to_linear(p.gamma0_db), p.r_th)).collect();
    let chunks = opts.trials.div_ceil(CHUNK);

    let run_chunk = |c: u64| -> Result<Vec<[u64; 3]>> {
        let mut counts = vec![[0u64; 3]; linear.len()];
        let mut r = ChannelRealization::default();
        for slot in c * CHUNK..((c + 1) * CHUNK).min(opts.trials) {
            r.resample(cfg.n_users, cfg.n_elements, &gains, opts.seed, slot, independent);
            let g = slot_gains(&r, need_noma);
            for (count, &(g0, r_th)) in counts.iter_mut().zip(&linear) {
                count[0] += ous_outcome(&g, g0, r_th).outage as u64;
                if need_noma {
                    let pair = noma_outcome(&g, g0, r_th, opts.power_grid_size)?;
                    count[1] += pair.best.outage as u64;
                    count[2] += pair.worst.outage as u64;
                }
            }
        }
        Ok(counts)
    };
    let add = |a: Result<Vec<[u64; 3]>>, b: Result<Vec<[u64; 3]>>| -> Result<Vec<[u64; 3]>> {
        let (mut a, b) = (a?, b?);
        for (x, y) in a.iter_mut().zip(&b) {
            for k in 0..3 {
                x[k] += y[k];
            }
        }
        Ok(a)
    };
    let zero = || Ok(vec![[0u64; 3]; linear.len()]);
    let sum = || (0..chunks).into_par_iter().map(run_chunk).reduce(zero, add);

    let counts = if opts.workers == 0 {
        sum()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| SopError::Evaluation(format!("thread pool: {e}")))?
            .install(sum)?
    };

    Ok(counts
        .iter()
        .map(|c| {
            schemes
                .iter()
                .map(|&s| {
                    let k = match s {
                        Scheme::Ous => c[0],
                        Scheme::NomaBu => c[1],
                        Scheme::NomaWu => c[2],
                    };
                    McEstimate::new(s, opts.trials, k, opts.seed)
                })
                .collect()
        })
        .collect())
}
