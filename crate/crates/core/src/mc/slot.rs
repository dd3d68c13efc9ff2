//! Per-slot scheduling decisions and secrecy outcomes.

use num_complex::Complex64;

use super::channel::{ChannelRealization, LinkFading};
use crate::error::{Result, SopError};
use crate::sysmodel::SystemConfig;

/// Result of one slot for one served user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotOutcome {
    /// Zero-based index of the served user.
    pub selected_user: usize,
    /// Destination SNR of the served user.
    pub gamma_d_star: f64,
    /// Eavesdropper SNR under the phases chosen in this slot.
    pub gamma_e: f64,
    /// Secrecy rate in bits per channel use, never negative.
    pub secrecy_rate: f64,
    pub outage: bool,
}

fn secrecy(r_th: f64, user: usize, gamma_d: f64, gamma_e: f64) -> SlotOutcome {
    let rate = ((gamma_d.ln_1p() - gamma_e.ln_1p()) / std::f64::consts::LN_2).max(0.0);
    SlotOutcome { selected_user: user, gamma_d_star: gamma_d, gamma_e, secrecy_rate: rate, outage: rate < r_th }
}

/// Aligned amplitude `sum_n |h_rd| |h_sr|` of every user.
fn aligned_amplitudes(r: &ChannelRealization) -> Vec<f64> {
    r.h_rd.iter().map(|hm| hm.amp.iter().zip(&r.h_sr.amp).map(|(a, b)| a * b).sum()).collect()
}

/// Index of the largest value; lowest index on ties.
fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// RIS phases `theta_n = -(phi_n + psi_{n,m})` that co-phase user `m`.
pub fn aligned_phases(r: &ChannelRealization, user: usize) -> Vec<f64> {
    r.h_sr.phase.iter().zip(&r.h_rd[user].phase).map(|(s, d)| -(s + d)).collect()
}

/// `|sum_n a_n e^{j theta_n} b_n|^2` with the phases `theta` that co-phase
/// user `sel`.
fn combined_gain(a: &LinkFading, b: &LinkFading, r: &ChannelRealization, sel: usize) -> f64 {
    let rd = &r.h_rd[sel];
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..a.len() {
        let theta = -(r.h_sr.phase[n] + rd.phase[n]);
        acc += Complex64::from_polar(a.amp[n] * b.amp[n], a.phase[n] + b.phase[n] + theta);
    }
    acc.norm_sqr()
}

/// Transmit-SNR-free gains of one slot; every SNR is `Gamma0` times one of these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotGains {
    /// User with the largest aligned amplitude.
    pub best: usize,
    /// `(sum_n |h_rd| |h_sr|)^2` of `best`.
    pub best_gain: f64,
    /// Eavesdropper gain under the phases that co-phase `best`.
    pub eve_gain: f64,
    /// Weakest other user under the same phases, when requested.
    pub worst: Option<(usize, f64)>,
}

/// Scheduling-relevant gains of a slot. `with_pair` also finds the weakest
/// partner for NOMA pairing (needs at least two users).
pub fn slot_gains(r: &ChannelRealization, with_pair: bool) -> SlotGains {
    let amp = aligned_amplitudes(r);
    let best = argmax(&amp);
    let worst = if with_pair {
        let mut w: Option<(usize, f64)> = None;
        for m in (0..r.n_users()).filter(|&m| m != best) {
            let g = combined_gain(&r.h_rd[m], &r.h_sr, r, best);
            if w.is_none_or(|(_, wg)| g < wg) {
                w = Some((m, g));
            }
        }
        w
    } else {
        None
    };
    SlotGains {
        best,
        best_gain: amp[best] * amp[best],
        eve_gain: combined_gain(&r.h_re, r.h_sr_for_eve(), r, best),
        worst,
    }
}

/// OUS outcome of a slot at transmit SNR `gamma0` (linear).
pub fn ous_outcome(g: &SlotGains, gamma0: f64, r_th: f64) -> SlotOutcome {
    secrecy(r_th, g.best, gamma0 * g.best_gain, gamma0 * g.eve_gain)
}

/// Opportunistic scheduling: serve the user with the best destination SNR.
pub fn ous_slot(cfg: &SystemConfig, r: &ChannelRealization) -> SlotOutcome {
    ous_outcome(&slot_gains(r, false), cfg.gamma0_linear(), cfg.r_th)
}

/// Both users of a NOMA pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NomaOutcome {
    pub best: SlotOutcome,
    pub worst: SlotOutcome,
    /// Power fraction given to the best user; always below one half.
    pub a_best: f64,
}

/// Power fraction `a` for the best user from an even grid on `(0, 1/2)`,
/// maximizing the instantaneous legitimate sum rate.
fn power_split(gamma_b: f64, gamma_w: f64, grid: usize) -> f64 {
    // Sum rate is log2((1 + gw)/(1 + a gw)) + log2(1 + a gb); the constant
    // numerator drops out of the comparison.
    let objective = |a: f64| (1.0 + a * gamma_b) / (1.0 + a * gamma_w);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 1..=grid {
        let a = 0.5 * i as f64 / (grid + 1) as f64;
        let v = objective(a);
        if v > best.0 {
            best = (v, a);
        }
    }
    best.1
}

/// NOMA outcome of a slot whose gains were computed with the pair.
///
/// The worst user's message is decoded first at every receiver, treating the
/// best user's signal as noise; the best user and the eavesdropper then
/// cancel it before decoding the best user's message.
pub fn noma_outcome(g: &SlotGains, gamma0: f64, r_th: f64, power_grid_size: usize) -> Result<NomaOutcome> {
    let (wu, wu_gain) = g.worst.ok_or_else(|| SopError::Contract("NOMA pairing needs at least 2 users".into()))?;
    if power_grid_size == 0 {
        return Err(SopError::Validation("power grid must have at least one point".into()));
    }
    let gamma_b = gamma0 * g.best_gain;
    let gamma_w = gamma0 * wu_gain;
    let gamma_e = gamma0 * g.eve_gain;
    let a = power_split(gamma_b, gamma_w, power_grid_size);

    let interfered = |x: f64| (1.0 - a) * x / (a * x + 1.0);
    Ok(NomaOutcome {
        best: SlotOutcome { gamma_d_star: gamma_b, ..secrecy(r_th, g.best, a * gamma_b, a * gamma_e) },
        worst: SlotOutcome { gamma_d_star: gamma_w, ..secrecy(r_th, wu, interfered(gamma_w), interfered(gamma_e)) },
        a_best: a,
    })
}

/// Two-user NOMA benchmark: pair the best user with the worst one under the
/// best user's phase alignment.
pub fn noma_slot(cfg: &SystemConfig, r: &ChannelRealization, power_grid_size: usize) -> Result<NomaOutcome> {
    if r.n_users() < 2 {
        return Err(SopError::Contract(format!("NOMA pairing needs at least 2 users, got {}", r.n_users())));
    }
    noma_outcome(&slot_gains(r, true), cfg.gamma0_linear(), cfg.r_th, power_grid_size)
}
