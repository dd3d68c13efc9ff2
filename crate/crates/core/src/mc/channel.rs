//! Channel draws for one time slot.

use num_complex::Complex64;

use super::rng::{LinkTag, SlotStream};
use crate::sysmodel::LinkGains;

/// Coefficients of one link, one per RIS element, in polar form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinkFading {
    pub amp: Vec<f64>,
    pub phase: Vec<f64>,
}

impl LinkFading {
    pub fn len(&self) -> usize {
        self.amp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amp.is_empty()
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        Complex64::from_polar(self.amp[n], self.phase[n])
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        (0..self.len()).map(|n| self.coefficient(n)).collect()
    }

    fn fill(&mut self, seed: u64, slot: u64, tag: LinkTag, len: usize, scale: f64) {
        let mut s = SlotStream::new(seed, slot, tag);
        self.amp.clear();
        self.phase.clear();
        for _ in 0..len {
            let (r, t) = s.complex_gaussian_polar();
            self.amp.push(r * scale);
            self.phase.push(t);
        }
    }
}

/// Fading coefficients of one slot.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChannelRealization {
    /// S-R link.
    pub h_sr: LinkFading,
    /// R-D link of every user.
    pub h_rd: Vec<LinkFading>,
    /// R-E link.
    pub h_re: LinkFading,
    /// Independent S-R draw used on the eavesdropper path in
    /// [`super::McMode::Independent`]; `None` when the path shares `h_sr`.
    pub h_sr_eve: Option<LinkFading>,
}

impl ChannelRealization {
    pub fn n_elements(&self) -> usize {
        self.h_sr.len()
    }

    pub fn n_users(&self) -> usize {
        self.h_rd.len()
    }

    /// S-R coefficients seen by the eavesdropper.
    pub fn h_sr_for_eve(&self) -> &LinkFading {
        self.h_sr_eve.as_ref().unwrap_or(&self.h_sr)
    }

    /// Redraws every coefficient in place for slot `slot` of the run keyed by `seed`.
    pub fn resample(
        &mut self,
        n_users: usize,
        n_elements: usize,
        gains: &LinkGains,
        seed: u64,
        slot: u64,
        independent_eve: bool,
    ) {
        self.h_sr.fill(seed, slot, LinkTag::SourceRis, n_elements, gains.sr.sqrt());
        // All users share one stream, user-major.
        self.h_rd.resize_with(n_users, LinkFading::default);
        let mut s = SlotStream::new(seed, slot, LinkTag::RisDestination);
        let scale = gains.rd.sqrt();
        for link in &mut self.h_rd {
            link.amp.clear();
            link.phase.clear();
            for _ in 0..n_elements {
                let (r, t) = s.complex_gaussian_polar();
                link.amp.push(r * scale);
                link.phase.push(t);
            }
        }
        self.h_re.fill(seed, slot, LinkTag::RisEavesdropper, n_elements, gains.re.sqrt());
        if independent_eve {
            self.h_sr_eve.get_or_insert_with(LinkFading::default).fill(
                seed,
                slot,
                LinkTag::SourceRisEve,
                n_elements,
                gains.sr.sqrt(),
            );
        } else {
            self.h_sr_eve = None;
        }
    }
}

/// Draws slot `slot` of the run keyed by `seed`. Every link coefficient is a
/// unit-power circularly-symmetric complex Gaussian scaled by the square
/// root of the link's path-loss gain.
pub fn sample_realization(
    n_elements: usize,
    n_users: usize,
    gains: &LinkGains,
    seed: u64,
    slot: u64,
    independent_eve: bool,
) -> ChannelRealization {
    let mut r = ChannelRealization::default();
    r.resample(n_users, n_elements, gains, seed, slot, independent_eve);
    r
}
