//! Monte Carlo simulation of the fading channel.
//!
//! Unlike the analytic routes this draws every element's coefficients, so
//! it needs neither the central-limit model of the destination amplitude
//! nor independence between the destination and eavesdropper paths.

mod channel;
mod estimate;
mod rng;
mod slot;

pub use channel::{sample_realization, ChannelRealization, LinkFading};
pub use estimate::{
    estimate_batch, estimate_schemes, estimate_sop, wilson_interval, McEstimate, McMode, McOptions, OperatingPoint,
    Scheme,
};
pub use rng::{LinkTag, SlotStream};
pub use slot::{
    aligned_phases, noma_outcome, noma_slot, ous_outcome, ous_slot, slot_gains, NomaOutcome, SlotGains, SlotOutcome,
};
