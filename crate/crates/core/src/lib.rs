//! Dense heterogeneous cellular network simulator focused on how
//! control-plane latency degrades coordinated multipoint (CoMP) joint
//! transmission.
//!
//! The crate is organised bottom-up:
//!
//! - [`fading`]: correlated block fading, staleness of shared channel state.
//! - [`geometry`]: node layout, path gains, noise floors and full-duplex
//!   self-interference cancellation budgets.
//! - [`comp`]: regularized channel-inversion precoding on stale CSI and
//!   per-user capacity under IGNORE / AVOID / CoMP serving.
//! - [`csicodec`]: CQI/CPI quantization, resource-block compression and the
//!   prefix-free increment code used to ship CSI over the control plane.
//! - [`controlplane`]: in-band (full-duplex) and X2-over-IP latency models.
//! - [`scheduler`]: association and serving-mode policy with round-robin
//!   airtime sharing.
//! - [`sim`]: scenario configuration, Monte-Carlo experiments and CSV/JSON
//!   emission.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comp;
pub mod controlplane;
pub mod csicodec;
pub mod error;
pub mod fading;
pub mod geometry;
pub mod rng;
pub mod scheduler;
pub mod sim;

pub use error::{Error, Result};
pub use fading::ComplexGain;

/// Converts a power ratio in dB to linear scale.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to dB.
#[inline]
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
