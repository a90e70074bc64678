//! Correlated block fading and CSI staleness.
//!
//! The channel of a single-tap (OFDM sub-channel) link is held constant over a
//! slot of length `T_c(rho)` and re-drawn with correlation `rho` at each slot
//! boundary. Over a latency `L` the shared channel `h_0` and the channel at
//! transmission time `h_L` are related by
//!
//! ```text
//! h_L = rho^(L / T_c) * h_0 + z_L,      E|z_L|^2 = (1 - rho^(2L/T_c)) * sigma_h^2
//! ```
//!
//! `rho_L = rho^(L/T_c)` is the correlation of stale CSI with the true channel
//! and `S_L = 1 - rho_L` is its staleness.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{complex_normal, stream};

pub type ComplexGain = num_complex::Complex64;

/// Subframe (TTI) duration used to discretize the time axis.
pub const SUBFRAME_MS: f64 = 1.0;

/// Adjacent-subchannel correlation that makes 6+6-bit quantized CSI repeat
/// its level across neighbouring subchannels about 73% of the time.
/// Produced by [`crate::csicodec::calibrate_freq_corr`] with its default
/// settings; a unit test there keeps the two in sync.
pub const CALIBRATED_FREQ_CORR: f64 = 0.999_593;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FadingParams {
    /// Correlation per coherence slot, `|rho| <= 1`.
    pub rho: f64,
    /// `T_c(rho)` in milliseconds.
    pub coherence_time_ms: f64,
    /// Mean channel power `E|h|^2` (linear).
    pub sigma_h_sq: f64,
    /// Correlation between adjacent subchannels, in `[0, 1]`.
    pub freq_corr: f64,
}

impl Default for FadingParams {
    fn default() -> Self {
        Self {
            rho: 0.9,
            coherence_time_ms: 5.0,
            sigma_h_sq: 1.0,
            freq_corr: CALIBRATED_FREQ_CORR,
        }
    }
}

impl FadingParams {
    pub fn new(rho: f64, coherence_time_ms: f64, sigma_h_sq: f64, freq_corr: f64) -> Result<Self> {
        let p = Self {
            rho,
            coherence_time_ms,
            sigma_h_sq,
            freq_corr,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho.abs() <= 1.0) {
            return Err(Error::arg("rho", format!("|rho| must be <= 1, got {}", self.rho)));
        }
        if !(self.coherence_time_ms > 0.0) || !self.coherence_time_ms.is_finite() {
            return Err(Error::arg(
                "coherence_time_ms",
                format!("must be positive, got {}", self.coherence_time_ms),
            ));
        }
        if !(self.sigma_h_sq > 0.0) || !self.sigma_h_sq.is_finite() {
            return Err(Error::arg(
                "sigma_h_sq",
                format!("must be positive, got {}", self.sigma_h_sq),
            ));
        }
        if !(0.0..=1.0).contains(&self.freq_corr) {
            return Err(Error::arg(
                "freq_corr",
                format!("must lie in [0, 1], got {}", self.freq_corr),
            ));
        }
        Ok(())
    }

    pub fn with_sigma_h_sq(self, sigma_h_sq: f64) -> Self {
        Self { sigma_h_sq, ..self }
    }

    /// Coherence time for a user moving at `velocity_kmph`.
    ///
    /// `self.coherence_time_ms` holds for static and walking users (up to
    /// `walking_kmph`); faster users decorrelate in inverse proportion to
    /// their Doppler spread.
    pub fn for_velocity(self, velocity_kmph: f64, walking_kmph: f64) -> Self {
        let coherence_time_ms = if velocity_kmph > walking_kmph {
            self.coherence_time_ms * walking_kmph / velocity_kmph
        } else {
            self.coherence_time_ms
        };
        Self {
            coherence_time_ms,
            ..self
        }
    }
}

/// Staleness figures for CSI that is `latency_ms` old.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StalenessReport {
    pub latency_ms: f64,
    pub rho_l: f64,
    pub staleness: f64,
    pub error_variance: f64,
}

/// Error variance `(1 - (1 - S)^2) * sigma_h^2` for staleness `S`.
pub fn staleness_error_variance(staleness: f64, sigma_h_sq: f64) -> f64 {
    let c = 1.0 - staleness;
    (1.0 - c * c) * sigma_h_sq
}

fn check_latency(latency_ms: f64) -> Result<()> {
    if latency_ms >= 0.0 && latency_ms.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(
            "latency_ms",
            format!("must be finite and non-negative, got {latency_ms}"),
        ))
    }
}

/// `rho^(L / T_c)`.
///
/// A negative `rho` only has a real power at whole slots, so for `rho < 0`
/// the latency must be a multiple of `T_c`.
pub fn correlation_at(latency_ms: f64, params: &FadingParams) -> Result<f64> {
    check_latency(latency_ms)?;
    params.validate()?;
    if latency_ms == 0.0 {
        return Ok(1.0);
    }
    let slots = latency_ms / params.coherence_time_ms;
    if params.rho >= 0.0 {
        return Ok(params.rho.powf(slots));
    }
    let whole = slots.round();
    if (slots - whole).abs() > 1e-9 {
        return Err(Error::arg(
            "latency_ms",
            "negative rho requires a latency that is a whole number of coherence slots",
        ));
    }
    Ok(params.rho.powi(whole as i32))
}

pub fn staleness_report(latency_ms: f64, params: &FadingParams) -> Result<StalenessReport> {
    let rho_l = correlation_at(latency_ms, params)?;
    let staleness = 1.0 - rho_l;
    Ok(StalenessReport {
        latency_ms,
        rho_l,
        staleness,
        error_variance: staleness_error_variance(staleness, params.sigma_h_sq),
    })
}

/// Advances `h0` by `latency_ms` along the Gauss-Markov channel process.
///
/// The process is time-reversible, so the same call also produces a stale
/// estimate from a true channel.
pub fn evolve<R: Rng + ?Sized>(
    h0: ComplexGain,
    latency_ms: f64,
    params: &FadingParams,
    rng: &mut R,
) -> Result<ComplexGain> {
    let rho_l = correlation_at(latency_ms, params)?;
    Ok(evolve_with(h0, rho_l, params.sigma_h_sq, rng))
}

/// [`evolve`] with a precomputed `rho_L`; skips validation in hot loops.
#[inline]
pub fn evolve_with<R: Rng + ?Sized>(
    h0: ComplexGain,
    rho_l: f64,
    sigma_h_sq: f64,
    rng: &mut R,
) -> ComplexGain {
    let innovation = (1.0 - rho_l * rho_l).max(0.0) * sigma_h_sq;
    if innovation == 0.0 {
        // Still consume the draws so stream alignment does not depend on rho_l.
        let _ = complex_normal(rng, 1.0);
        return h0 * rho_l;
    }
    h0 * rho_l + complex_normal(rng, innovation)
}

/// Sampled channel over a (subframe x subchannel) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProcess {
    coefficients: Vec<ComplexGain>,
    n_subframes: usize,
    n_subchannels: usize,
    params: FadingParams,
    seed: u64,
}

impl ChannelProcess {
    pub fn n_subframes(&self) -> usize {
        self.n_subframes
    }

    pub fn n_subchannels(&self) -> usize {
        self.n_subchannels
    }

    pub fn params(&self) -> &FadingParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn get(&self, subframe: usize, subchannel: usize) -> ComplexGain {
        self.coefficients[subframe * self.n_subchannels + subchannel]
    }

    /// All subchannels of one subframe.
    pub fn subframe(&self, subframe: usize) -> &[ComplexGain] {
        let start = subframe * self.n_subchannels;
        &self.coefficients[start..start + self.n_subchannels]
    }

    /// One subchannel across all subframes.
    pub fn subchannel(&self, subchannel: usize) -> impl Iterator<Item = ComplexGain> + '_ {
        (0..self.n_subframes).map(move |t| self.get(t, subchannel))
    }

    pub fn coefficients(&self) -> &[ComplexGain] {
        &self.coefficients
    }
}

fn frequency_chain<R: Rng + ?Sized>(
    out: &mut Vec<ComplexGain>,
    n: usize,
    freq_corr: f64,
    sigma_h_sq: f64,
    rng: &mut R,
) {
    let mut h = complex_normal(rng, sigma_h_sq);
    out.push(h);
    for _ in 1..n {
        h = evolve_with(h, freq_corr, sigma_h_sq, rng);
        out.push(h);
    }
}

/// Draws a channel grid with 1 ms subframes.
///
/// Along time each subchannel follows the slot recursion refined to one
/// subframe (`rho^(1/T_c)` per step). The innovation of every subframe is
/// itself a first-order chain across subchannels with coefficient
/// `freq_corr`, so every entry keeps marginal power `sigma_h^2`.
pub fn generate_process(
    params: FadingParams,
    n_subframes: usize,
    n_subchannels: usize,
    seed: u64,
) -> Result<ChannelProcess> {
    params.validate()?;
    if n_subframes == 0 || n_subchannels == 0 {
        return Err(Error::arg(
            "dimensions",
            format!("grid must be at least 1x1, got {n_subframes}x{n_subchannels}"),
        ));
    }
    let step = correlation_at(SUBFRAME_MS, &params)?;
    let innovation_scale = (1.0 - step * step).max(0.0).sqrt();
    let mut rng = stream(seed, &[]);
    let mut coefficients = Vec::with_capacity(n_subframes * n_subchannels);
    frequency_chain(
        &mut coefficients,
        n_subchannels,
        params.freq_corr,
        params.sigma_h_sq,
        &mut rng,
    );
    let mut innovation = Vec::with_capacity(n_subchannels);
    for t in 1..n_subframes {
        innovation.clear();
        frequency_chain(
            &mut innovation,
            n_subchannels,
            params.freq_corr,
            params.sigma_h_sq,
            &mut rng,
        );
        let prev = (t - 1) * n_subchannels;
        for (f, w) in innovation.iter().enumerate() {
            let h = coefficients[prev + f] * step + w * innovation_scale;
            coefficients.push(h);
        }
    }
    Ok(ChannelProcess {
        coefficients,
        n_subframes,
        n_subchannels,
        params,
        seed,
    })
}

/// Sample correlation `E[a b*] / sqrt(E|a|^2 E|b|^2)` (real part).
pub fn sample_correlation(a: &[ComplexGain], b: &[ComplexGain]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut cross = 0.0;
    let mut pa = 0.0;
    let mut pb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cross += (x * y.conj()).re;
        pa += x.norm_sqr();
        pb += y.norm_sqr();
    }
    cross / (pa * pb).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rho: f64, tc: f64) -> FadingParams {
        FadingParams::new(rho, tc, 1.0, 0.5).unwrap()
    }

    #[test]
    fn zero_latency_is_identity() {
        assert_eq!(correlation_at(0.0, &p(0.3, 2.0)).unwrap(), 1.0);
        let r = staleness_report(0.0, &p(0.9, 5.0)).unwrap();
        assert_eq!(r.staleness, 0.0);
        assert_eq!(r.error_variance, 0.0);
    }

    #[test]
    fn ten_ms_at_ninety_percent_five_ms_is_eighty_one_percent() {
        let c = correlation_at(10.0, &p(0.9, 5.0)).unwrap();
        assert!((c - 0.81).abs() < 1e-12);
    }

    #[test]
    fn fractional_slot_latency() {
        // 0.9^1.5 = 0.9 * sqrt(0.9)
        let c = correlation_at(7.5, &p(0.9, 5.0)).unwrap();
        assert!((c - 0.853_814_968_245_462_2).abs() < 1e-12);
    }

    #[test]
    fn staleness_error_variance_examples() {
        assert!((staleness_error_variance(0.1, 1.0) - 0.19).abs() < 1e-12);
        let params = FadingParams::new(0.9, 5.0, 2.0, 0.5).unwrap();
        let r = staleness_report(10.0, &params).unwrap();
        assert!((r.staleness - 0.19).abs() < 1e-12);
        assert!((r.error_variance - 0.6878).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_latency_and_bad_params() {
        assert!(correlation_at(-1.0, &p(0.9, 5.0)).is_err());
        assert!(FadingParams::new(1.1, 5.0, 1.0, 0.5).is_err());
        assert!(FadingParams::new(0.9, 0.0, 1.0, 0.5).is_err());
        assert!(FadingParams::new(0.9, 5.0, 0.0, 0.5).is_err());
        assert!(FadingParams::new(0.9, 5.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn negative_rho_needs_whole_slots() {
        let params = p(-0.5, 2.0);
        assert!((correlation_at(4.0, &params).unwrap() - 0.25).abs() < 1e-15);
        assert!((correlation_at(2.0, &params).unwrap() + 0.5).abs() < 1e-15);
        assert!(correlation_at(3.0, &params).is_err());
        let r = staleness_report(2.0, &params).unwrap();
        assert!(r.staleness <= 2.0 && r.error_variance <= 2.0 * params.sigma_h_sq);
    }

    #[test]
    fn correlation_is_non_increasing_in_latency() {
        let params = p(0.9, 5.0);
        let mut last = 1.0;
        for l in 0..200 {
            let c = correlation_at(l as f64 * 0.25, &params).unwrap();
            assert!(c <= last);
            last = c;
        }
    }

    #[test]
    fn evolve_zero_latency_returns_input() {
        let mut rng = stream(1, &[]);
        let h = ComplexGain::new(0.3, -1.2);
        assert_eq!(evolve(h, 0.0, &p(0.9, 5.0), &mut rng).unwrap(), h);
    }

    #[test]
    fn evolve_full_decorrelation_forgets_input() {
        let params = FadingParams::new(0.0, 1.0, 2.0, 0.0).unwrap();
        let mut rng = stream(2, &[]);
        let n = 100_000;
        let h0 = ComplexGain::new(5.0, 5.0);
        let mut mean = ComplexGain::new(0.0, 0.0);
        let mut power = 0.0;
        for _ in 0..n {
            let h = evolve(h0, 3.0, &params, &mut rng).unwrap();
            mean += h;
            power += h.norm_sqr();
        }
        mean /= n as f64;
        assert!(mean.norm() < 0.02, "mean {mean}");
        assert!((power / n as f64 - 2.0).abs() < 0.04);
    }

    #[test]
    fn evolve_one_slot_correlation() {
        let params = p(0.9, 5.0);
        let mut rng = stream(3, &[]);
        let n = 100_000;
        let (a, b): (Vec<_>, Vec<_>) = (0..n)
            .map(|_| {
                let h0 = complex_normal(&mut rng, 1.0);
                (h0, evolve(h0, 5.0, &params, &mut rng).unwrap())
            })
            .unzip();
        let c = sample_correlation(&a, &b);
        assert!((c - 0.9).abs() < 0.01, "corr {c}");
    }

    #[test]
    fn process_rejects_empty_grid() {
        assert!(generate_process(FadingParams::default(), 0, 4, 1).is_err());
        assert!(generate_process(FadingParams::default(), 4, 0, 1).is_err());
    }

    #[test]
    fn process_is_deterministic_per_seed() {
        let a = generate_process(FadingParams::default(), 20, 24, 99).unwrap();
        let b = generate_process(FadingParams::default(), 20, 24, 99).unwrap();
        let c = generate_process(FadingParams::default(), 20, 24, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.coefficients(), c.coefficients());
    }

    #[test]
    fn single_cell_process_has_unit_power_on_average() {
        let n = 20_000;
        let mean: f64 = (0..n)
            .map(|s| generate_process(FadingParams::default(), 1, 1, s).unwrap().get(0, 0).norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0).abs() < 0.03);
    }

    #[test]
    fn adjacent_subframe_correlation_matches_slot_refinement() {
        let g = generate_process(FadingParams::default(), 500, 512, 5).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for t in 1..g.n_subframes() {
            a.extend_from_slice(g.subframe(t - 1));
            b.extend_from_slice(g.subframe(t));
        }
        let expected = 0.9f64.powf(0.2);
        let c = sample_correlation(&a, &b);
        assert!((c - expected).abs() < 0.005, "corr {c} vs {expected}");
    }

    #[test]
    fn velocity_scaling_keeps_walking_users_at_base_coherence() {
        let base = FadingParams::default();
        assert_eq!(base.for_velocity(1.0, 5.0).coherence_time_ms, 5.0);
        assert_eq!(base.for_velocity(5.0, 5.0).coherence_time_ms, 5.0);
        let fast = base.for_velocity(30.0, 5.0).coherence_time_ms;
        assert!((fast - 5.0 / 6.0).abs() < 1e-12);
    }
}
