//! CSI quantization and compression for the control plane.
//!
//! Each complex coefficient becomes a CQI (magnitude) level and a CPI
//! (phase) level of `q` bits each. A resource block of 12 subchannels is
//! summarized by its mean (DC) coefficient, and the per-RB level sequences
//! over subframes are sent with a prefix-free increment code:
//!
//! | codeword       | meaning                     |
//! |----------------|-----------------------------|
//! | `0`            | same level as previous      |
//! | `10`           | previous - 1                |
//! | `110`          | previous + 1                |
//! | `111` + q bits | refresh with an absolute level |
//!
//! The first level of a stream is sent as `q` raw bits. CPI increments wrap
//! modulo `2^q` because phase bins are circular.

mod bitstream;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

pub use bitstream::{BitReader, BitWriter};

use crate::error::{Error, Result};
use crate::fading::{generate_process, ChannelProcess, FadingParams};
use crate::rng::derive_seed;
use crate::{linear_to_db, ComplexGain};

/// Subchannels per resource block.
pub const RB_SUBCHANNELS: usize = 12;

/// Uplink spectral-efficiency ratio (ground UE / small-cell UE) for a ground
/// UE 500 m from the macro, with the small-cell UE at the macro edge.
pub const SE_RATIO_500M: f64 = 0.1834;
/// Same ratio with the ground UE at the macro edge.
pub const SE_RATIO_EDGE: f64 = 0.039;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantizedCsi {
    pub cqi_level: u16,
    pub cpi_level: u16,
    pub q: u8,
}

/// Uniform-in-dB magnitude quantizer plus uniform phase quantizer.
///
/// The magnitude range spans `dynamic_range_db` and is anchored at the
/// link's mean power: it runs from `reference_db - (dynamic_range_db -
/// headroom_db)` to `reference_db + headroom_db`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Quantizer {
    pub q: u8,
    pub dynamic_range_db: f64,
    pub headroom_db: f64,
    /// Mean power of the link in dB (`10 log10 sigma_h^2`).
    pub reference_db: f64,
}

impl Default for Quantizer {
    fn default() -> Self {
        Self {
            q: 6,
            dynamic_range_db: 60.0,
            headroom_db: 20.0,
            reference_db: 0.0,
        }
    }
}

impl Quantizer {
    pub fn new(q: u8, dynamic_range_db: f64) -> Result<Self> {
        let quant = Self {
            q,
            dynamic_range_db,
            ..Self::default()
        };
        quant.validate()?;
        Ok(quant)
    }

    /// Anchors the magnitude range at mean power `sigma_h_sq`.
    pub fn anchored_at(self, sigma_h_sq: f64) -> Self {
        Self {
            reference_db: linear_to_db(sigma_h_sq),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=15).contains(&self.q) {
            return Err(Error::arg("q", format!("must lie in 1..=15, got {}", self.q)));
        }
        if !(self.dynamic_range_db > 0.0) {
            return Err(Error::arg("dynamic_range_db", "must be positive"));
        }
        if !(0.0..=self.dynamic_range_db).contains(&self.headroom_db) {
            return Err(Error::arg("headroom_db", "must lie within the dynamic range"));
        }
        Ok(())
    }

    pub fn levels(&self) -> u32 {
        1 << self.q
    }

    fn floor_db(&self) -> f64 {
        self.reference_db + self.headroom_db - self.dynamic_range_db
    }

    fn step_db(&self) -> f64 {
        self.dynamic_range_db / self.levels() as f64
    }

    pub fn quantize(&self, h: ComplexGain) -> QuantizedCsi {
        let n = self.levels();
        let mag_db = 20.0 * h.norm().log10();
        let cqi = ((mag_db - self.floor_db()) / self.step_db()).floor();
        let cqi_level = if cqi.is_nan() || cqi < 0.0 {
            0
        } else {
            (cqi as u32).min(n - 1)
        };
        let phase = h.arg().rem_euclid(TAU);
        let cpi_level = ((phase / TAU * n as f64).floor() as u32) % n;
        QuantizedCsi {
            cqi_level: cqi_level as u16,
            cpi_level: cpi_level as u16,
            q: self.q,
        }
    }

    /// Bin centers.
    pub fn dequantize(&self, csi: QuantizedCsi) -> ComplexGain {
        let mag_db = self.floor_db() + (csi.cqi_level as f64 + 0.5) * self.step_db();
        let phase = (csi.cpi_level as f64 + 0.5) * TAU / self.levels() as f64;
        ComplexGain::from_polar(10f64.powf(mag_db / 20.0), phase)
    }

    /// Worst-case phase error, `pi / 2^q`.
    pub fn phase_error_bound(&self) -> f64 {
        PI / self.levels() as f64
    }

    /// Worst-case in-range magnitude error, `range / 2^(q+1)` dB.
    pub fn magnitude_error_bound_db(&self) -> f64 {
        self.step_db() / 2.0
    }

    /// True when `|h|` lies inside the magnitude range (no clamping).
    pub fn in_range(&self, h: ComplexGain) -> bool {
        let mag_db = 20.0 * h.norm().log10();
        mag_db >= self.floor_db() && mag_db < self.floor_db() + self.dynamic_range_db
    }
}

/// DC summary of one resource block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbSummary {
    pub csi: QuantizedCsi,
    pub dc: ComplexGain,
    /// Mean `|h_i - dc|^2` over the block (absolute power).
    pub distortion: f64,
}

/// Replaces the 12 coefficients of a resource block by their quantized mean.
pub fn rb_compress(coefficients: &[ComplexGain], quantizer: &Quantizer) -> Result<RbSummary> {
    if coefficients.len() != RB_SUBCHANNELS {
        return Err(Error::arg(
            "coefficients",
            format!("a resource block has {RB_SUBCHANNELS} subchannels, got {}", coefficients.len()),
        ));
    }
    let dc = coefficients.iter().sum::<ComplexGain>() / RB_SUBCHANNELS as f64;
    let distortion = coefficients.iter().map(|h| (h - dc).norm_sqr()).sum::<f64>() / RB_SUBCHANNELS as f64;
    Ok(RbSummary {
        csi: quantizer.quantize(dc),
        dc,
        distortion,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Increment {
    Same,
    MinusOne,
    PlusOne,
    Refresh(u16),
}

impl Increment {
    pub fn bits(self, q: u8) -> usize {
        match self {
            Increment::Same => 1,
            Increment::MinusOne => 2,
            Increment::PlusOne => 3,
            Increment::Refresh(_) => 3 + q as usize,
        }
    }
}

/// Classifies the step `prev -> cur`; `cyclic` wraps modulo `2^q`.
pub fn classify(prev: u16, cur: u16, q: u8, cyclic: bool) -> Increment {
    let n = 1i32 << q;
    let mut d = cur as i32 - prev as i32;
    if cyclic {
        d = d.rem_euclid(n);
        if d > n / 2 {
            d -= n;
        }
        // q = 1: +1 and -1 coincide; the shorter codeword wins.
        if n == 2 && d == 1 {
            d = -1;
        }
    }
    match d {
        0 => Increment::Same,
        -1 => Increment::MinusOne,
        1 => Increment::PlusOne,
        _ => Increment::Refresh(cur),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncrementStats {
    pub same: u64,
    pub minus_one: u64,
    pub plus_one: u64,
    pub refresh: u64,
}

impl IncrementStats {
    pub fn record(&mut self, inc: Increment) {
        match inc {
            Increment::Same => self.same += 1,
            Increment::MinusOne => self.minus_one += 1,
            Increment::PlusOne => self.plus_one += 1,
            Increment::Refresh(_) => self.refresh += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.same + self.minus_one + self.plus_one + self.refresh
    }

    pub fn merge(&mut self, other: &IncrementStats) {
        self.same += other.same;
        self.minus_one += other.minus_one;
        self.plus_one += other.plus_one;
        self.refresh += other.refresh;
    }

    pub fn p_same(&self) -> f64 {
        self.same as f64 / self.total() as f64
    }

    pub fn p_step(&self) -> f64 {
        (self.minus_one + self.plus_one) as f64 / self.total() as f64
    }

    pub fn p_refresh(&self) -> f64 {
        self.refresh as f64 / self.total() as f64
    }

    /// Increment statistics of a level sequence without encoding it.
    pub fn of(levels: &[u16], q: u8, cyclic: bool) -> Self {
        let mut s = Self::default();
        for w in levels.windows(2) {
            s.record(classify(w[0], w[1], q, cyclic));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedCsiStream {
    pub bytes: Vec<u8>,
    pub n_bits: usize,
    pub n_coefficients: usize,
    pub q: u8,
    pub cyclic: bool,
    pub stats: IncrementStats,
}

fn check_q(q: u8) -> Result<()> {
    if (1..=15).contains(&q) {
        Ok(())
    } else {
        Err(Error::arg("q", format!("must lie in 1..=15, got {q}")))
    }
}

pub fn encode_increments(levels: &[u16], q: u8, cyclic: bool) -> Result<EncodedCsiStream> {
    check_q(q)?;
    let Some(&first) = levels.first() else {
        return Err(Error::arg("levels", "need at least one level"));
    };
    if let Some(bad) = levels.iter().find(|&&l| l as u32 >= 1 << q) {
        return Err(Error::arg("levels", format!("level {bad} outside [0, 2^{q})")));
    }
    let mut w = BitWriter::new();
    let mut stats = IncrementStats::default();
    w.push_bits(first as u32, q);
    for pair in levels.windows(2) {
        let inc = classify(pair[0], pair[1], q, cyclic);
        stats.record(inc);
        match inc {
            Increment::Same => w.push_bit(false),
            Increment::MinusOne => w.push_bits(0b10, 2),
            Increment::PlusOne => w.push_bits(0b110, 3),
            Increment::Refresh(l) => {
                w.push_bits(0b111, 3);
                w.push_bits(l as u32, q);
            }
        }
    }
    let (bytes, n_bits) = w.finish();
    Ok(EncodedCsiStream {
        bytes,
        n_bits,
        n_coefficients: levels.len(),
        q,
        cyclic,
        stats,
    })
}

pub fn decode_increments(stream: &EncodedCsiStream) -> Result<Vec<u16>> {
    decode_bits(&stream.bytes, stream.n_bits, stream.q, stream.cyclic)
}

/// Decodes a raw bitstream, consuming all `n_bits`.
pub fn decode_bits(bytes: &[u8], n_bits: usize, q: u8, cyclic: bool) -> Result<Vec<u16>> {
    check_q(q)?;
    let n = 1i32 << q;
    let mut r = BitReader::new(bytes, n_bits)?;
    let mut cur = r.read_bits(q)? as i32;
    let mut out = vec![cur as u16];
    while r.remaining() > 0 {
        let at = r.position();
        let step = if !r.read_bit()? {
            0
        } else if !r.read_bit()? {
            -1
        } else if !r.read_bit()? {
            1
        } else {
            cur = r.read_bits(q)? as i32;
            out.push(cur as u16);
            continue;
        };
        let next = cur + step;
        cur = if cyclic {
            next.rem_euclid(n)
        } else if (0..n).contains(&next) {
            next
        } else {
            return Err(Error::Decode {
                offset: at,
                reason: "increment leaves the level range",
            });
        };
        out.push(cur as u16);
    }
    Ok(out)
}

/// Control-plane bandwidth for shipping CSI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateReport {
    pub kbps_per_rb_uncompressed: f64,
    pub kbps_per_rb_compressed: f64,
    pub effective_kbps_per_rb: f64,
    pub total_mbps: f64,
    pub cqi_bits_per_subframe: f64,
    pub cpi_bits_per_subframe: f64,
    /// Mean RB-averaging distortion relative to `sigma_h^2`.
    pub rb_distortion_ratio: f64,
    /// Subframe-to-subframe increment statistics of the RB DC levels.
    pub cqi_time_stats: IncrementStats,
    pub cpi_time_stats: IncrementStats,
    /// Adjacent-subchannel statistics of the raw coefficient levels.
    pub cqi_freq_stats: IncrementStats,
    pub cpi_freq_stats: IncrementStats,
}

/// Raw CSI rate: `12 * 2q` bits per RB per 1 ms subframe.
pub fn uncompressed_kbps_per_rb(q: u8) -> f64 {
    (RB_SUBCHANNELS * 2 * q as usize) as f64
}

/// Measures the compressed rate on `channel`.
///
/// Every complete RB in the channel grid is summarized per subframe by its
/// DC coefficient; CQI and CPI sequences over subframes are increment coded.
/// One bit per 1 ms subframe is one kbps.
pub fn rate_report(
    channel: &ChannelProcess,
    n_rbs: usize,
    neighbors: usize,
    coordination_fraction: f64,
    quantizer: &Quantizer,
) -> Result<RateReport> {
    quantizer.validate()?;
    if !(0.0..=1.0).contains(&coordination_fraction) {
        return Err(Error::arg("coordination_fraction", "must lie in [0, 1]"));
    }
    let measured_rbs = channel.n_subchannels() / RB_SUBCHANNELS;
    if measured_rbs == 0 {
        return Err(Error::arg("channel", "needs at least one full resource block of subchannels"));
    }
    let q = quantizer.q;
    let t = channel.n_subframes();
    let sigma = channel.params().sigma_h_sq;
    let mut cqi_bits = 0usize;
    let mut cpi_bits = 0usize;
    let mut distortion = 0.0;
    let mut cqi_time = IncrementStats::default();
    let mut cpi_time = IncrementStats::default();
    let mut cqi_freq = IncrementStats::default();
    let mut cpi_freq = IncrementStats::default();
    for rb in 0..measured_rbs {
        let mut cqi = Vec::with_capacity(t);
        let mut cpi = Vec::with_capacity(t);
        for sf in 0..t {
            let row = channel.subframe(sf);
            let s = rb_compress(&row[rb * RB_SUBCHANNELS..(rb + 1) * RB_SUBCHANNELS], quantizer)?;
            cqi.push(s.csi.cqi_level);
            cpi.push(s.csi.cpi_level);
            distortion += s.distortion;
        }
        let c = encode_increments(&cqi, q, false)?;
        let p = encode_increments(&cpi, q, true)?;
        cqi_bits += c.n_bits;
        cpi_bits += p.n_bits;
        cqi_time.merge(&c.stats);
        cpi_time.merge(&p.stats);
    }
    for sf in 0..t {
        let levels: Vec<QuantizedCsi> = channel.subframe(sf).iter().map(|h| quantizer.quantize(*h)).collect();
        let cqi: Vec<u16> = levels.iter().map(|l| l.cqi_level).collect();
        let cpi: Vec<u16> = levels.iter().map(|l| l.cpi_level).collect();
        cqi_freq.merge(&IncrementStats::of(&cqi, q, false));
        cpi_freq.merge(&IncrementStats::of(&cpi, q, true));
    }
    let per_rb_sf = (measured_rbs * t) as f64;
    let cqi_bits_per_subframe = cqi_bits as f64 / per_rb_sf;
    let cpi_bits_per_subframe = cpi_bits as f64 / per_rb_sf;
    let compressed = cqi_bits_per_subframe + cpi_bits_per_subframe;
    let effective = neighbors as f64 * coordination_fraction * compressed;
    Ok(RateReport {
        kbps_per_rb_uncompressed: uncompressed_kbps_per_rb(q),
        kbps_per_rb_compressed: compressed,
        effective_kbps_per_rb: effective,
        total_mbps: effective * n_rbs as f64 / 1000.0,
        cqi_bits_per_subframe,
        cpi_bits_per_subframe,
        rb_distortion_ratio: distortion / per_rb_sf / sigma,
        cqi_time_stats: cqi_time,
        cpi_time_stats: cpi_time,
        cqi_freq_stats: cqi_freq,
        cpi_freq_stats: cpi_freq,
    })
}

/// Macro uplink throughput denied to a ground UE when `swiftc_rate_kbps`
/// is carried to a small-cell UE radio.
///
/// The resources are consumed at the small-cell radio's spectral efficiency
/// and valued at the ground UE's.
pub fn macro_overhead(swiftc_rate_kbps: f64, se_smallcell_ue: f64, se_ground_ue: f64) -> Result<f64> {
    if !(se_smallcell_ue > 0.0) {
        return Err(Error::arg("se_smallcell_ue", "must be positive"));
    }
    if !(se_ground_ue > 0.0) {
        return Err(Error::arg("se_ground_ue", "must be positive"));
    }
    Ok(swiftc_rate_kbps * se_ground_ue / se_smallcell_ue)
}

/// Settings for [`calibrate_freq_corr`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub target_p_same: f64,
    pub n_chains: usize,
    pub n_subchannels: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            target_p_same: 0.73,
            n_chains: 64,
            n_subchannels: 512,
            iterations: 30,
            seed: 0xCA11_B8A7E,
        }
    }
}

/// Mean of the CQI and CPI "same level" probabilities across adjacent
/// subchannels for a given frequency correlation.
pub fn adjacent_same_probability(freq_corr: f64, quantizer: &Quantizer, cal: &Calibration) -> Result<f64> {
    let params = FadingParams {
        freq_corr,
        ..FadingParams::default()
    };
    let mut cqi = IncrementStats::default();
    let mut cpi = IncrementStats::default();
    for chain in 0..cal.n_chains {
        let g = generate_process(params, 1, cal.n_subchannels, derive_seed(cal.seed, &[chain as u64]))?;
        let levels: Vec<QuantizedCsi> = g.subframe(0).iter().map(|h| quantizer.quantize(*h)).collect();
        let c: Vec<u16> = levels.iter().map(|l| l.cqi_level).collect();
        let p: Vec<u16> = levels.iter().map(|l| l.cpi_level).collect();
        cqi.merge(&IncrementStats::of(&c, quantizer.q, false));
        cpi.merge(&IncrementStats::of(&p, quantizer.q, true));
    }
    Ok((cqi.p_same() + cpi.p_same()) / 2.0)
}

/// Bisects the adjacent-subchannel correlation that yields
/// `cal.target_p_same` under `quantizer`. The same channel draws are reused
/// at every step, so the search is deterministic.
pub fn calibrate_freq_corr(quantizer: &Quantizer, cal: &Calibration) -> Result<f64> {
    let (mut lo, mut hi) = (0.9, 1.0);
    for _ in 0..cal.iterations {
        let mid = 0.5 * (lo + hi);
        if adjacent_same_probability(mid, quantizer, cal)? < cal.target_p_same {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::CALIBRATED_FREQ_CORR;
    use crate::rng::{complex_normal, stream};

    #[test]
    fn phase_zero_maps_to_level_zero() {
        let q = Quantizer::default();
        assert_eq!(q.quantize(ComplexGain::new(1.0, 0.0)).cpi_level, 0);
        assert_eq!(q.levels(), 64);
    }

    #[test]
    fn zero_magnitude_clamps_low() {
        let q = Quantizer::default();
        assert_eq!(q.quantize(ComplexGain::new(0.0, 0.0)).cqi_level, 0);
        assert_eq!(q.quantize(ComplexGain::new(1e9, 0.0)).cqi_level, 63);
    }

    #[test]
    fn dequantization_error_bounds_hold_per_draw() {
        let q = Quantizer::default();
        let mut rng = stream(11, &[]);
        let mut worst_phase = 0.0f64;
        for _ in 0..100_000 {
            let h = complex_normal(&mut rng, 1.0);
            let back = q.dequantize(q.quantize(h));
            let dphi = (back.arg() - h.arg()).rem_euclid(TAU);
            let dphi = dphi.min(TAU - dphi);
            worst_phase = worst_phase.max(dphi);
            if q.in_range(h) {
                let dmag = (20.0 * back.norm().log10() - 20.0 * h.norm().log10()).abs();
                assert!(dmag <= q.magnitude_error_bound_db() + 1e-9);
            }
        }
        assert!(worst_phase <= PI / 64.0 + 1e-12);
    }

    #[test]
    fn rb_compress_identical_is_lossless() {
        let h = [ComplexGain::new(0.4, -0.2); 12];
        let s = rb_compress(&h, &Quantizer::default()).unwrap();
        assert!(s.distortion < 1e-30);
        assert!((s.dc - h[0]).norm() < 1e-15);
        assert!(rb_compress(&h[..11], &Quantizer::default()).is_err());
    }

    #[test]
    fn hand_encoded_example() {
        let s = encode_increments(&[5, 4, 5, 20], 6, false).unwrap();
        assert_eq!(s.n_bits, 20);
        // 000101 10 110 111 010100
        assert_eq!(s.bytes, vec![0b0001_0110, 0b1101_1101, 0b0100_0000]);
        assert_eq!(decode_increments(&s).unwrap(), vec![5, 4, 5, 20]);
        assert_eq!(s.stats.total(), 3);
    }

    #[test]
    fn constant_sequence_costs_one_bit_per_step() {
        let s = encode_increments(&[9; 40], 6, false).unwrap();
        assert_eq!(s.n_bits, 6 + 39);
        assert_eq!(s.stats.same, 39);
        let one = encode_increments(&[63], 6, true).unwrap();
        assert_eq!(decode_increments(&one).unwrap(), vec![63]);
    }

    #[test]
    fn cyclic_wrap() {
        let s = encode_increments(&[63, 0, 63, 62], 6, true).unwrap();
        assert_eq!(s.stats.plus_one, 1);
        assert_eq!(s.stats.minus_one, 2);
        assert_eq!(decode_increments(&s).unwrap(), vec![63, 0, 63, 62]);
        let lin = encode_increments(&[63, 0], 6, false).unwrap();
        assert_eq!(lin.stats.refresh, 1);
    }

    #[test]
    fn encoder_rejects_bad_input() {
        assert!(encode_increments(&[], 6, false).is_err());
        assert!(encode_increments(&[64], 6, false).is_err());
        assert!(encode_increments(&[1], 0, false).is_err());
    }

    #[test]
    fn decoder_reports_offsets() {
        let s = encode_increments(&[5, 20], 6, false).unwrap();
        let err = decode_bits(&s.bytes, s.n_bits - 2, 6, false);
        assert!(matches!(err, Err(Error::Decode { .. })));
        // level 0 followed by '10' (-1) is out of range when not cyclic
        let mut w = BitWriter::new();
        w.push_bits(0, 6);
        w.push_bits(0b10, 2);
        let (b, n) = w.finish();
        match decode_bits(&b, n, 6, false) {
            Err(Error::Decode { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        assert_eq!(decode_bits(&b, n, 6, true).unwrap(), vec![0, 63]);
    }

    #[test]
    fn rates_and_overhead() {
        assert_eq!(uncompressed_kbps_per_rb(6), 144.0);
        assert!((uncompressed_kbps_per_rb(6) * 100.0 / 1000.0 - 14.4).abs() < 1e-12);
        assert_eq!(macro_overhead(500.0, 2.0, 2.0).unwrap(), 500.0);
        assert!((macro_overhead(1000.0, 1.0, SE_RATIO_500M).unwrap() - 183.4).abs() < 1e-9);
        assert!((macro_overhead(6000.0, 1.0, SE_RATIO_500M).unwrap() - 1100.4).abs() < 1e-9);
        assert!(macro_overhead(1.0, 0.0, 1.0).is_err());
        assert!(macro_overhead(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn rate_report_on_calibrated_channel() {
        let g = generate_process(FadingParams::default(), 200, 120, 3).unwrap();
        let r = rate_report(&g, 100, 3, 0.5, &Quantizer::default()).unwrap();
        assert_eq!(r.kbps_per_rb_uncompressed, 144.0);
        assert!(r.kbps_per_rb_compressed < r.kbps_per_rb_uncompressed);
        assert!((r.effective_kbps_per_rb - 1.5 * r.kbps_per_rb_compressed).abs() < 1e-9);
        assert!((r.total_mbps - r.effective_kbps_per_rb / 10.0).abs() < 1e-9);
        assert!(r.rb_distortion_ratio < 0.05);
        assert!(rate_report(&g, 100, 3, 1.5, &Quantizer::default()).is_err());
    }

    #[test]
    fn frozen_freq_corr_matches_calibration() {
        let c = calibrate_freq_corr(&Quantizer::default(), &Calibration::default()).unwrap();
        assert!((c - CALIBRATED_FREQ_CORR).abs() < 5e-6, "calibrated {c}");
    }
}
