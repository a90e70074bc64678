//! Node layout, large-scale path gains, receiver noise floors and
//! full-duplex cancellation budgets.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream;
use crate::ComplexGain;

/// Thermal noise density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DBM_HZ: f64 = -174.0;

/// Noise-floor rise left behind by self-interference cancellation at a
/// full-duplex small-cell radio.
pub const FD_PENALTY_DB: f64 = 1.7;

/// Lowest SNR at which an LTE link can be sustained (QPSK 1/8-ish).
pub const ASSOCIATION_THRESHOLD_DB: f64 = -6.7;

/// Velocities assigned to simulated users, km/h.
pub const USER_VELOCITIES_KMPH: [f64; 3] = [1.0, 5.0, 30.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    MacroEnb,
    MicroEnb,
    PicoEnb,
    Ue,
    /// The phone radio embedded in a small cell that talks to the macro.
    SmallcellUeRadio,
}

impl NodeKind {
    pub fn is_infrastructure(self) -> bool {
        !matches!(self, NodeKind::Ue)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub kind: NodeKind,
    /// Horizontal position in meters.
    pub position: [f64; 2],
    pub height_m: f64,
    /// Maximum transmit power including antenna gains.
    pub tx_power_dbm: f64,
    pub noise_figure_db: f64,
    pub velocity_kmph: f64,
}

impl NodeSpec {
    /// Defaults per kind: macro 62 dBm / 32 m / NF 2 dB, micro 30 dBm /
    /// 12.5 m / NF 5 dB, pico 24 dBm / 5 m / NF 5 dB, UE 18 dBm / 1.5 m /
    /// NF 9 dB. The small-cell UE radio is a UE radio mounted at micro
    /// height.
    pub fn new(kind: NodeKind, position: [f64; 2]) -> Self {
        let (height_m, tx_power_dbm, noise_figure_db) = match kind {
            NodeKind::MacroEnb => (32.0, 62.0, 2.0),
            NodeKind::MicroEnb => (12.5, 30.0, 5.0),
            NodeKind::PicoEnb => (5.0, 24.0, 5.0),
            NodeKind::Ue => (1.5, 18.0, 9.0),
            NodeKind::SmallcellUeRadio => (12.5, 18.0, 9.0),
        };
        Self {
            kind,
            position,
            height_m,
            tx_power_dbm,
            noise_figure_db,
            velocity_kmph: 0.0,
        }
    }

    pub fn ue(position: [f64; 2], velocity_kmph: f64) -> Self {
        Self {
            velocity_kmph,
            ..Self::new(NodeKind::Ue, position)
        }
    }

    pub fn with_tx_power(self, tx_power_dbm: f64) -> Self {
        Self {
            tx_power_dbm,
            ..self
        }
    }

    pub fn distance_to(&self, other: &NodeSpec) -> f64 {
        distance(self.position, other.position)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::arg("tx_power_dbm", "must be finite"));
        }
        if !(self.height_m > 0.0) {
            return Err(Error::arg("height_m", format!("must be positive, got {}", self.height_m)));
        }
        if !(self.velocity_kmph >= 0.0) {
            return Err(Error::arg("velocity_kmph", "must be non-negative"));
        }
        Ok(())
    }
}

pub fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Log-distance path loss `A + B log10(d)` with a constant bonus for
/// macro links to elevated small-cell radios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathLossConfig {
    pub a_db: f64,
    pub b_db_per_decade: f64,
    pub elevation_bonus_db: f64,
    /// Radios at or above this height count as elevated.
    pub elevated_height_m: f64,
    /// Distances are clamped here in simulations to keep gains finite.
    pub min_distance_m: f64,
}

impl Default for PathLossConfig {
    fn default() -> Self {
        Self {
            a_db: 30.5,
            b_db_per_decade: 36.7,
            elevation_bonus_db: 30.0,
            elevated_height_m: 10.0,
            min_distance_m: 1.0,
        }
    }
}

impl PathLossConfig {
    /// Gain at distance `d_m` without any elevation bonus.
    pub fn gain_at(&self, d_m: f64) -> f64 {
        -(self.a_db + self.b_db_per_decade * d_m.max(self.min_distance_m).log10())
    }

    fn elevated_pair(&self, a: &NodeSpec, b: &NodeSpec) -> bool {
        let elevated_radio =
            |n: &NodeSpec| n.kind == NodeKind::SmallcellUeRadio && n.height_m >= self.elevated_height_m;
        (a.kind == NodeKind::MacroEnb && elevated_radio(b))
            || (b.kind == NodeKind::MacroEnb && elevated_radio(a))
    }
}

/// Large-scale gain between two nodes, reciprocal in `tx` and `rx`.
pub fn path_gain_db(tx: &NodeSpec, rx: &NodeSpec, model: &PathLossConfig) -> Result<f64> {
    let d = tx.distance_to(rx);
    if !(d > 0.0) {
        return Err(Error::arg("distance", "transmitter and receiver are co-located"));
    }
    let bonus = if model.elevated_pair(tx, rx) {
        model.elevation_bonus_db
    } else {
        0.0
    };
    Ok(-(model.a_db + model.b_db_per_decade * d.log10()) + bonus)
}

/// `-174 + 10 log10(B) + NF`, in dBm.
pub fn noise_floor(bandwidth_hz: f64, noise_figure_db: f64) -> Result<f64> {
    if !(bandwidth_hz > 0.0) || !bandwidth_hz.is_finite() {
        return Err(Error::arg("bandwidth_hz", format!("must be positive, got {bandwidth_hz}")));
    }
    Ok(THERMAL_NOISE_DBM_HZ + 10.0 * bandwidth_hz.log10() + noise_figure_db)
}

/// Noise floor of a full-duplex small-cell radio after cancellation.
pub fn full_duplex_noise_floor(bandwidth_hz: f64, noise_figure_db: f64) -> Result<f64> {
    Ok(noise_floor(bandwidth_hz, noise_figure_db)? + FD_PENALTY_DB)
}

/// Self-interference suppression needed to bring `tx_power_dbm` down to the
/// receiver's noise floor.
pub fn cancellation_required(tx_power_dbm: f64, bandwidth_hz: f64, noise_figure_db: f64) -> Result<f64> {
    Ok(tx_power_dbm - noise_floor(bandwidth_hz, noise_figure_db)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudget {
    pub bandwidth_hz: f64,
    pub noise_floor_dbm: f64,
    pub tx_power_dbm: f64,
    pub required_cancellation_db: f64,
}

impl LinkBudget {
    pub fn new(tx_power_dbm: f64, bandwidth_hz: f64, noise_figure_db: f64) -> Result<Self> {
        let noise_floor_dbm = noise_floor(bandwidth_hz, noise_figure_db)?;
        Ok(Self {
            bandwidth_hz,
            noise_floor_dbm,
            tx_power_dbm,
            required_cancellation_db: tx_power_dbm - noise_floor_dbm,
        })
    }
}

/// Received SNR in dB including a fast-fading amplitude.
///
/// A zero fading gain yields `f64::NEG_INFINITY`.
pub fn rx_snr_db(
    tx: &NodeSpec,
    rx: &NodeSpec,
    bandwidth_hz: f64,
    fast_fading_gain: ComplexGain,
    model: &PathLossConfig,
) -> Result<f64> {
    let large_scale = tx.tx_power_dbm + path_gain_db(tx, rx, model)? - noise_floor(bandwidth_hz, rx.noise_figure_db)?;
    let mag = fast_fading_gain.norm();
    if mag == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(large_scale + 20.0 * mag.log10())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Topology {
    /// `cells[0]` is the macro; micro cells follow.
    pub cells: Vec<NodeSpec>,
    pub users: Vec<NodeSpec>,
    pub macro_radius_m: f64,
    /// Coverage radius of each micro cell, `R / sqrt(n_micro)`.
    pub micro_radius_m: f64,
}

impl Topology {
    pub fn macro_cell(&self) -> &NodeSpec {
        &self.cells[0]
    }

    pub fn micro_cells(&self) -> &[NodeSpec] {
        &self.cells[1..]
    }
}

/// `n` points spread evenly over a disc along a golden-angle spiral.
pub fn vogel_spiral(n: usize, radius_m: f64) -> Vec<[f64; 2]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let r = radius_m * ((i as f64 + 0.5) / n as f64).sqrt();
            let th = i as f64 * golden;
            [r * th.cos(), r * th.sin()]
        })
        .collect()
}

/// Point uniform over the disc of `radius_m` around `center`.
pub fn uniform_in_disc<R: Rng + ?Sized>(rng: &mut R, center: [f64; 2], radius_m: f64) -> [f64; 2] {
    let r = radius_m * rng.random::<f64>().sqrt();
    let th = rng.random::<f64>() * std::f64::consts::TAU;
    [center[0] + r * th.cos(), center[1] + r * th.sin()]
}

/// Fraction of the macro radius inside which micro cells are placed.
pub const MICRO_PLACEMENT_FRACTION: f64 = 0.9;

/// One macro at the origin, `3 * density` micro cells (three sectors) on a
/// spiral inside the coverage disc, and `n_users` uniform users with
/// velocities drawn from [`USER_VELOCITIES_KMPH`].
pub fn build_topology(density: usize, macro_radius_m: f64, n_users: usize, seed: u64) -> Result<Topology> {
    if !(macro_radius_m > 0.0) {
        return Err(Error::arg("macro_radius_m", "must be positive"));
    }
    let n_micro = 3 * density;
    let mut cells = vec![NodeSpec::new(NodeKind::MacroEnb, [0.0, 0.0])];
    cells.extend(
        vogel_spiral(n_micro, MICRO_PLACEMENT_FRACTION * macro_radius_m)
            .into_iter()
            .map(|p| NodeSpec::new(NodeKind::MicroEnb, p)),
    );
    let mut rng = stream(seed, &[0x7090]);
    let users = (0..n_users)
        .map(|_| {
            let p = uniform_in_disc(&mut rng, [0.0, 0.0], macro_radius_m);
            let v = USER_VELOCITIES_KMPH[rng.random_range(0..USER_VELOCITIES_KMPH.len())];
            NodeSpec::ue(p, v)
        })
        .collect();
    let micro_radius_m = if n_micro == 0 {
        0.0
    } else {
        macro_radius_m / (n_micro as f64).sqrt()
    };
    Ok(Topology {
        cells,
        users,
        macro_radius_m,
        micro_radius_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_floor_anchors() {
        assert!((noise_floor(1.0, 0.0).unwrap() + 174.0).abs() < 1e-12);
        assert!((noise_floor(20e6, 5.0).unwrap() + 96.0).abs() < 0.1);
        assert!((noise_floor(10e6, 9.0).unwrap() + 95.0).abs() < 0.1);
        assert!(noise_floor(0.0, 5.0).is_err());
        assert!(noise_floor(-1.0, 5.0).is_err());
    }

    #[test]
    fn default_node_floors_at_five_mhz() {
        let floor = |k| noise_floor(5e6, NodeSpec::new(k, [0.0, 0.0]).noise_figure_db).unwrap();
        assert!((floor(NodeKind::MacroEnb) + 105.0).abs() < 0.1);
        assert!((floor(NodeKind::MicroEnb) + 102.0).abs() < 0.1);
        assert!((floor(NodeKind::Ue) + 98.0).abs() < 0.1);
    }

    #[test]
    fn cancellation_examples() {
        assert!((cancellation_required(30.0, 20e6, 9.0).unwrap() - 122.0).abs() < 0.1);
        assert!((cancellation_required(18.0, 20e6, 5.0).unwrap() - 114.0).abs() < 0.1);
        assert!((cancellation_required(30.0, 5e6, 9.0).unwrap() - 128.0).abs() < 0.1);
        let lb = LinkBudget::new(30.0, 5e6, 9.0).unwrap();
        assert_eq!(lb.required_cancellation_db, lb.tx_power_dbm - lb.noise_floor_dbm);
    }

    #[test]
    fn noise_floor_is_monotone() {
        let bws = [1e3, 1e5, 5e6, 1e7, 2e7];
        for w in bws.windows(2) {
            assert!(noise_floor(w[1], 5.0).unwrap() > noise_floor(w[0], 5.0).unwrap());
        }
        assert!(noise_floor(5e6, 9.0).unwrap() > noise_floor(5e6, 5.0).unwrap());
    }

    #[test]
    fn elevation_bonus_is_thirty_db_and_reciprocal() {
        let m = PathLossConfig::default();
        let mac = NodeSpec::new(NodeKind::MacroEnb, [0.0, 0.0]);
        let radio = NodeSpec::new(NodeKind::SmallcellUeRadio, [1000.0, 0.0]);
        let ground = NodeSpec::ue([0.0, 1000.0], 1.0);
        let up = path_gain_db(&radio, &mac, &m).unwrap();
        let down = path_gain_db(&mac, &radio, &m).unwrap();
        let g = path_gain_db(&mac, &ground, &m).unwrap();
        assert_eq!(up, down);
        assert!((up - g - 30.0).abs() < 1e-9);
        assert_eq!(g, path_gain_db(&mac, &ground, &m).unwrap());
    }

    #[test]
    fn low_radio_gets_no_bonus() {
        let m = PathLossConfig::default();
        let mac = NodeSpec::new(NodeKind::MacroEnb, [0.0, 0.0]);
        let mut radio = NodeSpec::new(NodeKind::SmallcellUeRadio, [300.0, 0.0]);
        radio.height_m = 4.0;
        let g = path_gain_db(&mac, &radio, &m).unwrap();
        assert!((g - m.gain_at(300.0)).abs() < 1e-12);
    }

    #[test]
    fn path_gain_slope() {
        let m = PathLossConfig::default();
        let a = NodeSpec::new(NodeKind::MicroEnb, [0.0, 0.0]);
        let g500 = path_gain_db(&a, &NodeSpec::ue([500.0, 0.0], 1.0), &m).unwrap();
        let g1000 = path_gain_db(&a, &NodeSpec::ue([1000.0, 0.0], 1.0), &m).unwrap();
        assert!((g500 - g1000 - 36.7 * 2f64.log10()).abs() < 1e-9);
        assert!(path_gain_db(&a, &NodeSpec::ue([0.0, 0.0], 1.0), &m).is_err());
    }

    #[test]
    fn rx_snr_is_linear_in_tx_power() {
        let m = PathLossConfig::default();
        let tx = NodeSpec::new(NodeKind::MicroEnb, [0.0, 0.0]);
        let rx = NodeSpec::ue([120.0, 50.0], 5.0);
        let h = ComplexGain::new(0.3, 0.7);
        let a = rx_snr_db(&tx, &rx, 5e6, h, &m).unwrap();
        let b = rx_snr_db(&tx.with_tx_power(25.0), &rx, 5e6, h, &m).unwrap();
        assert!((a - b - 5.0).abs() < 1e-9);
        let unit = rx_snr_db(&tx, &rx, 5e6, ComplexGain::new(1.0, 0.0), &m).unwrap();
        let ls = 30.0 + path_gain_db(&tx, &rx, &m).unwrap() - noise_floor(5e6, 9.0).unwrap();
        assert!((unit - ls).abs() < 1e-9);
        assert_eq!(rx_snr_db(&tx, &rx, 5e6, ComplexGain::new(0.0, 0.0), &m).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn full_duplex_penalty() {
        let a = noise_floor(20e6, 5.0).unwrap();
        let b = full_duplex_noise_floor(20e6, 5.0).unwrap();
        assert!((b - a - 1.7).abs() < 1e-12);
    }

    #[test]
    fn topology_shapes() {
        let t = build_topology(0, 1000.0, 10, 1).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert_eq!(t.macro_cell().kind, NodeKind::MacroEnb);
        let t = build_topology(7, 1000.0, 100, 1).unwrap();
        assert_eq!(t.micro_cells().len(), 21);
        assert!(t.micro_cells().iter().all(|c| c.kind == NodeKind::MicroEnb));
        assert!(t.users.iter().all(|u| distance(u.position, [0.0, 0.0]) <= 1000.0));
        assert!(t
            .users
            .iter()
            .all(|u| USER_VELOCITIES_KMPH.contains(&u.velocity_kmph)));
        assert_eq!(t, build_topology(7, 1000.0, 100, 1).unwrap());
        assert_ne!(t, build_topology(7, 1000.0, 100, 2).unwrap());
    }
}
