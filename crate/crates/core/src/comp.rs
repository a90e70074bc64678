//! Joint-transmission precoding on stale channel state and per-user
//! capacity under the three serving strategies.
//!
//! Channels are `users x cells` matrices of complex amplitude gains; all
//! powers (cell transmit power, receiver noise) are linear and in one common
//! unit, so only ratios matter.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{linear_to_db, ComplexGain};

/// Relative singular-value floor below which a channel is rank deficient.
const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub entries: DMatrix<ComplexGain>,
    pub timestamp_ms: f64,
}

impl ChannelMatrix {
    pub fn new(entries: DMatrix<ComplexGain>, timestamp_ms: f64) -> Result<Self> {
        if entries.iter().any(|h| !h.re.is_finite() || !h.im.is_finite()) {
            return Err(Error::arg("entries", "channel entries must be finite"));
        }
        Ok(Self { entries, timestamp_ms })
    }

    /// Row-major construction from `n_users * n_cells` gains.
    pub fn from_rows(n_users: usize, n_cells: usize, gains: &[ComplexGain]) -> Result<Self> {
        if gains.len() != n_users * n_cells {
            return Err(Error::DimensionMismatch(format!(
                "{} gains for a {n_users}x{n_cells} matrix",
                gains.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n_users, n_cells, gains), 0.0)
    }

    pub fn from_fn(n_users: usize, n_cells: usize, f: impl FnMut(usize, usize) -> ComplexGain) -> Self {
        Self {
            entries: DMatrix::from_fn(n_users, n_cells, f),
            timestamp_ms: 0.0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n, n),
            timestamp_ms: 0.0,
        }
    }

    pub fn n_users(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_cells(&self) -> usize {
        self.entries.ncols()
    }

    pub fn get(&self, user: usize, cell: usize) -> ComplexGain {
        self.entries[(user, cell)]
    }
}

/// Noise and per-cell transmit power, linear, in a shared unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseBudget {
    pub noise: f64,
    pub cell_power: Vec<f64>,
}

impl NoiseBudget {
    pub fn new(noise: f64, cell_power: Vec<f64>) -> Result<Self> {
        if !(noise > 0.0) {
            return Err(Error::arg("noise", format!("must be positive, got {noise}")));
        }
        if cell_power.iter().any(|p| !(*p > 0.0)) {
            return Err(Error::arg("cell_power", "every cell needs positive power"));
        }
        Ok(Self { noise, cell_power })
    }

    /// `n` cells at unit power with unit noise (gains then carry the SNR).
    pub fn unit(n: usize) -> Self {
        Self {
            noise: 1.0,
            cell_power: vec![1.0; n],
        }
    }

    /// Noise-to-mean-power ratio, the default regularization.
    pub fn default_regularization(&self) -> f64 {
        let mean = self.cell_power.iter().sum::<f64>() / self.cell_power.len() as f64;
        self.noise / mean
    }

    fn check(&self, h: &ChannelMatrix) -> Result<()> {
        if self.cell_power.len() != h.n_cells() {
            return Err(Error::DimensionMismatch(format!(
                "{} cell powers for {} cells",
                self.cell_power.len(),
                h.n_cells()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Precoder {
    /// `cells x users` weights; column `k` carries user `k`'s stream.
    pub matrix: DMatrix<ComplexGain>,
    /// Power each cell actually radiates, dBm-like (`10 log10` of the unit).
    pub per_cell_power_dbm: Vec<f64>,
    /// Rank-deficient input: the precoder fell back to matched filtering.
    pub fallback: bool,
}

impl Precoder {
    pub fn row_power(&self, cell: usize) -> f64 {
        self.matrix.row(cell).iter().map(|b| b.norm_sqr()).sum()
    }
}

fn rank_deficient(h: &DMatrix<ComplexGain>) -> bool {
    let sv = h.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max == 0.0 || min <= RANK_TOL * max
}

/// Regularized channel inversion `B = H^H (H H^H + a I)^-1`.
///
/// Columns are set to unit norm (equal power per user) and the whole
/// matrix is then scaled so the most loaded cell sits exactly at its
/// power limit. A rank-deficient `h_stale` falls back to matched filtering
/// `B = H^H`, the infinite-regularization limit, and sets `fallback`.
pub fn precode(h_stale: &ChannelMatrix, power_constraints: &[f64], regularization: f64) -> Result<Precoder> {
    let (k, n) = (h_stale.n_users(), h_stale.n_cells());
    if k == 0 || k > n {
        return Err(Error::DimensionMismatch(format!(
            "joint set needs 1 <= users <= cells, got {k} users on {n} cells"
        )));
    }
    if power_constraints.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} power constraints for {n} cells",
            power_constraints.len()
        )));
    }
    if !(regularization >= 0.0) {
        return Err(Error::arg("regularization", "must be non-negative"));
    }
    let h = &h_stale.entries;
    let hh = h.adjoint();
    let fallback = rank_deficient(h);
    let mut b = if fallback {
        hh
    } else {
        let gram = h * &hh + DMatrix::<ComplexGain>::identity(k, k) * ComplexGain::new(regularization, 0.0);
        match gram.try_inverse() {
            Some(inv) => hh * inv,
            None => return Err(Error::arg("h_stale", "Gram matrix is not invertible")),
        }
    };
    for mut col in b.column_iter_mut() {
        let norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            col /= ComplexGain::new(norm, 0.0);
        }
    }
    let scale = (0..n)
        .filter_map(|c| {
            let p: f64 = b.row(c).iter().map(|x| x.norm_sqr()).sum();
            (p > 0.0).then(|| power_constraints[c] / p)
        })
        .fold(f64::INFINITY, f64::min);
    if scale.is_finite() {
        b *= ComplexGain::new(scale.sqrt(), 0.0);
    }
    let per_cell_power_dbm = (0..n)
        .map(|c| linear_to_db(b.row(c).iter().map(|x| x.norm_sqr()).sum()))
        .collect();
    Ok(Precoder {
        matrix: b,
        per_cell_power_dbm,
        fallback,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    Ignore,
    Avoid,
    Comp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityRecord {
    pub user_id: usize,
    pub mode: Mode,
    pub sinr_db: f64,
    pub spectral_efficiency_bps_hz: f64,
    pub schedule_share: f64,
    pub precoder_fallback: bool,
}

impl CapacityRecord {
    pub fn new(user_id: usize, mode: Mode, sinr: f64, schedule_share: f64) -> Self {
        Self {
            user_id,
            mode,
            sinr_db: linear_to_db(sinr),
            spectral_efficiency_bps_hz: schedule_share * (1.0 + sinr).log2(),
            schedule_share,
            precoder_fallback: false,
        }
    }
}

/// Per-stream SINR from the effective channel `H B` (`users x streams`,
/// stream `k` intended for user `k`).
pub fn stream_sinrs(effective: &DMatrix<ComplexGain>, noise: f64) -> Vec<f64> {
    (0..effective.nrows())
        .map(|u| {
            let row = effective.row(u);
            let total: f64 = row.iter().map(|x| x.norm_sqr()).sum();
            let signal = if u < effective.ncols() { row[u].norm_sqr() } else { 0.0 };
            signal / (total - signal + noise)
        })
        .collect()
}

fn check_pair(h_true: &ChannelMatrix, h_stale: &ChannelMatrix) -> Result<()> {
    if h_true.entries.shape() != h_stale.entries.shape() {
        return Err(Error::DimensionMismatch(format!(
            "true channel {:?} vs stale channel {:?}",
            h_true.entries.shape(),
            h_stale.entries.shape()
        )));
    }
    Ok(())
}

/// CoMP capacity: precoder built on `h_stale`, signal delivered through
/// `h_true`.
pub fn comp_capacity(
    h_true: &ChannelMatrix,
    h_stale: &ChannelMatrix,
    budget: &NoiseBudget,
    regularization: f64,
) -> Result<Vec<CapacityRecord>> {
    check_pair(h_true, h_stale)?;
    budget.check(h_true)?;
    let p = precode(h_stale, &budget.cell_power, regularization)?;
    let effective = &h_true.entries * &p.matrix;
    Ok(stream_sinrs(&effective, budget.noise)
        .into_iter()
        .enumerate()
        .map(|(u, s)| CapacityRecord {
            precoder_fallback: p.fallback,
            ..CapacityRecord::new(u, Mode::Comp, s, 1.0)
        })
        .collect())
}

fn check_served(h: &ChannelMatrix, budget: &NoiseBudget) -> Result<()> {
    budget.check(h)?;
    if h.n_users() > h.n_cells() {
        return Err(Error::DimensionMismatch(format!(
            "user k is served by cell k; {} users on {} cells",
            h.n_users(),
            h.n_cells()
        )));
    }
    Ok(())
}

/// Every cell transmits to its own user (user `k` on cell `k`) and treats
/// the others as noise.
pub fn ignore_capacity(h_true: &ChannelMatrix, budget: &NoiseBudget) -> Result<Vec<CapacityRecord>> {
    check_served(h_true, budget)?;
    Ok((0..h_true.n_users())
        .map(|u| {
            let rx = |c: usize| h_true.get(u, c).norm_sqr() * budget.cell_power[c];
            let signal = rx(u);
            let interference: f64 = (0..h_true.n_cells()).filter(|&c| c != u).map(rx).sum();
            CapacityRecord::new(u, Mode::Ignore, signal / (interference + budget.noise), 1.0)
        })
        .collect())
}

/// Cells take turns: each of the `K` users gets its own cell alone for a
/// `1/K` share of the airtime.
pub fn avoid_capacity(h_true: &ChannelMatrix, budget: &NoiseBudget) -> Result<Vec<CapacityRecord>> {
    check_served(h_true, budget)?;
    let share = 1.0 / h_true.n_users() as f64;
    Ok((0..h_true.n_users())
        .map(|u| {
            let snr = h_true.get(u, u).norm_sqr() * budget.cell_power[u] / budget.noise;
            CapacityRecord::new(u, Mode::Avoid, snr, share)
        })
        .collect())
}

pub fn sum_spectral_efficiency(records: &[CapacityRecord]) -> f64 {
    records.iter().map(|r| r.spectral_efficiency_bps_hz).sum()
}
