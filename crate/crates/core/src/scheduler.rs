//! Association and serving-mode policy.
//!
//! Cell ids follow the topology convention: the macro is cell 0 and the small
//! cells are `1..=n`, so `small_cell_snrs[i]` belongs to cell `i + 1`.
//! Fast users go to the macro. Slow users are ranked over small cells by
//! large-scale SNR and served according to the first dominance gap of at
//! least `threshold_db` in the sorted list:
//!
//! - top1 - top2: IGNORE on the strongest cell,
//! - top2 - top3: CoMP over the two strongest,
//! - top3 - top4: CoMP over the three strongest,
//! - otherwise AVOID_ASSIST: the three strongest serve jointly and the rest
//!   of the strong set stays silent.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::NodeSpec;

pub const MACRO_CELL: usize = 0;
pub const DEFAULT_THRESHOLD_DB: f64 = 15.0;
pub const MACRO_VELOCITY_KMPH: f64 = 30.0;

/// Minimum size of the strong set an AVOID_ASSIST user contends with.
const MIN_STRONG_SET: usize = 4;
const MAX_COMP_SET: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ServingMode {
    Macro,
    Ignore,
    Comp,
    AvoidAssist,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServingDecision {
    pub user_id: usize,
    /// Strongest first.
    pub serving_cells: Vec<usize>,
    /// Strong interferers silenced while this user is served.
    pub muted_cells: Vec<usize>,
    pub mode: ServingMode,
    pub airtime_share: f64,
}

impl ServingDecision {
    pub fn primary_cell(&self) -> usize {
        self.serving_cells[0]
    }
}

/// Maps a user to its serving mode.
///
/// Equal SNRs rank by lower cell id, and a gap exactly equal to
/// `threshold_db` counts as dominant.
pub fn decide(user_id: usize, user: &NodeSpec, small_cell_snrs: &[f64], threshold_db: f64) -> Result<ServingDecision> {
    if small_cell_snrs.is_empty() {
        return Err(Error::arg("small_cell_snrs", "need at least one cell"));
    }
    if !(threshold_db > 0.0) {
        return Err(Error::arg("threshold_db", "must be positive"));
    }
    if small_cell_snrs.iter().any(|s| s.is_nan()) {
        return Err(Error::arg("small_cell_snrs", "NaN SNR"));
    }
    let decision = |mode, serving_cells, muted_cells| ServingDecision {
        user_id,
        serving_cells,
        muted_cells,
        mode,
        airtime_share: 1.0,
    };
    if user.velocity_kmph >= MACRO_VELOCITY_KMPH {
        return Ok(decision(ServingMode::Macro, vec![MACRO_CELL], vec![]));
    }
    let mut order: Vec<usize> = (0..small_cell_snrs.len()).collect();
    order.sort_by(|&a, &b| small_cell_snrs[b].total_cmp(&small_cell_snrs[a]).then(a.cmp(&b)));
    let snr = |rank: usize| order.get(rank).map_or(f64::NEG_INFINITY, |&i| small_cell_snrs[i]);
    let ids = |ranks: std::ops::Range<usize>| -> Vec<usize> { order[ranks].iter().map(|i| i + 1).collect() };
    let dominant = |rank: usize| snr(rank) - snr(rank + 1) >= threshold_db;
    if dominant(0) {
        return Ok(decision(ServingMode::Ignore, ids(0..1), vec![]));
    }
    if dominant(1) {
        return Ok(decision(ServingMode::Comp, ids(0..2), vec![]));
    }
    if dominant(2) {
        return Ok(decision(ServingMode::Comp, ids(0..3), vec![]));
    }
    let within = order
        .iter()
        .take_while(|&&i| small_cell_snrs[i] >= snr(0) - threshold_db)
        .count();
    let strong = within.max(MIN_STRONG_SET).min(order.len());
    Ok(decision(
        ServingMode::AvoidAssist,
        ids(0..MAX_COMP_SET),
        ids(MAX_COMP_SET..strong),
    ))
}

/// Round-robin airtime: a cell with `m` attached users gives each `1/m`.
/// A user attached to several cells gets the smallest of those shares, so
/// no cell is over-committed.
pub fn round_robin(decisions: &[ServingDecision]) -> Vec<f64> {
    let load = attachment_counts(decisions);
    decisions
        .iter()
        .map(|d| {
            d.serving_cells
                .iter()
                .map(|c| 1.0 / load[c] as f64)
                .fold(1.0, f64::min)
        })
        .collect()
}

/// Applies [`round_robin`] in place.
pub fn assign_shares(decisions: &mut [ServingDecision]) {
    let shares = round_robin(decisions);
    for (d, s) in decisions.iter_mut().zip(shares) {
        d.airtime_share = s;
    }
}

fn attachment_counts(decisions: &[ServingDecision]) -> BTreeMap<usize, usize> {
    let mut load = BTreeMap::new();
    for d in decisions {
        for &c in &d.serving_cells {
            *load.entry(c).or_insert(0) += 1;
        }
    }
    load
}

/// Total airtime committed on each cell.
pub fn cell_airtime(decisions: &[ServingDecision]) -> BTreeMap<usize, f64> {
    let mut sum = BTreeMap::new();
    for d in decisions {
        for &c in &d.serving_cells {
            *sum.entry(c).or_insert(0.0) += d.airtime_share;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slow() -> NodeSpec {
        NodeSpec::ue([0.0, 0.0], 1.0)
    }

    fn mode_of(snrs: &[f64]) -> (ServingMode, Vec<usize>, Vec<usize>) {
        let d = decide(0, &slow(), snrs, 15.0).unwrap();
        (d.mode, d.serving_cells, d.muted_cells)
    }

    #[test]
    fn fast_users_go_to_the_macro() {
        let d = decide(3, &NodeSpec::ue([0.0, 0.0], 30.0), &[40.0, 0.0], 15.0).unwrap();
        assert_eq!(d.mode, ServingMode::Macro);
        assert_eq!(d.serving_cells, vec![MACRO_CELL]);
        assert_eq!(d.user_id, 3);
    }

    #[test]
    fn gap_rules() {
        assert_eq!(mode_of(&[30.0, 10.0, 5.0]), (ServingMode::Ignore, vec![1], vec![]));
        assert_eq!(mode_of(&[30.0, 28.0, 5.0]), (ServingMode::Comp, vec![1, 2], vec![]));
        assert_eq!(mode_of(&[5.0, 28.0, 30.0]), (ServingMode::Comp, vec![3, 2], vec![]));
        assert_eq!(mode_of(&[30.0, 28.0, 26.0, 0.0]), (ServingMode::Comp, vec![1, 2, 3], vec![]));
        assert_eq!(mode_of(&[30.0]), (ServingMode::Ignore, vec![1], vec![]));
        assert_eq!(mode_of(&[30.0, 29.0]).0, ServingMode::Comp);
    }

    #[test]
    fn avoid_assist_mutes_the_rest_of_the_strong_set() {
        let (m, s, mu) = mode_of(&[30.0, 29.0, 28.0, 27.0, 26.0, 0.0]);
        assert_eq!(m, ServingMode::AvoidAssist);
        assert_eq!(s, vec![1, 2, 3]);
        assert_eq!(mu, vec![4, 5]);
        // strong set never smaller than four
        let (_, _, mu) = mode_of(&[30.0, 29.0, 28.0, 14.0, 10.0]);
        assert_eq!(mu, vec![4]);
    }

    #[test]
    fn exact_threshold_is_dominant() {
        assert_eq!(mode_of(&[30.0, 15.0]).0, ServingMode::Ignore);
        assert_eq!(mode_of(&[30.0, 15.000001]).0, ServingMode::Comp);
    }

    #[test]
    fn ties_rank_by_cell_id() {
        assert_eq!(mode_of(&[20.0, 20.0, 0.0]).1, vec![1, 2]);
        assert_eq!(mode_of(&[0.0, 20.0, 20.0]).1, vec![2, 3]);
    }

    #[test]
    fn rejects_empty_and_bad_threshold() {
        assert!(decide(0, &slow(), &[], 15.0).is_err());
        assert!(decide(0, &slow(), &[1.0], 0.0).is_err());
        assert!(decide(0, &slow(), &[f64::NAN], 15.0).is_err());
    }

    fn dec(user_id: usize, cells: &[usize]) -> ServingDecision {
        ServingDecision {
            user_id,
            serving_cells: cells.to_vec(),
            muted_cells: vec![],
            mode: if cells.len() > 1 { ServingMode::Comp } else { ServingMode::Ignore },
            airtime_share: 1.0,
        }
    }

    #[test]
    fn round_robin_examples() {
        assert_eq!(round_robin(&[dec(0, &[1])]), vec![1.0]);
        let four: Vec<_> = (0..4).map(|u| dec(u, &[2])).collect();
        assert_eq!(round_robin(&four), vec![0.25; 4]);
        let mut mixed = vec![dec(0, &[1, 2]), dec(1, &[1]), dec(2, &[2])];
        assign_shares(&mut mixed);
        assert_eq!(mixed.iter().map(|d| d.airtime_share).collect::<Vec<_>>(), vec![0.5; 3]);
        for (_, load) in cell_airtime(&mixed) {
            assert!((load - 1.0).abs() < 1e-12);
        }
    }
}
