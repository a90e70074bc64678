//! Slot-level model of a macro cell overlaid with small cells.
//!
//! The tiers are isolated: fast users are served by the macro on its own
//! resources, slow users by small cells on theirs. Inside the small-cell
//! tier every active cell schedules one primary-attached user per slot
//! (round robin). Cells linked through the CoMP sets of their scheduled
//! users form clusters, and each cluster jointly precodes its users on CSI
//! that is `L` ms stale. Strong interferers named by an AVOID_ASSIST user
//! are silenced for the slot unless they already cooperate with it.

use nalgebra::DMatrix;
use rand::Rng;

use crate::comp::{precode, stream_sinrs};
use crate::error::Result;
use crate::fading::{correlation_at, FadingParams};
use crate::geometry::{build_topology, noise_floor, PathLossConfig, Topology};
use crate::rng::{complex_normal, derive_seed, stream};
use crate::scheduler::{assign_shares, decide, ServingDecision, ServingMode, MACRO_CELL};
use crate::sim::config::{RadioConfig, ScalingConfig};
use crate::{db_to_linear, ComplexGain};

/// Capacity of the network at one control-plane latency, bps/Hz summed
/// over cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkCapacity {
    pub total: f64,
    /// Part delivered to users served jointly (CoMP and AVOID_ASSIST).
    pub comp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTrial {
    pub n_small_cells: usize,
    /// Macro-only network serving every user.
    pub baseline: f64,
    /// Macro plus every small cell serving its users interference-free.
    pub ideal: f64,
    /// One entry per requested latency.
    pub network: Vec<NetworkCapacity>,
    pub decisions: Vec<ServingDecision>,
}

/// Links a trial needs: linear SNRs (unit noise, unit power).
struct Links {
    macro_snr: Vec<f64>,
    /// `users x small cells`.
    micro_snr: DMatrix<f64>,
}

fn links(topo: &Topology, radio: &RadioConfig, pl: &PathLossConfig) -> Result<Links> {
    let noise = noise_floor(radio.bandwidth_hz, radio.ue_noise_figure_db)?;
    let micro = topo.micro_cells();
    let macro_cell = topo.macro_cell();
    let macro_snr = topo
        .users
        .iter()
        .map(|u| db_to_linear(radio.macro_tx_power_dbm + pl.gain_at(u.distance_to(macro_cell)) - noise))
        .collect();
    let micro_snr = DMatrix::from_fn(topo.users.len(), micro.len(), |u, c| {
        db_to_linear(radio.micro_tx_power_dbm + pl.gain_at(topo.users[u].distance_to(&micro[c])) - noise)
    });
    Ok(Links { macro_snr, micro_snr })
}

/// Mean `log2(1 + snr |h|^2)` over `samples` Rayleigh draws.
fn rayleigh_se<R: Rng + ?Sized>(rng: &mut R, snr: f64, samples: usize) -> f64 {
    (0..samples)
        .map(|_| (1.0 + snr * complex_normal(rng, 1.0).norm_sqr()).log2())
        .sum::<f64>()
        / samples as f64
}

/// Average spectral efficiency of a round-robin cell over its users.
fn round_robin_se<R: Rng + ?Sized>(rng: &mut R, snrs: impl Iterator<Item = f64>, samples: usize) -> f64 {
    let v: Vec<f64> = snrs.map(|s| rayleigh_se(rng, s, samples)).collect();
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn joint(mode: ServingMode) -> bool {
    matches!(mode, ServingMode::Comp | ServingMode::AvoidAssist)
}

/// Clusters of small cells (0-based column ids) for one slot.
///
/// `scheduled[c]` is the decision index served by cell `c` this slot.
fn clusters(scheduled: &[Option<usize>], decisions: &[ServingDecision]) -> (Vec<Vec<usize>>, Vec<bool>) {
    let n = scheduled.len();
    let link = |active: &[bool]| {
        let mut uf = UnionFind::new(n);
        for c in 0..n {
            let Some(k) = scheduled[c] else { continue };
            if !active[c] || !joint(decisions[k].mode) {
                continue;
            }
            for &s in &decisions[k].serving_cells {
                let s = s - 1;
                if active[s] && scheduled[s].is_some() {
                    uf.union(c, s);
                }
            }
        }
        uf
    };
    let scheduled_mask: Vec<bool> = scheduled.iter().map(Option::is_some).collect();
    let mut uf = link(&scheduled_mask);
    let mut active = scheduled_mask.clone();
    for (c, k) in scheduled.iter().enumerate() {
        let Some(k) = *k else { continue };
        if decisions[k].mode != ServingMode::AvoidAssist {
            continue;
        }
        for &m in &decisions[k].muted_cells {
            let m = m - 1;
            if scheduled_mask[m] && uf.find(m) != uf.find(c) {
                active[m] = false;
            }
        }
    }
    let mut uf = link(&active);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for c in (0..n).filter(|&c| active[c]) {
        let r = uf.find(c);
        if root_of[r] == usize::MAX {
            root_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_of[r]].push(c);
    }
    (groups, active)
}

/// Runs one Monte-Carlo drop of the scaling scenario.
///
/// Channel draws are shared across `latencies_ms`, so the latencies differ
/// only through staleness.
#[allow(clippy::too_many_arguments)]
pub fn scaling_trial(
    density: usize,
    latencies_ms: &[f64],
    cfg: &ScalingConfig,
    radio: &RadioConfig,
    path_loss: &PathLossConfig,
    fading: &FadingParams,
    seed: u64,
) -> Result<ScalingTrial> {
    let topo = build_topology(density, cfg.macro_radius_m, cfg.users, derive_seed(seed, &[1]))?;
    let l = links(&topo, radio, path_loss)?;
    let n_cells = topo.micro_cells().len();
    let mut rng = stream(seed, &[2]);
    let samples = cfg.subchannels * cfg.slots;

    let baseline = round_robin_se(&mut rng, l.macro_snr.iter().copied(), samples);

    let mut decisions = Vec::with_capacity(topo.users.len());
    for (u, user) in topo.users.iter().enumerate() {
        let d = if n_cells == 0 {
            ServingDecision {
                user_id: u,
                serving_cells: vec![MACRO_CELL],
                muted_cells: vec![],
                mode: ServingMode::Macro,
                airtime_share: 1.0,
            }
        } else {
            let snrs: Vec<f64> = (0..n_cells).map(|c| 10.0 * l.micro_snr[(u, c)].log10()).collect();
            decide(u, user, &snrs, cfg.threshold_db)?
        };
        decisions.push(d);
    }
    assign_shares(&mut decisions);

    let macro_users: Vec<usize> = (0..decisions.len())
        .filter(|&k| decisions[k].mode == ServingMode::Macro)
        .collect();
    let macro_se = round_robin_se(&mut rng, macro_users.iter().map(|&k| l.macro_snr[k]), samples);

    let mut attached: Vec<Vec<usize>> = vec![Vec::new(); n_cells];
    for (k, d) in decisions.iter().enumerate() {
        if d.mode != ServingMode::Macro {
            attached[d.primary_cell() - 1].push(k);
        }
    }
    let ideal = macro_se
        + (0..n_cells)
            .map(|c| round_robin_se(&mut rng, attached[c].iter().map(|&k| l.micro_snr[(k, c)]), samples))
            .sum::<f64>();

    let rho_l: Vec<Vec<f64>> = latencies_ms
        .iter()
        .map(|&lat| {
            topo.users
                .iter()
                .map(|u| correlation_at(lat, &fading.for_velocity(u.velocity_kmph, cfg.walking_kmph)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let mut total = vec![0.0; latencies_ms.len()];
    let mut comp = vec![0.0; latencies_ms.len()];
    for slot in 0..cfg.slots {
        let scheduled: Vec<Option<usize>> = (0..n_cells)
            .map(|c| {
                let a = &attached[c];
                (!a.is_empty()).then(|| a[(slot + c) % a.len()])
            })
            .collect();
        let (groups, active) = clusters(&scheduled, &decisions);
        let cells: Vec<usize> = (0..n_cells).filter(|&c| active[c]).collect();
        let users: Vec<usize> = cells.iter().map(|&c| scheduled[c].unwrap()).collect();
        if users.is_empty() {
            continue;
        }
        let col_of = |c: usize| cells.iter().position(|&x| x == c).unwrap();
        for sc in 0..cfg.subchannels {
            let mut crng = stream(seed, &[3, slot as u64, sc as u64]);
            let amp = DMatrix::from_fn(users.len(), n_cells, |i, c| l.micro_snr[(users[i], c)].sqrt());
            let h = amp.map(|a| complex_normal(&mut crng, 1.0) * a);
            let z = amp.map(|a| complex_normal(&mut crng, 1.0) * a);
            for (li, rho) in rho_l.iter().enumerate() {
                let stale = DMatrix::from_fn(users.len(), n_cells, |i, c| {
                    let r = rho[users[i]];
                    h[(i, c)] * r + z[(i, c)] * (1.0 - r * r).max(0.0).sqrt()
                });
                let mut b = DMatrix::<ComplexGain>::zeros(n_cells, users.len());
                for g in &groups {
                    let rows: Vec<usize> = g.iter().map(|&c| col_of(c)).collect();
                    let sub = DMatrix::from_fn(rows.len(), g.len(), |i, j| stale[(rows[i], g[j])]);
                    let p = precode(
                        &crate::comp::ChannelMatrix::new(sub, 0.0)?,
                        &vec![1.0; g.len()],
                        1.0,
                    )?;
                    for (j, &c) in g.iter().enumerate() {
                        for (i, &r) in rows.iter().enumerate() {
                            b[(c, r)] = p.matrix[(j, i)];
                        }
                    }
                }
                let sinr = stream_sinrs(&(&h * &b), 1.0);
                for (i, s) in sinr.iter().enumerate() {
                    let se = (1.0 + s).log2();
                    total[li] += se;
                    if joint(decisions[users[i]].mode) {
                        comp[li] += se;
                    }
                }
            }
        }
    }
    let norm = samples as f64;
    let network = total
        .iter()
        .zip(&comp)
        .map(|(t, c)| NetworkCapacity {
            total: macro_se + t / norm,
            comp: c / norm,
        })
        .collect();
    Ok(ScalingTrial {
        n_small_cells: n_cells,
        baseline,
        ideal,
        network,
        decisions,
    })
}
