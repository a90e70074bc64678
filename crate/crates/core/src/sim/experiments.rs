//! The Monte-Carlo experiments. Each returns its records plus the outcome of
//! the invariants it asserts on itself.
//!
//! Trials run in parallel; every trial draws from its own seeded stream and
//! results are reduced in trial order, so output does not depend on the
//! thread count.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::comp::{avoid_capacity, comp_capacity, ignore_capacity, ChannelMatrix, NoiseBudget};
use crate::controlplane::{timeline, total_coordination_latency, Variant, Waiting};
use crate::csicodec::{macro_overhead, rate_report, uncompressed_kbps_per_rb, RB_SUBCHANNELS};
use crate::error::Result;
use crate::fading::{correlation_at, evolve_with, generate_process, FadingParams};
use crate::geometry::{
    cancellation_required, distance, full_duplex_noise_floor, noise_floor, uniform_in_disc, vogel_spiral,
    PathLossConfig,
};
use crate::rng::{complex_normal, derive_seed, stream, SimRng};
use crate::scheduler::{ServingDecision, ServingMode};
use crate::sim::config::{RadioConfig, ScenarioConfig};
use crate::sim::network::{scaling_trial, ScalingTrial};
use crate::sim::record::{Check, SweepRecord, Summary};
use crate::{db_to_linear, ComplexGain};

const DENSITY: u64 = 1;
const DISTANCE: u64 = 2;
const SCALING: u64 = 3;
const CODEC: u64 = 5;

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub name: &'static str,
    pub records: Vec<SweepRecord>,
    pub checks: Vec<Check>,
    /// Extra JSON documents keyed by file stem.
    pub artifacts: Vec<(String, serde_json::Value)>,
}

impl ExperimentOutput {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            records: Vec::new(),
            checks: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// First record matching the predicate.
    pub fn find(&self, f: impl Fn(&SweepRecord) -> bool) -> Option<&SweepRecord> {
        self.records.iter().find(|r| f(r))
    }

    fn rec(&self, metric: &str) -> SweepRecord {
        SweepRecord::new(self.name, metric, 0.0)
    }
}

pub const EXPERIMENTS: [&str; 6] = ["density", "distance", "scaling", "comp-gain", "codec", "budget"];

pub fn run_experiment(name: &str, cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    match name {
        "density" => run_density_sweep(cfg),
        "distance" => run_distance_sweep(cfg),
        "scaling" => run_scaling_experiment(cfg),
        "comp-gain" => run_comp_gain_experiment(cfg),
        "codec" => run_codec_bench(cfg),
        "budget" => emit_budget_tables(cfg),
        other => Err(crate::Error::Config(format!("unknown experiment `{other}`"))),
    }
}

fn ue_noise_dbm(radio: &RadioConfig) -> Result<f64> {
    noise_floor(radio.bandwidth_hz, radio.ue_noise_figure_db)
}

/// Linear SNR gains (unit noise, unit cell power) of small-cell links.
fn micro_gains(users: &[[f64; 2]], cells: &[[f64; 2]], radio: &RadioConfig, pl: &PathLossConfig) -> Result<DMatrix<f64>> {
    let noise = ue_noise_dbm(radio)?;
    Ok(DMatrix::from_fn(users.len(), cells.len(), |u, c| {
        db_to_linear(radio.micro_tx_power_dbm + pl.gain_at(distance(users[u], cells[c])) - noise)
    }))
}

fn draw(rng: &mut SimRng, gains: &DMatrix<f64>, sigma_h_sq: f64) -> DMatrix<ComplexGain> {
    gains.map(|g| complex_normal(rng, g * sigma_h_sq))
}

/// Stale copies of `h` at each latency, chained so that every latency is an
/// extra step of the same process (the process is time-reversible).
fn stale_chain(
    rng: &mut SimRng,
    h: &DMatrix<ComplexGain>,
    gains: &DMatrix<f64>,
    latencies_ms: &[f64],
    fading: &FadingParams,
) -> Result<Vec<DMatrix<ComplexGain>>> {
    let mut out = Vec::with_capacity(latencies_ms.len());
    let mut cur = h.clone();
    let mut prev = 0.0;
    for &lat in latencies_ms {
        let step = correlation_at(lat - prev, fading)?;
        cur = DMatrix::from_fn(h.nrows(), h.ncols(), |i, j| {
            evolve_with(cur[(i, j)], step, gains[(i, j)] * fading.sigma_h_sq, rng)
        });
        out.push(cur.clone());
        prev = lat;
    }
    Ok(out)
}

fn mean_se(records: &[crate::comp::CapacityRecord]) -> f64 {
    records.iter().map(|r| r.spectral_efficiency_bps_hz).sum::<f64>() / records.len() as f64
}

fn sum_se(records: &[crate::comp::CapacityRecord]) -> f64 {
    records.iter().map(|r| r.spectral_efficiency_bps_hz).sum()
}

fn column(trials: &[Vec<f64>], i: usize) -> Vec<f64> {
    trials.iter().map(|t| t[i]).collect()
}

fn nearest(xs: &[f64], target: f64) -> usize {
    (0..xs.len())
        .min_by(|&a, &b| (xs[a] - target).abs().total_cmp(&(xs[b] - target).abs()))
        .expect("non-empty axis")
}

/// Network-wide CoMP capacity versus cell count, one curve per latency.
pub fn run_density_sweep(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let d = &cfg.density;
    let mut out = ExperimentOutput::new("density");
    let lats = &d.latencies_ms;
    let mut per_point = Vec::new();
    for (pi, &r) in d.cell_radii_m.iter().enumerate() {
        let n = ((d.region_radius_m / r).powi(2).round() as usize).max(1);
        let cells = vogel_spiral(n, d.region_radius_m);
        let budget = NoiseBudget::unit(n);
        let reg = budget.default_regularization();
        let trials: Vec<Vec<f64>> = (0..d.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream(cfg.seed, &[DENSITY, pi as u64, t as u64]);
                let users: Vec<[f64; 2]> = cells.iter().map(|&c| uniform_in_disc(&mut rng, c, r)).collect();
                let gains = micro_gains(&users, &cells, &cfg.radio, &cfg.path_loss)?;
                let mut acc = vec![0.0; lats.len()];
                for _ in 0..d.subchannels {
                    let h = draw(&mut rng, &gains, cfg.fading.sigma_h_sq);
                    let truth = ChannelMatrix::new(h.clone(), 0.0)?;
                    for (li, s) in stale_chain(&mut rng, &h, &gains, lats, &cfg.fading)?.into_iter().enumerate() {
                        let stale = ChannelMatrix::new(s, lats[li])?;
                        acc[li] += sum_se(&comp_capacity(&truth, &stale, &budget, reg)?);
                    }
                }
                Ok(acc.into_iter().map(|x| x / d.subchannels as f64).collect())
            })
            .collect::<Result<_>>()?;
        let base = Summary::of(&column(&trials, 0));
        let mut means = Vec::new();
        for (li, &lat) in lats.iter().enumerate() {
            let col = column(&trials, li);
            let s = Summary::of(&col);
            means.push(s.mean);
            out.records.push(out.rec("comp_capacity_bps_hz").latency(lat).cells(n).stats(s));
            out.records
                .push(out.rec("comp_capacity_per_cell_bps_hz").latency(lat).cells(n).stats(s.scaled(n as f64)));
            let diff: Vec<f64> = trials.iter().map(|t| t[0] - t[li]).collect();
            let drop = Summary::of(&diff).scaled(base.mean);
            out.records.push(out.rec("capacity_drop").latency(lat).cells(n).stats(drop));
        }
        per_point.push((n, means));
    }

    let dominance = per_point.iter().all(|(_, m)| m.iter().skip(1).all(|x| *x <= m[0]));
    out.checks.push(Check::new(
        "density.lowest_latency_dominates",
        dominance,
        "mean capacity at the lowest latency is at least that of every higher latency at every cell count",
    ));
    let (n_max, dense) = per_point.iter().max_by_key(|(n, _)| *n).unwrap().clone();
    let drops: Vec<f64> = dense.iter().map(|m| 1.0 - m / dense[0]).collect();
    out.checks.push(Check::new(
        "density.drop_monotone",
        drops.windows(2).all(|w| w[1] >= w[0]),
        format!("drops at {n_max} cells: {drops:.3?}"),
    ));
    if let Some(i10) = lats.iter().position(|&l| (l - 10.0).abs() < 1e-9) {
        let drop = drops[i10];
        out.checks.push(Check::new(
            "density.drop_at_10ms",
            (0.25..=0.55).contains(&drop),
            format!("drop at 10 ms vs {} ms with {n_max} cells: {drop:.3} (band 0.25..0.55)", lats[0]),
        ));
    }
    if let Some((_, m)) = per_point.iter().find(|(n, _)| *n == 1) {
        out.checks.push(Check::new(
            "density.single_cell_latency_invariant",
            m.iter().all(|x| *x == m[0]),
            "one cell needs no coordination",
        ));
    }
    Ok(out)
}

/// Three-cell cluster: IGNORE, AVOID and CoMP at several latencies as users
/// move from their cell toward the common edge.
pub fn run_distance_sweep(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let d = &cfg.distance;
    let mut out = ExperimentOutput::new("distance");
    let lats = &d.latencies_ms;
    let cells: Vec<[f64; 2]> = [90.0f64, 210.0, 330.0]
        .iter()
        .map(|a| {
            let a = a.to_radians();
            [d.cell_distance_m * a.cos(), d.cell_distance_m * a.sin()]
        })
        .collect();
    let budget = NoiseBudget::unit(3);
    let reg = budget.default_regularization();
    // per fraction: (ignore, avoid, comp per latency) means
    let mut points = Vec::new();
    for (fi, &f) in d.fractions.iter().enumerate() {
        let users: Vec<[f64; 2]> = cells.iter().map(|c| [c[0] * (1.0 - f), c[1] * (1.0 - f)]).collect();
        let gains = micro_gains(&users, &cells, &cfg.radio, &cfg.path_loss)?;
        let trials: Vec<Vec<f64>> = (0..d.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream(cfg.seed, &[DISTANCE, fi as u64, t as u64]);
                let mut acc = vec![0.0; 2 + lats.len()];
                for _ in 0..d.subchannels {
                    let h = draw(&mut rng, &gains, cfg.fading.sigma_h_sq);
                    let truth = ChannelMatrix::new(h.clone(), 0.0)?;
                    acc[0] += mean_se(&ignore_capacity(&truth, &budget)?);
                    acc[1] += mean_se(&avoid_capacity(&truth, &budget)?);
                    for (li, s) in stale_chain(&mut rng, &h, &gains, lats, &cfg.fading)?.into_iter().enumerate() {
                        let stale = ChannelMatrix::new(s, lats[li])?;
                        acc[2 + li] += mean_se(&comp_capacity(&truth, &stale, &budget, reg)?);
                    }
                }
                Ok(acc.into_iter().map(|x| x / d.subchannels as f64).collect())
            })
            .collect::<Result<_>>()?;
        let dist = f * d.cell_distance_m;
        let ign = Summary::of(&column(&trials, 0));
        let avo = Summary::of(&column(&trials, 1));
        out.records.push(out.rec("ignore_bps_hz").distance(dist).stats(ign));
        out.records.push(out.rec("avoid_bps_hz").distance(dist).stats(avo));
        out.records.push(out.rec("ignore_over_avoid").distance(dist).stats(ign.scaled(avo.mean)));
        out.records.push(out.rec("avoid_over_avoid").distance(dist).stats(avo.scaled(avo.mean)));
        let mut comp = Vec::new();
        for (li, &lat) in lats.iter().enumerate() {
            let s = Summary::of(&column(&trials, 2 + li));
            comp.push(s.mean);
            out.records.push(out.rec("comp_bps_hz").latency(lat).distance(dist).stats(s));
            out.records
                .push(out.rec("comp_over_avoid").latency(lat).distance(dist).stats(s.scaled(avo.mean)));
        }
        points.push((f, ign.mean, avo.mean, comp));
    }

    let by_f = |pick: fn(f64, f64) -> bool| {
        points
            .iter()
            .fold(None::<&(f64, f64, f64, Vec<f64>)>, |best, p| match best {
                Some(b) if !pick(p.0, b.0) => Some(b),
                _ => Some(p),
            })
            .unwrap()
    };
    let edge = by_f(|a, b| a > b);
    let core = by_f(|a, b| a < b);
    let (i2, i21) = (nearest(lats, 2.0), nearest(lats, 21.0));
    let (_, eign, eavo, ecomp) = edge;
    out.checks.push(Check::new(
        "distance.edge_ordering",
        ecomp[i2] > *eavo && *eavo > ecomp[i21],
        format!(
            "edge: CoMP({} ms) {:.3} > AVOID {:.3} > CoMP({} ms) {:.3}",
            lats[i2], ecomp[i2], eavo, lats[i21], ecomp[i21]
        ),
    ));
    out.checks.push(Check::new(
        "distance.edge_lowest_latency_dominates",
        ecomp[0] > *eavo && ecomp[0] > *eign,
        format!("edge: CoMP({} ms) {:.3} vs AVOID {:.3}, IGNORE {:.3}", lats[0], ecomp[0], eavo, eign),
    ));
    let (_, cign, _, ccomp) = core;
    let best = ccomp.iter().cloned().fold(f64::MIN, f64::max);
    let gap = (cign - best).abs() / best;
    out.checks.push(Check::new(
        "distance.core_ignore_close_to_comp",
        gap <= 0.10,
        format!("core: |IGNORE - best CoMP| / best CoMP = {gap:.3} (limit 0.10)"),
    ));
    let monotone = points.iter().all(|p| p.3.windows(2).all(|w| w[1] <= w[0]));
    out.checks.push(Check::new(
        "distance.comp_monotone_in_latency",
        monotone,
        "mean CoMP capacity never rises with latency",
    ));
    Ok(out)
}

fn scaling_latencies(cfg: &ScenarioConfig) -> [f64; 2] {
    [
        total_coordination_latency(&cfg.control_plane.model(Variant::Swiftc)),
        total_coordination_latency(&cfg.control_plane.model(Variant::X2Ip)),
    ]
}

fn scaling_trials(cfg: &ScenarioConfig, density: usize, trials: usize) -> Result<Vec<ScalingTrial>> {
    let lats = scaling_latencies(cfg);
    (0..trials)
        .into_par_iter()
        .map(|t| {
            scaling_trial(
                density,
                &lats,
                &cfg.scaling,
                &cfg.radio,
                &cfg.path_loss,
                &cfg.fading,
                derive_seed(cfg.seed, &[SCALING, density as u64, t as u64]),
            )
        })
        .collect()
}

#[derive(Serialize)]
struct DecisionDump<'a> {
    density: usize,
    n_small_cells: usize,
    decisions: &'a [ServingDecision],
}

/// Network capacity normalized by a macro-only network: interference-free
/// ideal, in-band control plane and X2 over IP.
pub fn run_scaling_experiment(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let s = &cfg.scaling;
    let mut out = ExperimentOutput::new("scaling");
    let [l_s, l_x] = scaling_latencies(cfg);
    let mut means = Vec::new();
    let mut dumps = Vec::new();
    for &density in &s.densities {
        let trials = scaling_trials(cfg, density, s.trials)?;
        let n = trials[0].n_small_cells;
        let norm = |f: fn(&ScalingTrial) -> f64| -> Summary {
            Summary::of(&trials.iter().map(|t| f(t) / t.baseline).collect::<Vec<_>>())
        };
        let ideal = norm(|t| t.ideal);
        let sw = norm(|t| t.network[0].total);
        let x2 = norm(|t| t.network[1].total);
        out.records.push(out.rec("normalized_capacity").scenario("ideal").cells(n).stats(ideal));
        out.records
            .push(out.rec("normalized_capacity").scenario("swiftc").latency(l_s).cells(n).stats(sw));
        out.records
            .push(out.rec("normalized_capacity").scenario("x2_ip").latency(l_x).cells(n).stats(x2));
        let base = Summary::of(&trials.iter().map(|t| t.baseline).collect::<Vec<_>>());
        out.records.push(out.rec("baseline_bps_hz").scenario("macro_only").cells(n).stats(base));
        for mode in [ServingMode::Macro, ServingMode::Ignore, ServingMode::Comp, ServingMode::AvoidAssist] {
            let counts: Vec<f64> = trials
                .iter()
                .map(|t| t.decisions.iter().filter(|d| d.mode == mode).count() as f64)
                .collect();
            let label = serde_json::to_value(mode)?.as_str().unwrap_or_default().to_lowercase();
            out.records
                .push(out.rec("users_in_mode").scenario(label).cells(n).stats(Summary::of(&counts)));
        }
        means.push((n, ideal.mean, sw.mean, x2.mean));
        dumps.push(serde_json::to_value(DecisionDump {
            density,
            n_small_cells: n,
            decisions: &trials[0].decisions,
        })?);
    }
    let ordered = means.iter().all(|&(_, i, s, x)| i >= s && s >= x);
    out.checks.push(Check::new(
        "scaling.ideal_swiftc_x2_ordering",
        ordered,
        format!("(cells, ideal, swiftc, x2): {means:.2?}"),
    ));
    let &(n, _, sw, x2) = means.iter().max_by_key(|m| m.0).unwrap();
    out.checks.push(Check::new(
        "scaling.swiftc_over_x2",
        sw / x2 >= 1.3,
        format!("SwiftC / X2 at {n} small cells = {:.3} (min 1.3)", sw / x2),
    ));
    out.artifacts.push(("scaling_decisions".into(), serde_json::Value::Array(dumps)));
    out.artifacts.push(("timelines".into(), timelines_json(cfg)?));
    Ok(out)
}

/// Coordination timelines for both control planes.
pub fn timelines_json(cfg: &ScenarioConfig) -> Result<serde_json::Value> {
    let cp = &cfg.control_plane;
    let mut swiftc_best = cp.model(Variant::Swiftc);
    swiftc_best.waiting = Waiting::BestCase;
    let mut swiftc_avg = swiftc_best;
    swiftc_avg.waiting = Waiting::Average;
    let x2 = cp.model(Variant::X2Ip);
    Ok(serde_json::to_value([timeline(&swiftc_best), timeline(&swiftc_avg), timeline(&x2)])?)
}

/// Capacity delivered through joint transmission, SwiftC versus X2.
pub fn run_comp_gain_experiment(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let c = &cfg.comp_gain;
    let mut out = ExperimentOutput::new("comp-gain");
    let [l_s, l_x] = scaling_latencies(cfg);
    let mut rows = Vec::new();
    for &density in &c.densities {
        let trials = scaling_trials(cfg, density, c.trials)?;
        let n = trials[0].n_small_cells;
        let sw = Summary::of(&trials.iter().map(|t| t.network[0].comp / t.baseline).collect::<Vec<_>>());
        let x2 = Summary::of(&trials.iter().map(|t| t.network[1].comp / t.baseline).collect::<Vec<_>>());
        rows.push((n, sw, x2));
    }
    let peak = rows
        .iter()
        .flat_map(|(_, s, x)| [s.mean, x.mean])
        .fold(f64::MIN, f64::max);
    let mut adv = Vec::new();
    for (n, sw, x2) in &rows {
        out.records
            .push(out.rec("comp_capacity_normalized").scenario("swiftc").latency(l_s).cells(*n).stats(*sw));
        out.records
            .push(out.rec("comp_capacity_normalized").scenario("x2_ip").latency(l_x).cells(*n).stats(*x2));
        out.records.push(
            out.rec("comp_capacity_pct_of_max")
                .scenario("swiftc")
                .latency(l_s)
                .cells(*n)
                .stats(sw.scaled(peak / 100.0)),
        );
        out.records.push(
            out.rec("comp_capacity_pct_of_max")
                .scenario("x2_ip")
                .latency(l_x)
                .cells(*n)
                .stats(x2.scaled(peak / 100.0)),
        );
        let a = sw.mean / x2.mean - 1.0;
        adv.push(a);
        let mut r = out.rec("swiftc_advantage").scenario("swiftc_vs_x2_ip").cells(*n);
        r.value = a;
        r.trials = sw.n;
        out.records.push(r);
    }
    out.checks.push(Check::new(
        "comp_gain.advantage_grows_with_density",
        adv.windows(2).all(|w| w[1] >= w[0]),
        format!("SwiftC advantage by density: {adv:.3?}"),
    ));
    out.checks.push(Check::new(
        "comp_gain.swiftc_ahead",
        adv.iter().all(|a| *a > 0.0),
        "SwiftC delivers more joint-transmission capacity than X2 at every density",
    ));
    Ok(out)
}

/// CSI rates before and after compression, increment statistics and the
/// macro-side cost of carrying the control traffic.
pub fn run_codec_bench(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let b = &cfg.codec_bench;
    let mut out = ExperimentOutput::new("codec");
    let quant = cfg.codec.anchored_at(cfg.fading.sigma_h_sq);
    let reports = (0..b.trials)
        .into_par_iter()
        .map(|t| {
            let g = generate_process(
                cfg.fading,
                b.subframes,
                b.measured_rbs * RB_SUBCHANNELS,
                derive_seed(cfg.seed, &[CODEC, t as u64]),
            )?;
            rate_report(&g, b.system_rbs, b.neighbors, b.coordination_fraction, &quant)
        })
        .collect::<Result<Vec<_>>>()?;
    let stat = |f: &dyn Fn(&crate::csicodec::RateReport) -> f64| {
        Summary::of(&reports.iter().map(f).collect::<Vec<_>>())
    };
    let unc = uncompressed_kbps_per_rb(quant.q);
    let mut r = out.rec("kbps_per_rb").scenario("uncompressed");
    r.value = unc;
    out.records.push(r);
    let compressed = stat(&|r| r.kbps_per_rb_compressed);
    out.records.push(out.rec("kbps_per_rb").scenario("compressed").stats(compressed));
    out.records.push(out.rec("kbps_per_rb").scenario("effective").stats(stat(&|r| r.effective_kbps_per_rb)));
    out.records.push(out.rec("total_mbps").scenario("effective").stats(stat(&|r| r.total_mbps)));
    let mut r = out.rec("total_mbps").scenario("uncompressed");
    r.value = unc * b.system_rbs as f64 / 1000.0;
    out.records.push(r);
    out.records.push(out.rec("bits_per_subframe").scenario("cqi").stats(stat(&|r| r.cqi_bits_per_subframe)));
    out.records.push(out.rec("bits_per_subframe").scenario("cpi").stats(stat(&|r| r.cpi_bits_per_subframe)));
    out.records.push(out.rec("rb_distortion_ratio").stats(stat(&|r| r.rb_distortion_ratio)));
    let freq_same = stat(&|r| (r.cqi_freq_stats.p_same() + r.cpi_freq_stats.p_same()) / 2.0);
    let freq_step = stat(&|r| (r.cqi_freq_stats.p_step() + r.cpi_freq_stats.p_step()) / 2.0);
    for (axis, field, f) in [
        ("freq", "cqi", (|r: &crate::csicodec::RateReport| r.cqi_freq_stats) as fn(&_) -> _),
        ("freq", "cpi", |r| r.cpi_freq_stats),
        ("time", "cqi", |r| r.cqi_time_stats),
        ("time", "cpi", |r| r.cpi_time_stats),
    ] {
        let sc = format!("{axis}_{field}");
        out.records.push(out.rec("p_same").scenario(&sc).stats(stat(&|r| f(r).p_same())));
        out.records.push(out.rec("p_step").scenario(&sc).stats(stat(&|r| f(r).p_step())));
        out.records.push(out.rec("p_refresh").scenario(&sc).stats(stat(&|r| f(r).p_refresh())));
    }
    let mut overheads = Vec::new();
    for &rate in &b.swiftc_rates_kbps {
        for (label, ratio) in [("core", b.se_ratio_core), ("edge", b.se_ratio_edge)] {
            let denied = macro_overhead(rate, 1.0, ratio)?;
            let mut r = out.rec("macro_overhead_kbps").scenario(format!("{label}_{rate}kbps"));
            r.value = denied;
            out.records.push(r);
            overheads.push((label, rate, denied));
        }
    }

    out.checks.push(Check::new(
        "codec.uncompressed_rate",
        unc == 12.0 * 2.0 * quant.q as f64,
        format!("{unc} kbps/RB"),
    ));
    out.checks.push(Check::new(
        "codec.compressed_below_uncompressed",
        reports.iter().all(|r| r.kbps_per_rb_compressed <= r.kbps_per_rb_uncompressed),
        format!("mean compressed {:.2} kbps/RB", compressed.mean),
    ));
    out.checks.push(Check::new(
        "codec.adjacent_subchannel_statistics",
        (freq_same.mean - 0.73).abs() <= 0.05 && (freq_step.mean - 0.245).abs() <= 0.05,
        format!("P(same) {:.3}, P(+-1) {:.3}", freq_same.mean, freq_step.mean),
    ));
    let distortion = stat(&|r| r.rb_distortion_ratio);
    out.checks.push(Check::new(
        "codec.rb_distortion",
        distortion.mean <= 0.05,
        format!("RB averaging distortion {:.4} of sigma_h^2", distortion.mean),
    ));
    Ok(out)
}

/// Receiver noise floors and self-interference cancellation requirements.
pub fn emit_budget_tables(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let b = &cfg.budget;
    let mut out = ExperimentOutput::new("budget");
    let mut consistent = true;
    for &bw in &b.bandwidths_hz {
        let mhz = format!("{}mhz", bw / 1e6);
        for (radio, nf) in [("enb", b.enb_noise_figure_db), ("ue", b.ue_noise_figure_db)] {
            let floor = noise_floor(bw, nf)?;
            let fd = full_duplex_noise_floor(bw, nf)?;
            consistent &= ((fd - floor) - crate::geometry::FD_PENALTY_DB).abs() < 1e-9;
            let mut r = out.rec("noise_floor_dbm").scenario(format!("{radio}_{mhz}"));
            r.value = floor;
            out.records.push(r);
            let mut r = out.rec("noise_floor_fd_dbm").scenario(format!("{radio}_{mhz}"));
            r.value = fd;
            out.records.push(r);
        }
        // uplink: small-cell UE transmits, eNB radio receives; downlink the reverse
        for (dir, tx, nf) in [
            ("uplink", b.uplink_tx_power_dbm, b.enb_noise_figure_db),
            ("downlink", b.downlink_tx_power_dbm, b.ue_noise_figure_db),
        ] {
            let c = cancellation_required(tx, bw, nf)?;
            consistent &= (c - (tx - noise_floor(bw, nf)?)).abs() < 1e-9;
            let mut r = out.rec("cancellation_db").scenario(format!("{dir}_{mhz}"));
            r.value = c;
            out.records.push(r);
        }
    }
    out.checks.push(Check::new(
        "budget.consistency",
        consistent,
        "cancellation = tx power - noise floor; full-duplex floors sit 1.7 dB higher",
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_table_values() {
        let out = emit_budget_tables(&ScenarioConfig::default()).unwrap();
        let get = |m: &str, s: &str| out.find(|r| r.metric == m && r.scenario == s).unwrap().value;
        assert!((get("cancellation_db", "uplink_5mhz") - 120.0).abs() < 0.1);
        assert!((get("cancellation_db", "downlink_20mhz") - 122.0).abs() < 0.1);
        assert!((get("noise_floor_dbm", "ue_10mhz") + 95.0).abs() < 0.1);
        assert!(out.passed());
    }

    #[test]
    fn nearest_axis_point() {
        assert_eq!(nearest(&[1.0, 2.0, 3.0, 21.0], 20.0), 3);
        assert_eq!(nearest(&[1.0, 2.0, 3.0, 21.0], 2.2), 1);
    }

    #[test]
    fn unknown_experiment_is_an_error() {
        assert!(run_experiment("bogus", &ScenarioConfig::default()).is_err());
    }
}
