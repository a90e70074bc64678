//! A reduced density sweep: CoMP capacity against cell count and latency.

use hetnet::sim::{run_density_sweep, ScenarioConfig};

fn main() -> hetnet::Result<()> {
    let mut cfg = ScenarioConfig::default();
    cfg.density.trials = 20;
    cfg.density.cell_radii_m = vec![600.0, 300.0, 200.0];
    let out = run_density_sweep(&cfg)?;
    for r in out.records.iter().filter(|r| r.metric == "comp_capacity_bps_hz") {
        println!(
            "{:>3} cells  L={:>4} ms  {:>7.2} +- {:.2}",
            r.n_cells.unwrap(),
            r.latency_ms.unwrap(),
            r.value,
            r.ci95
        );
    }
    for c in &out.checks {
        println!("[{}] {}", if c.passed { "ok" } else { "FAIL" }, c.detail);
    }
    Ok(())
}
