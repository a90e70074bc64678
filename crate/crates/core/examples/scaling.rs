//! Network capacity as small cells are added, for both control planes.
//! Writes CSV and JSON output to the directory given as the first argument.

use std::path::PathBuf;

use hetnet::sim::{run_comp_gain_experiment, run_scaling_experiment, write_outputs, ScenarioConfig};

fn main() -> hetnet::Result<()> {
    let cfg = ScenarioConfig::default().with_trials(10);
    let scaling = run_scaling_experiment(&cfg)?;
    for r in scaling.records.iter().filter(|r| r.metric == "normalized_capacity") {
        println!("{:>3} cells  {:<7} {:.2}", r.n_cells.unwrap(), r.scenario, r.value);
    }
    let gain = run_comp_gain_experiment(&cfg)?;
    for r in gain.records.iter().filter(|r| r.metric == "swiftc_advantage") {
        println!("{:>3} cells  SwiftC advantage {:.0}%", r.n_cells.unwrap(), 100.0 * r.value);
    }

    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "scaling-out".into()));
    let manifest = write_outputs(&dir, &cfg, &[scaling, gain])?;
    println!("wrote {} (config {})", dir.display(), &manifest.config_sha256[..12]);
    Ok(())
}
