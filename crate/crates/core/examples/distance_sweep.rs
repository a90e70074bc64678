//! IGNORE / AVOID / CoMP in a three-cell cluster as users walk to the edge.

use hetnet::sim::{run_distance_sweep, ScenarioConfig};

fn main() -> hetnet::Result<()> {
    let mut cfg = ScenarioConfig::default();
    cfg.distance.trials = 40;
    let out = run_distance_sweep(&cfg)?;
    for r in out.records.iter().filter(|r| r.metric.ends_with("_over_avoid")) {
        let lat = r.latency_ms.map(|l| format!("{l} ms")).unwrap_or_default();
        println!("{:>6.0} m  {:<17} {:<6} {:.3}", r.distance_m.unwrap(), r.metric, lat, r.value);
    }
    Ok(())
}
