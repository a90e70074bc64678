use hetnet::sim::{run_codec_bench, ScenarioConfig};

fn main() -> hetnet::Result<()> {
    let mut cfg = ScenarioConfig::default();
    cfg.codec_bench.trials = 2;
    for r in run_codec_bench(&cfg)?.records {
        println!("{:<20} {:<22} {:>10.4}", r.metric, r.scenario, r.value);
    }
    Ok(())
}
