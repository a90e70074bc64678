use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hetnet::sim::{run_experiment, write_outputs, ScenarioConfig, EXPERIMENTS};

#[derive(Parser)]
#[command(version, about = "HetNet control-plane latency and CoMP simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario TOML; built-in defaults when omitted.
    #[arg(long, global = true, env = "HETNET_CONFIG")]
    config: Option<PathBuf>,

    #[arg(long, global = true, env = "HETNET_SEED")]
    seed: Option<u64>,

    /// Monte-Carlo trials for every experiment.
    #[arg(long, global = true, env = "HETNET_TRIALS")]
    trials: Option<usize>,

    #[arg(long, global = true, env = "HETNET_OUT", default_value = "results")]
    out: PathBuf,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "HETNET_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// CoMP capacity versus cell count for several latencies.
    Density,
    /// IGNORE / AVOID / CoMP versus distance in a three-cell cluster.
    Distance,
    /// Capacity scaling: ideal, in-band control plane, X2 over IP.
    Scaling,
    /// Joint-transmission capacity, in-band versus X2.
    CompGain,
    /// CSI compression rates and macro overhead.
    Codec,
    /// Noise floors and cancellation requirements.
    Budget,
    /// Everything above.
    All,
}

impl Command {
    fn experiments(self) -> Vec<&'static str> {
        match self {
            Command::Density => vec!["density"],
            Command::Distance => vec!["distance"],
            Command::Scaling => vec!["scaling"],
            Command::CompGain => vec!["comp-gain"],
            Command::Codec => vec!["codec"],
            Command::Budget => vec!["budget"],
            Command::All => EXPERIMENTS.to_vec(),
        }
    }
}

fn run(cli: Cli) -> hetnet::Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = cli.trials {
        cfg = cfg.with_trials(trials);
    }
    cfg.validate()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| hetnet::Error::Config(format!("thread pool: {e}")))?;

    let mut outputs = Vec::new();
    for name in cli.command.experiments() {
        let started = std::time::Instant::now();
        let out = run_experiment(name, &cfg)?;
        eprintln!("{name}: {} records in {:.1?}", out.records.len(), started.elapsed());
        for c in &out.checks {
            eprintln!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        outputs.push(out);
    }
    let manifest = write_outputs(&cli.out, &cfg, &outputs)?;
    eprintln!("wrote {}", cli.out.display());
    Ok(manifest.all_passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more invariant checks failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
