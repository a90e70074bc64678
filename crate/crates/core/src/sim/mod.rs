//! Scenario configuration, experiment orchestration and result output.
//!
//! Every experiment writes `<out>/<name>.csv` with the columns in
//! [`record::CSV_HEADER`]. A run also writes `manifest.json` (config hash,
//! seed, crate version, per-experiment checks) and any JSON artifacts the
//! experiments produce (coordination timelines, scheduler decisions).

pub mod config;
pub mod experiments;
pub mod network;
pub mod record;

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

pub use config::ScenarioConfig;
pub use experiments::{
    emit_budget_tables, run_codec_bench, run_comp_gain_experiment, run_density_sweep, run_distance_sweep,
    run_experiment, run_scaling_experiment, ExperimentOutput, EXPERIMENTS,
};
pub use record::{Check, Manifest, ManifestEntry, Summary, SweepRecord};

use crate::error::Result;

/// Writes CSVs, artifacts and the manifest for finished experiments.
pub fn write_outputs(out_dir: &Path, cfg: &ScenarioConfig, outputs: &[ExperimentOutput]) -> Result<Manifest> {
    std::fs::create_dir_all(out_dir)?;
    let mut experiments = Vec::new();
    for o in outputs {
        let csv = format!("{}.csv", o.name);
        record::write_csv(BufWriter::new(File::create(out_dir.join(&csv))?), &o.records)?;
        for (stem, doc) in &o.artifacts {
            let f = BufWriter::new(File::create(out_dir.join(format!("{stem}.json")))?);
            serde_json::to_writer_pretty(f, doc)?;
        }
        experiments.push(ManifestEntry {
            experiment: o.name.to_owned(),
            csv,
            records: o.records.len(),
            checks: o.checks.clone(),
        });
    }
    let manifest = Manifest {
        schema_version: record::MANIFEST_SCHEMA_VERSION,
        crate_version: env!("CARGO_PKG_VERSION").to_owned(),
        seed: cfg.seed,
        config_sha256: cfg.hash_hex(),
        experiments,
    };
    serde_json::to_writer_pretty(BufWriter::new(File::create(out_dir.join("manifest.json"))?), &manifest)?;
    Ok(manifest)
}
