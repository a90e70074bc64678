//! Result records, summary statistics and on-disk output.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Header of every experiment CSV.
pub const CSV_HEADER: [&str; 9] = [
    "experiment",
    "scenario",
    "latency_ms",
    "n_cells",
    "distance_m",
    "metric",
    "value",
    "ci95",
    "trials",
];

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// One (coordinate, metric) sample of an experiment. Coordinates that do not
/// apply are left empty in the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub experiment: String,
    /// Free-form series label, e.g. `swiftc` or `uplink_20mhz`.
    pub scenario: String,
    pub latency_ms: Option<f64>,
    pub n_cells: Option<usize>,
    pub distance_m: Option<f64>,
    pub metric: String,
    pub value: f64,
    /// Half-width of the 95% confidence interval of `value`.
    pub ci95: f64,
    pub trials: usize,
}

impl SweepRecord {
    pub fn new(experiment: &str, metric: &str, value: f64) -> Self {
        Self {
            experiment: experiment.to_owned(),
            scenario: String::new(),
            latency_ms: None,
            n_cells: None,
            distance_m: None,
            metric: metric.to_owned(),
            value,
            ci95: 0.0,
            trials: 1,
        }
    }

    pub fn scenario(mut self, s: impl Into<String>) -> Self {
        self.scenario = s.into();
        self
    }

    pub fn latency(mut self, l: f64) -> Self {
        self.latency_ms = Some(l);
        self
    }

    pub fn cells(mut self, n: usize) -> Self {
        self.n_cells = Some(n);
        self
    }

    pub fn distance(mut self, d: f64) -> Self {
        self.distance_m = Some(d);
        self
    }

    pub fn stats(mut self, s: Summary) -> Self {
        self.value = s.mean;
        self.ci95 = s.ci95;
        self.trials = s.n;
        self
    }
}

/// Mean with a normal-approximation 95% half-width `1.96 s / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub ci95: f64,
    pub n: usize,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        assert!(n > 0, "summary of an empty sample");
        let mean = xs.iter().sum::<f64>() / n as f64;
        let ci95 = if n < 2 {
            0.0
        } else {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            1.96 * (var / n as f64).sqrt()
        };
        Self { mean, ci95, n }
    }

    /// `self / by` with the half-width scaled alongside.
    pub fn scaled(self, by: f64) -> Self {
        Self {
            mean: self.mean / by,
            ci95: self.ci95 / by.abs(),
            n: self.n,
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.experiment.clone(),
            r.scenario.clone(),
            opt(r.latency_ms),
            opt(r.n_cells),
            opt(r.distance_m),
            r.metric.clone(),
            r.value.to_string(),
            r.ci95.to_string(),
            r.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[SweepRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, records)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> Option<T> {
    if s.is_empty() {
        None
    } else {
        s.parse().ok()
    }
}

/// Reads records written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("");
        out.push(SweepRecord {
            experiment: field(0).to_owned(),
            scenario: field(1).to_owned(),
            latency_ms: parse_opt(field(2)),
            n_cells: parse_opt(field(3)),
            distance_m: parse_opt(field(4)),
            metric: field(5).to_owned(),
            value: field(6).parse().unwrap_or(f64::NAN),
            ci95: field(7).parse().unwrap_or(f64::NAN),
            trials: field(8).parse().unwrap_or(0),
        });
    }
    Ok(out)
}

/// Outcome of one invariant assertion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub experiment: String,
    pub csv: String,
    pub records: usize,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub crate_version: String,
    pub seed: u64,
    pub config_sha256: String,
    pub experiments: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn all_passed(&self) -> bool {
        self.experiments.iter().all(|e| e.checks.iter().all(|c| c.passed))
    }
}
