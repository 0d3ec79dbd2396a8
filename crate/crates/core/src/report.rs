//! Result files: the per-round CSV, the JSON envelope and the sweep summary.
//!
//! Every file starts with the config digest and base seed. CSV files carry
//! them as `#` comment lines ahead of the header.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::harness::{BatchResult, EpisodeSummary};
use crate::seeds::EpisodeSeeds;

pub const RESULTS_HEADER: [&str; 6] = ["t", "regret_mean", "regret_std", "Q_mean", "alpha", "bound"];
pub const SWEEP_HEADER: [&str; 4] = ["value", "final_regret_mean", "final_regret_std", "bound"];

fn provenance<W: Write>(w: &mut W, digest: &str, seed: u64) -> io::Result<()> {
    writeln!(w, "# digest: {digest}")?;
    writeln!(w, "# seed: {seed}")
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes one row per logged round. `bound[t-1]` is the bound after round `t`;
/// cells for a missing bound or an uncomputed α are left empty.
pub fn write_results_csv<W: Write>(w: W, batch: &BatchResult, bound: Option<&[f64]>, digest: &str) -> io::Result<()> {
    let mut w = w;
    provenance(&mut w, digest, batch.base_seed)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RESULTS_HEADER)?;
    for (i, &t) in batch.rounds.iter().enumerate() {
        out.write_record([
            t.to_string(),
            batch.regret_mean[i].to_string(),
            batch.regret_std[i].to_string(),
            batch.q_mean[i].to_string(),
            opt(batch.alpha_mean[i]),
            opt(bound.and_then(|b| b.get(t - 1).copied())),
        ])?;
    }
    out.flush()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub digest: String,
    pub base_seed: u64,
    pub config: ExperimentConfig,
    pub repetitions: usize,
    pub horizon: usize,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub final_bound: Option<f64>,
    pub seeds: Vec<EpisodeSeeds>,
    pub episodes: Vec<EpisodeSummary>,
}

impl ResultEnvelope {
    pub fn new(config: &ExperimentConfig, digest: &str, batch: &BatchResult, bound: Option<&[f64]>) -> Self {
        Self {
            digest: digest.to_string(),
            base_seed: batch.base_seed,
            config: config.clone(),
            repetitions: batch.repetitions,
            horizon: config.horizon,
            mean_regret: batch.mean_regret,
            std_regret: batch.std_regret,
            final_bound: bound.and_then(|b| b.last().copied()),
            seeds: batch.episodes.iter().map(|e| e.seeds).collect(),
            episodes: batch.episodes.clone(),
        }
    }

    pub fn write<W: Write>(&self, w: W) -> io::Result<()> {
        let mut w = w;
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub final_regret_mean: f64,
    pub final_regret_std: f64,
    pub bound: Option<f64>,
}

pub fn write_sweep_summary<W: Write>(w: W, rows: &[SweepRow], digest: &str, seed: u64) -> io::Result<()> {
    let mut w = w;
    provenance(&mut w, digest, seed)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_HEADER)?;
    for r in rows {
        out.write_record([
            r.value.to_string(),
            r.final_regret_mean.to_string(),
            r.final_regret_std.to_string(),
            opt(r.bound),
        ])?;
    }
    out.flush()
}

/// Six significant digits, for terminal tables.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
