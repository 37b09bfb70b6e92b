//! Multi-threaded campaigns and their output files.
//!
//! Output layout for one BS power, inside `<out>/bs_<power>dBm/`:
//!
//! * `cdf_<metric>_<scheme>_<view>.csv`: header `value`, then the sorted samples;
//! * `summary.json`: medians, exceedance probabilities and gain ratios;
//! * `summary.txt`: the same as a text table.

use std::path::{Path, PathBuf};

use geoduplex_core::sim::{run_drop, CampaignAccumulator, CampaignReport, Scene};
use rayon::prelude::*;

use crate::error::{write_file, Error, Result};

/// Runs all trials on up to `threads` workers (all cores when `None`).
///
/// Outcomes are reduced in trial order, so the report does not depend on the
/// number of threads or on completion order.
pub fn run_campaign_parallel(scene: &Scene, threads: Option<usize>) -> Result<CampaignReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Output(format!("thread pool: {e}")))?;
    let trials = scene.scenario.trials as u64;
    let outcomes = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| run_drop(scene, t))
            .collect::<std::result::Result<Vec<_>, _>>()
    })?;
    let mut acc = CampaignAccumulator::new();
    for o in outcomes.iter().flatten() {
        acc.add(o);
    }
    Ok(acc.finish(scene))
}

pub fn power_dir_name(bs_tx_power_dbm: f64) -> String {
    format!("bs_{bs_tx_power_dbm}dBm")
}

pub fn series_file_name(key: &geoduplex_core::sim::SeriesKey) -> String {
    let (scheme, metric, view) = key;
    format!("cdf_{}_{}_{}.csv", metric.name(), scheme.name(), view.name())
}

/// Writes every series and both summaries into `dir` (created if missing).
pub fn write_report(report: &CampaignReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (key, cdf) in &report.series {
        let mut text = String::with_capacity(cdf.len() * 20 + 6);
        text.push_str("value\n");
        for v in cdf.samples() {
            text.push_str(&v.to_string());
            text.push('\n');
        }
        let path = dir.join(series_file_name(key));
        write_file(&path, &text)?;
        written.push(path);
    }
    let json = serde_json::to_string_pretty(&report.summary)
        .map_err(|e| Error::Output(format!("summary: {e}")))?;
    let path = dir.join("summary.json");
    write_file(&path, &(json + "\n"))?;
    written.push(path);
    let path = dir.join("summary.txt");
    write_file(&path, &report.summary.to_string())?;
    written.push(path);
    Ok(written)
}
