use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::cdf::{compute_cdf, CdfSeries};
use super::scenario::{Scene, Scheme};
use super::trial::{run_drop, LinkMetrics, TrialOutcome};
use crate::error::Result;
use crate::scheduler::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Metric {
    /// Inter-user interference at downlink users with a co-channel uplink user, dBm.
    Interference,
    /// Normalized spectral efficiency of downlink users.
    DlSe,
    /// Normalized spectral efficiency of all users.
    AllSe,
    /// Raw rate density of all users.
    RateDensity,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Interference, Metric::DlSe, Metric::AllSe, Metric::RateDensity];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Interference => "interference",
            Metric::DlSe => "dl_se",
            Metric::AllSe => "all_se",
            Metric::RateDensity => "rate_density",
        }
    }

    fn sample(self, l: &LinkMetrics) -> Option<f64> {
        match self {
            Metric::Interference => match l.direction {
                Direction::Downlink => l.interference_dbm,
                Direction::Uplink => None,
            },
            Metric::DlSe => (l.direction == Direction::Downlink).then_some(l.normalized_se),
            Metric::AllSe => Some(l.normalized_se),
            Metric::RateDensity => Some(l.rate_density),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum View {
    Whole,
    Center,
}

impl View {
    pub const ALL: [View; 2] = [View::Whole, View::Center];

    pub fn name(self) -> &'static str {
        match self {
            View::Whole => "whole",
            View::Center => "center",
        }
    }
}

pub type SeriesKey = (Scheme, Metric, View);

#[derive(Debug, Clone, Default, PartialEq)]
struct SchemeTotals {
    trials: usize,
    objective: f64,
    bandwidth_hz: f64,
}

/// Order-insensitive collector of trial outcomes.
///
/// Samples are sorted when the report is built, so adding outcomes in any
/// order yields the same report. Per-scheme totals are summed in trial order
/// for the same reason.
#[derive(Debug, Clone, Default)]
pub struct CampaignAccumulator {
    samples: BTreeMap<SeriesKey, Vec<f64>>,
    totals: BTreeMap<Scheme, BTreeMap<u64, (f64, f64)>>,
}

impl CampaignAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, outcome: &TrialOutcome) {
        for metric in Metric::ALL {
            for view in View::ALL {
                let entry = self.samples.entry((outcome.scheme, metric, view)).or_default();
                entry.extend(
                    outcome
                        .links
                        .iter()
                        .filter(|l| view == View::Whole || l.cell_center)
                        .filter_map(|l| metric.sample(l)),
                );
            }
        }
        self.totals
            .entry(outcome.scheme)
            .or_default()
            .insert(outcome.trial, (outcome.objective, outcome.occupied_bandwidth_hz));
    }

    pub fn merge(&mut self, other: CampaignAccumulator) {
        for (k, v) in other.samples {
            self.samples.entry(k).or_default().extend(v);
        }
        for (s, t) in other.totals {
            self.totals.entry(s).or_default().extend(t);
        }
    }

    pub fn finish(self, scene: &Scene) -> CampaignReport {
        let series: BTreeMap<SeriesKey, CdfSeries> =
            self.samples.into_iter().map(|(k, v)| (k, compute_cdf(v))).collect();
        let totals: BTreeMap<Scheme, SchemeTotals> = self
            .totals
            .into_iter()
            .map(|(s, per_trial)| {
                let mut t = SchemeTotals::default();
                for (_, (obj, bw)) in per_trial {
                    t.trials += 1;
                    t.objective += obj;
                    t.bandwidth_hz += bw;
                }
                (s, t)
            })
            .collect();
        let summary = summarize(scene, &series, &totals);
        CampaignReport { series, summary }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MedianEntry {
    pub metric: Metric,
    pub view: View,
    pub samples: usize,
    pub median: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SchemeSummary {
    pub scheme: Scheme,
    pub trials: usize,
    pub mean_objective: f64,
    pub mean_occupied_bandwidth_mhz: f64,
    /// P(I > noise floor) over downlink users with a co-channel transmitter.
    pub interference_exceedance: Option<f64>,
    /// Fraction of interference samples exactly at the isolation floor.
    pub interference_mass_at_floor: Option<f64>,
    pub medians: Vec<MedianEntry>,
}

impl SchemeSummary {
    pub fn median(&self, metric: Metric, view: View) -> Option<f64> {
        self.medians
            .iter()
            .find(|m| m.metric == metric && m.view == view)
            .and_then(|m| m.median)
    }
}

/// Ratio of medians between two schemes.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GainEntry {
    pub numerator: Scheme,
    pub denominator: Scheme,
    pub metric: Metric,
    pub view: View,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CampaignSummary {
    pub seed: u64,
    pub trials: usize,
    pub bs_tx_power_dbm: f64,
    pub ue_tx_power_dbm: f64,
    pub noise_floor_dbm: f64,
    /// UE power minus the largest mitigation factor.
    pub isolation_floor_dbm: Option<f64>,
    pub region_pairs: usize,
    pub schemes: Vec<SchemeSummary>,
    pub gains: Vec<GainEntry>,
}

impl CampaignSummary {
    pub fn scheme(&self, scheme: Scheme) -> Option<&SchemeSummary> {
        self.schemes.iter().find(|s| s.scheme == scheme)
    }

    pub fn gain(&self, numerator: Scheme, denominator: Scheme, metric: Metric, view: View) -> Option<f64> {
        self.gains
            .iter()
            .find(|g| {
                g.numerator == numerator && g.denominator == denominator && g.metric == metric && g.view == view
            })
            .and_then(|g| g.ratio)
    }
}

/// Gains reported whenever both schemes were simulated.
pub const STANDARD_GAINS: [(Scheme, Scheme, Metric, View); 6] = [
    (Scheme::FdRegRand, Scheme::Hd, Metric::AllSe, View::Whole),
    (Scheme::FdRegHdElse, Scheme::Hd, Metric::AllSe, View::Whole),
    (Scheme::FdRand, Scheme::Hd, Metric::AllSe, View::Whole),
    (Scheme::Optimal, Scheme::Hd, Metric::AllSe, View::Whole),
    (Scheme::FdRegRand, Scheme::FdRand, Metric::DlSe, View::Whole),
    (Scheme::FdRegRand, Scheme::FdRand, Metric::DlSe, View::Center),
];

fn summarize(
    scene: &Scene,
    series: &BTreeMap<SeriesKey, CdfSeries>,
    totals: &BTreeMap<Scheme, SchemeTotals>,
) -> CampaignSummary {
    let floor = scene
        .db
        .pairs()
        .iter()
        .map(|p| p.alpha_db)
        .reduce(f64::max)
        .map(|a| scene.link.ue_tx_power_dbm - a);
    let noise = scene.link.noise_floor_dbm;

    let schemes: Vec<SchemeSummary> = totals
        .iter()
        .map(|(&scheme, t)| {
            let interference = series.get(&(scheme, Metric::Interference, View::Whole));
            let interference = interference.filter(|c| !c.is_empty());
            let mut medians = Vec::new();
            for metric in Metric::ALL {
                for view in View::ALL {
                    let c = series.get(&(scheme, metric, view));
                    medians.push(MedianEntry {
                        metric,
                        view,
                        samples: c.map_or(0, |c| c.len()),
                        median: c.and_then(|c| c.median()),
                    });
                }
            }
            let n = t.trials.max(1) as f64;
            SchemeSummary {
                scheme,
                trials: t.trials,
                mean_objective: t.objective / n,
                mean_occupied_bandwidth_mhz: t.bandwidth_hz / n / 1e6,
                interference_exceedance: interference.map(|c| c.fraction_above(noise)),
                interference_mass_at_floor: match (interference, floor) {
                    (Some(c), Some(f)) => Some(c.mass_at(f)),
                    _ => None,
                },
                medians,
            }
        })
        .collect();

    let median = |s: Scheme, m: Metric, v: View| series.get(&(s, m, v)).and_then(|c| c.median());
    let gains = STANDARD_GAINS
        .iter()
        .filter(|(a, b, _, _)| totals.contains_key(a) && totals.contains_key(b))
        .map(|&(a, b, m, v)| GainEntry {
            numerator: a,
            denominator: b,
            metric: m,
            view: v,
            ratio: match (median(a, m, v), median(b, m, v)) {
                (Some(x), Some(y)) if y != 0.0 => Some(x / y),
                _ => None,
            },
        })
        .collect();

    CampaignSummary {
        seed: scene.scenario.seed,
        trials: totals.values().map(|t| t.trials).max().unwrap_or(0),
        bs_tx_power_dbm: scene.link.bs_tx_power_dbm,
        ue_tx_power_dbm: scene.link.ue_tx_power_dbm,
        noise_floor_dbm: noise,
        isolation_floor_dbm: floor,
        region_pairs: scene.db.len(),
        schemes,
        gains,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignReport {
    pub series: BTreeMap<SeriesKey, CdfSeries>,
    pub summary: CampaignSummary,
}

impl CampaignReport {
    pub fn series(&self, scheme: Scheme, metric: Metric, view: View) -> Option<&CdfSeries> {
        self.series.get(&(scheme, metric, view))
    }
}

/// Runs every trial in order on the calling thread.
pub fn run_campaign(scene: &Scene) -> Result<CampaignReport> {
    let mut acc = CampaignAccumulator::new();
    for t in 0..scene.scenario.trials as u64 {
        for outcome in run_drop(scene, t)? {
            acc.add(&outcome);
        }
    }
    Ok(acc.finish(scene))
}

fn fmt_opt(f: &mut fmt::Formatter<'_>, v: Option<f64>, width: usize) -> fmt::Result {
    match v {
        Some(x) => write!(f, " {x:>width$.4}"),
        None => write!(f, " {:>width$}", "-"),
    }
}

impl fmt::Display for CampaignSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "BS power {} dBm, {} trials, seed {}, {} region pairs",
            self.bs_tx_power_dbm, self.trials, self.seed, self.region_pairs
        )?;
        writeln!(
            f,
            "{:<12} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "scheme", "med_all_se", "med_dl_se", "med_dl_ctr", "P(I>N)", "mass_flr", "bw_MHz"
        )?;
        for s in &self.schemes {
            write!(f, "{:<12}", s.scheme.name())?;
            fmt_opt(f, s.median(Metric::AllSe, View::Whole), 10)?;
            fmt_opt(f, s.median(Metric::DlSe, View::Whole), 10)?;
            fmt_opt(f, s.median(Metric::DlSe, View::Center), 10)?;
            fmt_opt(f, s.interference_exceedance, 10)?;
            fmt_opt(f, s.interference_mass_at_floor, 10)?;
            fmt_opt(f, Some(s.mean_occupied_bandwidth_mhz), 10)?;
            writeln!(f)?;
        }
        for g in &self.gains {
            let label: String = alloc::format!(
                "{}/{} {} {}",
                g.numerator.name(),
                g.denominator.name(),
                g.metric.name(),
                g.view.name()
            );
            write!(f, "gain {label:<36}")?;
            fmt_opt(f, g.ratio, 8)?;
            writeln!(f)?;
        }
        Ok(())
    }
}
