//! Monte-Carlo evaluation: placement, per-scheme trials, link metrics and
//! their empirical distributions.

mod campaign;
mod cdf;
mod placement;
mod scenario;
mod trial;

pub use campaign::{
    run_campaign, CampaignAccumulator, CampaignReport, CampaignSummary, GainEntry, MedianEntry, Metric,
    SchemeSummary, SeriesKey, View, STANDARD_GAINS,
};
pub use cdf::{compute_cdf, CdfSeries};
pub use placement::place_users;
pub use scenario::{trial_seed, ScenarioConfig, Scene, Scheme, PLACEMENT_STREAM, SCHEDULING_STREAM};
pub use trial::{
    evaluate, run_drop, run_trial, run_trial_with_users, schedule, trial_users, LinkMetrics, TrialOutcome,
};
