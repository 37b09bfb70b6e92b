use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::LinkBudgetConfig;
use crate::radio_map::RadioMap;
use crate::region::IsolationDatabase;
use crate::scheduler::ResourcePlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Scheme {
    #[cfg_attr(feature = "serde", serde(rename = "HD"))]
    Hd,
    #[cfg_attr(feature = "serde", serde(rename = "FDrand"))]
    FdRand,
    #[cfg_attr(feature = "serde", serde(rename = "FDregrand"))]
    FdRegRand,
    #[cfg_attr(feature = "serde", serde(rename = "FDregHDelse"))]
    FdRegHdElse,
    #[cfg_attr(feature = "serde", serde(rename = "Optimal"))]
    Optimal,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Hd,
        Scheme::FdRand,
        Scheme::FdRegRand,
        Scheme::FdRegHdElse,
        Scheme::Optimal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Hd => "HD",
            Scheme::FdRand => "FDrand",
            Scheme::FdRegRand => "FDregrand",
            Scheme::FdRegHdElse => "FDregHDelse",
            Scheme::Optimal => "Optimal",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidScenario(format!("unknown scheme {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ScenarioConfig {
    pub n_dl: usize,
    pub n_ul: usize,
    pub min_spacing_m: f64,
    /// Positions whose map path loss is at or above this are redrawn, which
    /// keeps users out of obstruction interiors.
    pub exclusion_threshold_db: Option<f64>,
    /// Draws allowed per user before placement gives up.
    pub attempts_per_user: usize,
    pub cell_center_radius_m: f64,
    pub trials: usize,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
    /// Evaluate UE-to-UE loss at each resource's own center frequency
    /// instead of its band center.
    pub per_resource_carrier: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_dl: 200,
            n_ul: 200,
            min_spacing_m: 1.0,
            exclusion_threshold_db: None,
            attempts_per_user: 10_000,
            cell_center_radius_m: 300.0,
            trials: 100,
            seed: 0,
            schemes: vec![Scheme::Hd, Scheme::FdRand, Scheme::FdRegRand, Scheme::FdRegHdElse],
            per_resource_carrier: false,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if !(self.min_spacing_m.is_finite() && self.min_spacing_m >= 0.0) {
            return bad(format!("minimum spacing must be non-negative, got {}", self.min_spacing_m));
        }
        if let Some(t) = self.exclusion_threshold_db {
            if !t.is_finite() {
                return bad("exclusion threshold must be finite".into());
            }
        }
        if self.attempts_per_user == 0 {
            return bad("attempts per user must be positive".into());
        }
        if !(self.cell_center_radius_m.is_finite() && self.cell_center_radius_m >= 0.0) {
            return bad(format!(
                "cell-center radius must be non-negative, got {}",
                self.cell_center_radius_m
            ));
        }
        if self.trials == 0 {
            return bad("at least one trial is required".into());
        }
        if self.schemes.is_empty() {
            return bad("no schemes configured".into());
        }
        Ok(())
    }
}

/// A complete simulation input: map, isolation database, radio parameters
/// and scenario.
#[derive(Debug, Clone)]
pub struct Scene {
    pub map: RadioMap,
    pub db: IsolationDatabase,
    pub link: LinkBudgetConfig,
    pub scenario: ScenarioConfig,
}

impl Scene {
    pub fn new(
        map: RadioMap,
        db: IsolationDatabase,
        link: LinkBudgetConfig,
        scenario: ScenarioConfig,
    ) -> Result<Self> {
        link.validate()?;
        scenario.validate()?;
        Ok(Self {
            map,
            db,
            link,
            scenario,
        })
    }

    pub fn plan(&self) -> ResourcePlan {
        ResourcePlan::from_config(&self.link)
    }
}

/// RNG stream used for user placement (shared by every scheme in a trial).
pub const PLACEMENT_STREAM: u64 = 0;
/// RNG stream used for random choices inside the schedulers.
pub const SCHEDULING_STREAM: u64 = 1;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one random stream of one trial:
/// `splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ stream)`.
pub fn trial_seed(campaign_seed: u64, trial: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(campaign_seed) ^ trial) ^ stream)
}
