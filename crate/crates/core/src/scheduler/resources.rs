use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::propagation::{FrequencyBand, LinkBudgetConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Band {
    /// Shared full-duplex band; half-duplex uplink.
    F1,
    /// Half-duplex downlink band.
    F2,
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::F1 => "f1",
            Band::F2 => "f2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyResource {
    pub index: usize,
    pub band: Band,
    pub center_mhz: f64,
    pub bandwidth_hz: f64,
}

/// The cell's resource pool: indices `0..n_f1` tile `f1` from its low edge,
/// indices `n_f1..n_f1 + n_f2` tile `f2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourcePlan {
    f1: FrequencyBand,
    f2: FrequencyBand,
    n_f1: usize,
    n_f2: usize,
    bandwidth_hz: f64,
}

impl ResourcePlan {
    pub fn from_config(cfg: &LinkBudgetConfig) -> Self {
        Self {
            f1: cfg.f1,
            f2: cfg.f2,
            n_f1: cfg.resources_in(&cfg.f1),
            n_f2: cfg.resources_in(&cfg.f2),
            bandwidth_hz: cfg.resource_bandwidth_hz,
        }
    }

    pub fn len(&self) -> usize {
        self.n_f1 + self.n_f2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_f1(&self) -> usize {
        self.n_f1
    }

    pub fn n_f2(&self) -> usize {
        self.n_f2
    }

    /// First index in `f2`.
    pub fn f2_start(&self) -> usize {
        self.n_f1
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    pub fn band(&self, band: Band) -> FrequencyBand {
        match band {
            Band::F1 => self.f1,
            Band::F2 => self.f2,
        }
    }

    pub fn get(&self, index: usize) -> Option<FrequencyResource> {
        let (band, offset) = if index < self.n_f1 {
            (Band::F1, index)
        } else if index < self.len() {
            (Band::F2, index - self.n_f1)
        } else {
            return None;
        };
        let fb = self.band(band);
        Some(FrequencyResource {
            index,
            band,
            center_mhz: fb.low_mhz + (offset as f64 + 0.5) * self.bandwidth_hz / 1e6,
            bandwidth_hz: self.bandwidth_hz,
        })
    }

    /// Carrier used for UE-to-UE loss on `index`: the center of its band.
    pub fn band_center_mhz(&self, index: usize) -> Option<f64> {
        self.get(index).map(|r| self.band(r.band).center_mhz())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plan_layout() {
        let plan = ResourcePlan::from_config(&LinkBudgetConfig::default());
        assert_eq!(plan.len(), 400);
        let first = plan.get(0).unwrap();
        assert_eq!(first.band, Band::F1);
        assert!((first.center_mhz - 2100.2).abs() < 1e-9);
        let last_f1 = plan.get(199).unwrap();
        assert!((last_f1.center_mhz - 2179.8).abs() < 1e-9);
        assert_eq!(plan.get(200).unwrap().band, Band::F2);
        assert_eq!(plan.band_center_mhz(250), Some(1940.0));
        assert!(plan.get(400).is_none());
    }
}
