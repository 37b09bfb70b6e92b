//! Path-loss models and link-budget arithmetic.
//!
//! Powers are carried in dBm and losses in dB. Noise and interference are
//! summed in linear power; everything else stays in the log domain.

use alloc::format;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Position;
use crate::region::IsolationDatabase;

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// UE-to-UE distance at which the near-field free-space form hands over to
/// the log-distance form. The boundary itself uses the far model.
pub const UE_UE_BREAKPOINT_KM: f64 = 0.05;

/// Largest per-link cost; keeps assignment arithmetic finite for dead links.
pub const MAX_LINK_COST: f64 = 1e9;

/// UE-to-UE path loss in dB for a separation of `d_km` at `f_mhz`.
pub fn ue_ue_pathloss(d_km: f64, f_mhz: f64) -> Result<f64> {
    if !(d_km.is_finite() && d_km > 0.0 && f_mhz.is_finite() && f_mhz > 0.0) {
        return Err(Error::PathlossDomain {
            distance_km: d_km,
            frequency_mhz: f_mhz,
        });
    }
    if d_km < UE_UE_BREAKPOINT_KM {
        let d_m = d_km * 1e3;
        let f_hz = f_mhz * 1e6;
        Ok(20.0 * libm::log10(4.0 * core::f64::consts::PI * d_m * f_hz / SPEED_OF_LIGHT_M_S))
    } else {
        Ok(38.32 * libm::log10(d_km) + 21.0 * libm::log10(f_mhz) + 61.6)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FrequencyBand {
    pub low_mhz: f64,
    pub high_mhz: f64,
}

impl FrequencyBand {
    pub const fn new(low_mhz: f64, high_mhz: f64) -> Self {
        Self { low_mhz, high_mhz }
    }

    pub fn center_mhz(&self) -> f64 {
        0.5 * (self.low_mhz + self.high_mhz)
    }

    pub fn width_mhz(&self) -> f64 {
        self.high_mhz - self.low_mhz
    }
}

/// Table-level radio parameters shared by every link in a cell.
///
/// `f1` is the band shared by full-duplex schemes; half-duplex operation
/// carries uplink on `f1` and downlink on `f2`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct LinkBudgetConfig {
    pub noise_floor_dbm: f64,
    pub ue_tx_power_dbm: f64,
    pub bs_tx_power_dbm: f64,
    pub f1: FrequencyBand,
    pub f2: FrequencyBand,
    pub resource_bandwidth_hz: f64,
}

impl Default for LinkBudgetConfig {
    fn default() -> Self {
        Self {
            noise_floor_dbm: -100.0,
            ue_tx_power_dbm: 20.0,
            bs_tx_power_dbm: 46.0,
            f1: FrequencyBand::new(2100.0, 2180.0),
            f2: FrequencyBand::new(1900.0, 1980.0),
            resource_bandwidth_hz: 400e3,
        }
    }
}

impl LinkBudgetConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: alloc::string::String| Err(Error::InvalidParams(m));
        for (name, v) in [
            ("noise floor", self.noise_floor_dbm),
            ("UE transmit power", self.ue_tx_power_dbm),
            ("BS transmit power", self.bs_tx_power_dbm),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite, got {v}"));
            }
        }
        for (name, band) in [("f1", self.f1), ("f2", self.f2)] {
            if !(band.low_mhz.is_finite() && band.high_mhz.is_finite())
                || band.low_mhz <= 0.0
                || band.high_mhz <= band.low_mhz
            {
                return bad(format!(
                    "band {name} must satisfy 0 < low < high, got {}..{} MHz",
                    band.low_mhz, band.high_mhz
                ));
            }
        }
        if !(self.resource_bandwidth_hz.is_finite() && self.resource_bandwidth_hz > 0.0) {
            return bad(format!(
                "resource bandwidth must be positive, got {} Hz",
                self.resource_bandwidth_hz
            ));
        }
        if self.resources_in(&self.f1) == 0 || self.resources_in(&self.f2) == 0 {
            return bad(format!(
                "resource bandwidth {} Hz exceeds a band",
                self.resource_bandwidth_hz
            ));
        }
        Ok(())
    }

    /// Number of whole resources that fit in `band`.
    pub fn resources_in(&self, band: &FrequencyBand) -> usize {
        let n = band.width_mhz() * 1e6 / self.resource_bandwidth_hz;
        // tolerate representation error in e.g. 80e6 / 400e3
        libm::floor(n + 1e-9).max(0.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum PathlossSource {
    /// The UE-to-UE model value was the larger term.
    Model,
    /// The pair's mitigation factor was the larger term.
    RegionFloor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePathloss {
    pub value_db: f64,
    pub source: PathlossSource,
}

/// Attenuation between two users, floored by the mitigation factor of any
/// region pair that separates them.
///
/// When the users are split across several pairs the largest factor applies.
/// Ties between the model and the floor are reported as `Model`.
pub fn effective_interuser_pathloss(
    u: Position,
    v: Position,
    db: &IsolationDatabase,
    f_mhz: f64,
) -> Result<EffectivePathloss> {
    let model = ue_ue_pathloss(u.distance_m(&v) / 1e3, f_mhz)?;
    let floor = db.isolation_between(u, v);
    Ok(match floor {
        Some(alpha) if alpha > model => EffectivePathloss {
            value_db: alpha,
            source: PathlossSource::RegionFloor,
        },
        _ => EffectivePathloss {
            value_db: model,
            source: PathlossSource::Model,
        },
    })
}

/// Power received from a co-channel transmitter of power `tx_dbm`.
pub fn interference_power(tx_dbm: f64, pathloss: &EffectivePathloss) -> f64 {
    tx_dbm - pathloss.value_db
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    libm::pow(10.0, dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * libm::log10(mw)
}

/// SINR in dB; `interference_dbm = None` means no co-channel transmitter.
pub fn sinr_db(signal_dbm: f64, noise_dbm: f64, interference_dbm: Option<f64>) -> f64 {
    match interference_dbm {
        None => signal_dbm - noise_dbm,
        Some(i) => signal_dbm - mw_to_dbm(dbm_to_mw(noise_dbm) + dbm_to_mw(i)),
    }
}

/// Shannon rate density log2(1 + SINR) in bits/s/Hz.
pub fn rate_density(sinr_db: f64) -> f64 {
    libm::log2(1.0 + dbm_to_mw(sinr_db))
}

/// Inverse-rate link cost, clamped to [`MAX_LINK_COST`].
pub fn link_cost(rate_density: f64) -> f64 {
    if rate_density.is_finite() && rate_density > 0.0 {
        (1.0 / rate_density).min(MAX_LINK_COST)
    } else {
        MAX_LINK_COST
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn breakpoint_belongs_to_far_model() {
        let far = 38.32 * libm::log10(0.05) + 21.0 * libm::log10(2000.0) + 61.6;
        assert_eq!(ue_ue_pathloss(0.05, 2000.0).unwrap(), far);
    }

    #[test]
    fn far_model_slope_per_doubling() {
        let a = ue_ue_pathloss(0.2, 2140.0).unwrap();
        let b = ue_ue_pathloss(0.4, 2140.0).unwrap();
        assert_abs_diff_eq!(b - a, 38.32 * libm::log10(2.0), epsilon = 1e-12);
        assert_abs_diff_eq!(b - a, 11.54, epsilon = 0.005);
    }

    #[test]
    fn discontinuity_is_kept() {
        let below = ue_ue_pathloss(0.049_999_999, 2000.0).unwrap();
        let at = ue_ue_pathloss(0.05, 2000.0).unwrap();
        assert!(at - below > 8.0, "jump {}", at - below);
    }

    #[test]
    fn domain_errors() {
        assert!(ue_ue_pathloss(0.0, 2000.0).is_err());
        assert!(ue_ue_pathloss(-1.0, 2000.0).is_err());
        assert!(ue_ue_pathloss(0.1, 0.0).is_err());
        assert!(ue_ue_pathloss(f64::NAN, 2000.0).is_err());
    }

    #[test]
    fn noise_only_unit_snr_gives_one_bit() {
        assert_eq!(rate_density(sinr_db(-100.0, -100.0, None)), 1.0);
    }

    #[test]
    fn equal_interference_and_noise_costs_three_db() {
        let s = sinr_db(-80.0, -100.0, Some(-100.0));
        assert_abs_diff_eq!(s, 20.0 - 10.0 * libm::log10(2.0), epsilon = 1e-12);
    }

    #[test]
    fn composed_sinr_and_rate() {
        let s = sinr_db(-80.0, -100.0, Some(-120.0));
        // 20 dB over a noise term inflated by 1 %
        assert_abs_diff_eq!(s, 20.0 - 10.0 * libm::log10(1.01), epsilon = 1e-12);
        assert_abs_diff_eq!(s, 19.96, epsilon = 0.005);
        let r = rate_density(s);
        assert_abs_diff_eq!(r, libm::log2(1.0 + 100.0 / 1.01), epsilon = 1e-12);
        assert!((r - 6.65).abs() < 0.01, "{r}");
    }

    #[test]
    fn default_budget_has_two_hundred_resources_per_band() {
        let cfg = LinkBudgetConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.resources_in(&cfg.f1), 200);
        assert_eq!(cfg.resources_in(&cfg.f2), 200);
        assert_eq!(cfg.f1.center_mhz(), 2140.0);
    }

    #[test]
    fn link_cost_clamps() {
        assert_eq!(link_cost(0.0), MAX_LINK_COST);
        assert_eq!(link_cost(1e-12), MAX_LINK_COST);
        assert_eq!(link_cost(2.0), 0.5);
    }
}
