//! TOML run configuration.
//!
//! Every key is optional: a missing key takes its default, which is the
//! desk-scale two-building scene with the standard cell parameters. Tables
//! merge key by key; arrays replace the default wholesale. Unknown keys are
//! rejected so typos cannot silently fall back to defaults.

use std::path::{Path, PathBuf};

use geoduplex_core::presets;
use geoduplex_core::region::{detect_obstructions, Attenuation, Capped, ConstantAttenuation, ObstructedPathloss};
use geoduplex_core::sim::ScenarioConfig;
use geoduplex_core::{ExtractionParams, LinkBudgetConfig, RadioMap, SyntheticMapSpec};
use serde::{Deserialize, Serialize};

use crate::error::{read_file, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttenuationModel {
    /// UE-to-UE path loss plus penetration per crossed obstruction, capped.
    Obstructed,
    /// The same value for every position pair.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttenuationConfig {
    pub model: AttenuationModel,
    pub penetration_db: f64,
    /// Upper bound on the obstructed model; `inf` disables it.
    pub ceiling_db: f64,
    pub constant_db: f64,
}

impl Default for AttenuationConfig {
    fn default() -> Self {
        Self {
            model: AttenuationModel::Obstructed,
            penetration_db: presets::PENETRATION_DB,
            ceiling_db: presets::ISOLATION_CEILING_DB,
            constant_db: presets::ISOLATION_CEILING_DB,
        }
    }
}

impl AttenuationConfig {
    /// Attenuation model over `map`, with obstructions found at the
    /// configured detection threshold.
    pub fn build(
        &self,
        map: &RadioMap,
        params: &ExtractionParams,
        carrier_mhz: f64,
    ) -> Box<dyn Attenuation + Send + Sync> {
        match self.model {
            AttenuationModel::Obstructed => {
                let obs = detect_obstructions(map, params.detection_threshold_db);
                Box::new(Capped {
                    inner: ObstructedPathloss::from_obstructions(&obs, carrier_mhz, self.penetration_db),
                    ceiling_db: self.ceiling_db,
                })
            }
            AttenuationModel::Constant => Box::new(ConstantAttenuation(self.constant_db)),
        }
    }

    pub fn label(&self, carrier_mhz: f64) -> String {
        match self.model {
            AttenuationModel::Obstructed => format!(
                "min(ue_ue_pathloss@{carrier_mhz}MHz + {} dB per crossed obstruction, {})",
                self.penetration_db, self.ceiling_db
            ),
            AttenuationModel::Constant => format!("constant {} dB", self.constant_db),
        }
    }
}

/// Input and output locations; empty strings mean "not set".
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Paths {
    pub map: String,
    pub database: String,
    pub out: String,
}

impl Paths {
    fn get(s: &str) -> Option<PathBuf> {
        (!s.is_empty()).then(|| PathBuf::from(s))
    }

    pub fn map(&self) -> Option<PathBuf> {
        Self::get(&self.map)
    }

    pub fn database(&self) -> Option<PathBuf> {
        Self::get(&self.database)
    }

    pub fn out(&self) -> Option<PathBuf> {
        Self::get(&self.out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Seed for synthetic map shadowing.
    pub map_seed: u64,
    /// A campaign is run per entry; overrides `link.bs_tx_power_dbm`.
    pub bs_tx_powers_dbm: Vec<f64>,
    pub map: SyntheticMapSpec,
    pub extraction: ExtractionParams,
    pub attenuation: AttenuationConfig,
    pub link: LinkBudgetConfig,
    pub scenario: ScenarioConfig,
    pub paths: Paths,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            map_seed: 0,
            bs_tx_powers_dbm: vec![46.0, 20.0],
            map: presets::map_spec(),
            extraction: presets::extraction_params(),
            attenuation: AttenuationConfig::default(),
            link: LinkBudgetConfig::default(),
            scenario: presets::scenario(),
            paths: Paths::default(),
        }
    }
}

fn merge(base: &mut toml::Table, user: toml::Table, prefix: &str) -> Result<()> {
    for (k, v) in user {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match (base.get_mut(&k), v) {
            (None, _) => return Err(Error::Config(format!("unknown key {key}"))),
            (Some(toml::Value::Table(b)), toml::Value::Table(u)) => merge(b, u, &key)?,
            (Some(toml::Value::Table(_)), _) => {
                return Err(Error::Config(format!("{key} must be a table")));
            }
            (Some(slot), v) => *slot = v,
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let user: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut base = match toml::Value::try_from(RunConfig::default()) {
            Ok(toml::Value::Table(t)) => t,
            other => return Err(Error::Config(format!("serializing defaults: {other:?}"))),
        };
        merge(&mut base, user, "")?;
        let cfg: RunConfig = toml::Value::Table(base)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&read_file(path)?).map_err(|e| Error::in_file(path, e))
    }

    /// Defaults when `path` is `None`.
    pub fn load_or_default(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.map.validate()?;
        self.extraction.validate()?;
        self.link.validate()?;
        self.scenario.validate()?;
        if self.bs_tx_powers_dbm.is_empty() {
            return Err(Error::Config("bs_tx_powers_dbm must list at least one power".into()));
        }
        if let Some(p) = self.bs_tx_powers_dbm.iter().find(|p| !p.is_finite()) {
            return Err(Error::Config(format!("BS power {p} dBm is not finite")));
        }
        let a = &self.attenuation;
        if a.penetration_db.is_nan() || a.ceiling_db.is_nan() || !a.constant_db.is_finite() {
            return Err(Error::Config("attenuation values must be numbers".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default() {
        assert_eq!(RunConfig::from_toml_str("").unwrap(), RunConfig::default());
    }

    #[test]
    fn defaults_carry_cell_parameters() {
        let c = RunConfig::default();
        assert_eq!(c.link.noise_floor_dbm, -100.0);
        assert_eq!(c.link.ue_tx_power_dbm, 20.0);
        assert_eq!(c.bs_tx_powers_dbm, vec![46.0, 20.0]);
        assert_eq!((c.link.f1.low_mhz, c.link.f1.high_mhz), (2100.0, 2180.0));
        assert_eq!((c.link.f2.low_mhz, c.link.f2.high_mhz), (1900.0, 1980.0));
        assert_eq!(c.link.resource_bandwidth_hz, 400e3);
        assert_eq!((c.scenario.n_dl, c.scenario.n_ul), (200, 200));
        assert_eq!(c.scenario.cell_center_radius_m, 300.0);
        assert_eq!(c.map.pixel_size_m, 50.0);
        assert_eq!((c.map.width_m, c.map.height_m), (1050.0, 1100.0));
    }

    #[test]
    fn partial_tables_merge() {
        let c = RunConfig::from_toml_str(
            "[scenario]\ntrials = 3\nschemes = [\"FDrand\", \"Optimal\"]\n[map.bs_position]\nx = 10.0\n",
        )
        .unwrap();
        assert_eq!(c.scenario.trials, 3);
        assert_eq!(c.scenario.n_dl, 200);
        assert_eq!(c.map.bs_position.x, 10.0);
        assert_eq!(c.map.bs_position.y, -150.0);
        assert_eq!(c.map.obstructions.len(), 2);
        assert_eq!(c.scenario.schemes.len(), 2);
    }

    #[test]
    fn unknown_keys_rejected() {
        let msg = RunConfig::from_toml_str("[scenario]\ntrails = 3\n").unwrap_err().to_string();
        assert!(msg.contains("scenario.trails"), "{msg}");
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(RunConfig::from_toml_str("[extraction]\nsplit = 3\n").is_err());
        assert!(RunConfig::from_toml_str("bs_tx_powers_dbm = []\n").is_err());
        assert!(RunConfig::from_toml_str("[scenario]\nschemes = [\"bogus\"]\n").is_err());
    }

    #[test]
    fn resolved_config_round_trips() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::from_toml_str(&c.to_toml_string().unwrap()).unwrap(), c);
    }
}
