//! A desk-scale stand-in for a measured urban radio map.
//!
//! Two tall buildings on a 1050 x 1100 m area with 50 m pixels; the base
//! station sits just south of the area. Obstruction footprints are aligned to
//! the pixel grid so detected bounding boxes equal the planted rectangles.
//! Mitigation factors come from UE-to-UE path loss plus building penetration,
//! capped at 140 dB to stand in for diffraction around the buildings.

use alloc::format;
use alloc::vec;

use crate::error::Result;
use crate::geometry::{Position, Rect};
use crate::propagation::LinkBudgetConfig;
use crate::radio_map::{generate_synthetic_map, PlantedObstruction, RadioMap, SyntheticMapSpec};
use crate::region::{build_database, detect_obstructions, Capped, ExtractionParams, ObstructedPathloss, Provenance};
use crate::sim::{ScenarioConfig, Scene};

pub const PENETRATION_DB: f64 = 60.0;
pub const ISOLATION_CEILING_DB: f64 = 140.0;

pub fn map_spec() -> SyntheticMapSpec {
    SyntheticMapSpec {
        origin: Position::new(0.0, 0.0),
        width_m: 1050.0,
        height_m: 1100.0,
        pixel_size_m: 50.0,
        bs_position: Position::new(650.0, -150.0),
        carrier_mhz: 2140.0,
        path_loss_exponent: 2.0,
        min_distance_m: 1.0,
        shadowing_sigma_db: 0.0,
        obstructions: vec![
            PlantedObstruction {
                footprint: Rect::new(600.0, 700.0, 50.0, 950.0),
                penetration_db: PENETRATION_DB,
            },
            PlantedObstruction {
                footprint: Rect::new(100.0, 250.0, 150.0, 950.0),
                penetration_db: PENETRATION_DB,
            },
        ],
    }
}

pub fn extraction_params() -> ExtractionParams {
    ExtractionParams {
        detection_threshold_db: 120.0,
        band_width_m: 150.0,
        admission_threshold_db: 100.0,
        sampling_step_m: 25.0,
        split: 2,
    }
}

pub fn scenario() -> ScenarioConfig {
    ScenarioConfig {
        exclusion_threshold_db: Some(120.0),
        ..ScenarioConfig::default()
    }
}

/// Attenuation model used to score region pairs on `map`.
pub fn attenuation(map: &RadioMap, params: &ExtractionParams, carrier_mhz: f64) -> Capped<ObstructedPathloss> {
    let obstructions = detect_obstructions(map, params.detection_threshold_db);
    Capped {
        inner: ObstructedPathloss::from_obstructions(&obstructions, carrier_mhz, PENETRATION_DB),
        ceiling_db: ISOLATION_CEILING_DB,
    }
}

pub fn attenuation_label(carrier_mhz: f64) -> alloc::string::String {
    format!(
        "min(ue_ue_pathloss@{carrier_mhz}MHz + {PENETRATION_DB} dB per crossed obstruction, {ISOLATION_CEILING_DB})"
    )
}

/// The complete scene at the given BS transmit power.
pub fn scene(bs_tx_power_dbm: f64, seed: u64) -> Result<Scene> {
    let spec = map_spec();
    let map = generate_synthetic_map(&spec, seed)?;
    let link = LinkBudgetConfig {
        bs_tx_power_dbm,
        ..LinkBudgetConfig::default()
    };
    let params = extraction_params();
    let carrier = link.f1.center_mhz();
    let db = build_database(
        &map,
        &params,
        &attenuation(&map, &params, carrier),
        Provenance {
            map_id: format!("two-building seed {seed}"),
            attenuation_model: attenuation_label(carrier),
            params: params.clone(),
        },
    )?;
    Scene::new(
        map,
        db,
        link,
        ScenarioConfig {
            seed,
            ..scenario()
        },
    )
}
