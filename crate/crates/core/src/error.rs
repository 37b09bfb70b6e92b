use alloc::string::String;

use thiserror::Error;

use crate::scheduler::UserId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid radio map: {0}")]
    InvalidMap(String),

    #[error("position ({x}, {y}) lies outside the radio map")]
    OutOfBounds { x: f64, y: f64 },

    #[error("invalid synthetic map spec: {0}")]
    InvalidSpec(String),

    #[error("invalid extraction parameters: {0}")]
    InvalidParams(String),

    #[error("obstruction bounding box {0} lies outside the map")]
    ObstructionOutsideMap(String),

    #[error("region {width} x {height} m is smaller than one sampling cell of {step} m")]
    RegionTooSmall { width: f64, height: f64, step: f64 },

    #[error("invalid isolation database: {0}")]
    InvalidDatabase(String),

    #[error("path loss undefined for distance {distance_km} km at {frequency_mhz} MHz")]
    PathlossDomain { distance_km: f64, frequency_mhz: f64 },

    #[error("invalid user set: {0}")]
    InvalidUsers(String),

    #[error("user {0} has no assigned resource")]
    Unassigned(UserId),

    #[error("cost matrix entry ({row}, {col}) is not finite")]
    NonFiniteCost { row: usize, col: usize },

    #[error("unequal scheduling pools: {dl} downlink vs {ul} uplink users")]
    PoolMismatch { dl: usize, ul: usize },

    #[error("insufficient frequency resources: need {needed}, have {available}")]
    Capacity { needed: usize, available: usize },

    #[error("placed only {placed} of {requested} users after {attempts} attempts")]
    Placement {
        placed: usize,
        requested: usize,
        attempts: usize,
    },

    #[error("assignment violates scheduling constraints: {0}")]
    Constraint(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}
