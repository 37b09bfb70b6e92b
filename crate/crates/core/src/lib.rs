//! Geographic-context interference coordination for full-duplex cells.
//!
//! Radio maps locate obstructions; obstructions yield pairs of isolated
//! regions with a guaranteed mitigation factor; the scheduler uses those
//! pairs to choose which downlink and uplink users share a frequency.
//! Everything here is `no_std` (with `alloc`) and deterministic given a seed.

#![no_std]

extern crate alloc;

pub mod error;
pub mod geometry;
pub mod presets;
pub mod propagation;
pub mod radio_map;
pub mod region;
pub mod scheduler;
pub mod sim;

pub use error::{Error, Result};
pub use geometry::{Position, Rect};
pub use propagation::{LinkBudgetConfig, ue_ue_pathloss};
pub use radio_map::{generate_synthetic_map, RadioMap, SyntheticMapSpec};
pub use region::{build_database, ExtractionParams, IsolationDatabase, RegionPair};
