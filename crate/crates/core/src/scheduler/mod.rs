//! User classification, cost construction, optimal matching and the
//! scheduling heuristics.

mod assignment;
mod cost;
mod heuristics;
pub mod hungarian;
mod membership;
mod optimal;
mod resources;
mod user;

pub use assignment::{Assignment, DuplexMode, Slot, Violation};
pub use cost::{build_cost_matrix, CostMatrix, LinkModel};
pub use heuristics::{
    pair_across_regions, schedule_fdrand, schedule_fdregrand, schedule_fdreghdelse, schedule_hd,
    RegionPairing,
};
pub use membership::{classify_users, Membership, RegionMembership, Side};
pub use optimal::{
    optimal_matching, schedule_optimal, schedule_optimal_per_resource, solve_optimal, Matching,
};
pub use resources::{Band, FrequencyResource, ResourcePlan};
pub use user::{split_by_direction, validate_users, Direction, User, UserId};
