use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::placement::place_users;
use super::scenario::{trial_seed, Scene, Scheme, PLACEMENT_STREAM, SCHEDULING_STREAM};
use crate::error::{Error, Result};
use crate::propagation::{link_cost, rate_density, sinr_db, PathlossSource};
use crate::scheduler::{
    schedule_fdrand, schedule_fdregrand, schedule_fdreghdelse, schedule_hd, schedule_optimal,
    schedule_optimal_per_resource, Assignment, Direction, DuplexMode, LinkModel, User, UserId,
};

/// Per-user link quality for one trial.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LinkMetrics {
    pub user: UserId,
    pub direction: Direction,
    pub resource: usize,
    pub mode: DuplexMode,
    pub co_channel: Option<UserId>,
    pub signal_dbm: f64,
    pub noise_dbm: f64,
    /// Inter-user interference; absent without a co-channel transmitter.
    pub interference_dbm: Option<f64>,
    pub interference_source: Option<PathlossSource>,
    pub sinr_db: f64,
    pub rate_density: f64,
    /// Rate density times the number of users sharing the resource.
    pub normalized_se: f64,
    /// For shared resources both users must be inside the radius.
    pub cell_center: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub scheme: Scheme,
    pub trial: u64,
    pub assignment: Assignment,
    /// Ascending by user id.
    pub links: Vec<LinkMetrics>,
    /// Sum of per-user inverse-rate costs.
    pub objective: f64,
    pub occupied_bandwidth_hz: f64,
}

/// Users of trial `trial`; identical for every scheme.
pub fn trial_users(scene: &Scene, trial: u64) -> Result<Vec<User>> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(scene.scenario.seed, trial, PLACEMENT_STREAM));
    place_users(&scene.scenario, &scene.map, &mut rng)
}

pub fn schedule(scene: &Scene, scheme: Scheme, users: &[User], trial: u64) -> Result<Assignment> {
    let plan = scene.plan();
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(scene.scenario.seed, trial, SCHEDULING_STREAM));
    let model = LinkModel::new(&scene.map, &scene.db, &scene.link);
    match scheme {
        Scheme::Hd => schedule_hd(users, &plan, &mut rng),
        Scheme::FdRand => schedule_fdrand(users, &plan, &mut rng),
        Scheme::FdRegRand => schedule_fdregrand(users, &scene.db, &plan, &mut rng),
        Scheme::FdRegHdElse => schedule_fdreghdelse(users, &scene.db, &plan, &mut rng),
        Scheme::Optimal if scene.scenario.per_resource_carrier => {
            schedule_optimal_per_resource(users, &model, &plan)
        }
        Scheme::Optimal => schedule_optimal(users, &model, &plan),
    }
}

/// Link metrics of every user under `assignment`.
pub fn evaluate(scene: &Scene, users: &[User], assignment: &Assignment) -> Result<Vec<LinkMetrics>> {
    let plan = scene.plan();
    let model = LinkModel::new(&scene.map, &scene.db, &scene.link);
    let by_id: BTreeMap<UserId, &User> = users.iter().map(|u| (u.id, u)).collect();
    let user = |id: UserId| {
        by_id
            .get(&id)
            .copied()
            .ok_or_else(|| Error::InvalidUsers(alloc::format!("assignment names unknown user {id}")))
    };
    let bs = scene.map.bs_position();
    let radius = scene.scenario.cell_center_radius_m;
    let near = |u: &User| u.position.distance_m(&bs) <= radius;
    let noise = scene.link.noise_floor_dbm;

    let mut links = Vec::with_capacity(users.len());
    for slot in assignment.slots() {
        let res = plan.get(slot.resource).ok_or_else(|| {
            Error::Constraint(alloc::format!("resource {} is not in the plan", slot.resource))
        })?;
        let carrier = if scene.scenario.per_resource_carrier {
            res.center_mhz
        } else {
            plan.band(res.band).center_mhz()
        };
        let mode = slot
            .mode()
            .ok_or_else(|| Error::Constraint(alloc::format!("resource {} is empty", slot.resource)))?;
        let sharing = if mode == DuplexMode::FullDuplex { 2.0 } else { 1.0 };
        let dl = slot.dl.map(user).transpose()?;
        let ul = slot.ul.map(user).transpose()?;
        let center = dl.iter().chain(ul.iter()).all(|u| near(u));

        if let Some(d) = dl {
            let s = model.signal_dbm(d)?;
            let (i, src) = match ul {
                Some(u) => {
                    let (i, eff) = model.interference(d, u, carrier)?;
                    (Some(i), Some(eff.source))
                }
                None => (None, None),
            };
            let sinr = sinr_db(s, noise, i);
            let r = rate_density(sinr);
            links.push(LinkMetrics {
                user: d.id,
                direction: Direction::Downlink,
                resource: slot.resource,
                mode,
                co_channel: slot.ul,
                signal_dbm: s,
                noise_dbm: noise,
                interference_dbm: i,
                interference_source: src,
                sinr_db: sinr,
                rate_density: r,
                normalized_se: sharing * r,
                cell_center: center,
            });
        }
        if let Some(u) = ul {
            let s = model.signal_dbm(u)?;
            let sinr = sinr_db(s, noise, None);
            let r = rate_density(sinr);
            links.push(LinkMetrics {
                user: u.id,
                direction: Direction::Uplink,
                resource: slot.resource,
                mode,
                co_channel: slot.dl,
                signal_dbm: s,
                noise_dbm: noise,
                interference_dbm: None,
                interference_source: None,
                sinr_db: sinr,
                rate_density: r,
                normalized_se: sharing * r,
                cell_center: center,
            });
        }
    }
    links.sort_by_key(|l| l.user);
    Ok(links)
}

/// Places the trial's users, schedules them under `scheme` and evaluates
/// every link.
pub fn run_trial(scene: &Scene, scheme: Scheme, trial: u64) -> Result<TrialOutcome> {
    let users = trial_users(scene, trial)?;
    run_trial_with_users(scene, scheme, trial, &users)
}

pub fn run_trial_with_users(
    scene: &Scene,
    scheme: Scheme,
    trial: u64,
    users: &[User],
) -> Result<TrialOutcome> {
    let plan = scene.plan();
    let assignment = schedule(scene, scheme, users, trial)?;
    assignment.verify(users, &plan)?;
    let links = evaluate(scene, users, &assignment)?;
    let objective = links.iter().map(|l| link_cost(l.rate_density)).sum();
    Ok(TrialOutcome {
        scheme,
        trial,
        occupied_bandwidth_hz: assignment.occupied_bandwidth_hz(&plan),
        assignment,
        links,
        objective,
    })
}

/// Every configured scheme on one shared drop.
pub fn run_drop(scene: &Scene, trial: u64) -> Result<Vec<TrialOutcome>> {
    let users = trial_users(scene, trial)?;
    scene
        .scenario
        .schemes
        .iter()
        .map(|&s| run_trial_with_users(scene, s, trial, &users))
        .collect()
}
