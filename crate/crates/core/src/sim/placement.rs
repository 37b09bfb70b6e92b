use alloc::vec::Vec;

use rand::Rng;

use super::scenario::ScenarioConfig;
use crate::error::{Error, Result};
use crate::geometry::Position;
use crate::radio_map::RadioMap;
use crate::scheduler::{User, UserId};

/// Drops users uniformly over the map, redrawing any position closer than
/// the minimum spacing to an earlier user or inside an excluded area.
///
/// Ids are placed in ascending order: downlink ids `1, 3, 5, ...` interleaved
/// with uplink ids `2, 4, 6, ...`.
pub fn place_users<R: Rng + ?Sized>(cfg: &ScenarioConfig, map: &RadioMap, rng: &mut R) -> Result<Vec<User>> {
    let mut ids: Vec<UserId> = (0..cfg.n_dl)
        .map(UserId::nth_downlink)
        .chain((0..cfg.n_ul).map(UserId::nth_uplink))
        .collect();
    ids.sort();
    let requested = ids.len();
    let b = map.bounds();
    let mut users: Vec<User> = Vec::with_capacity(requested);

    for id in ids {
        let mut placed = false;
        for _ in 0..cfg.attempts_per_user {
            let p = Position::new(
                b.x_min + rng.random::<f64>() * b.width(),
                b.y_min + rng.random::<f64>() * b.height(),
            );
            if let Some(t) = cfg.exclusion_threshold_db {
                if map.pathloss_at(p)? >= t {
                    continue;
                }
            }
            if users.iter().any(|u| u.position.distance_m(&p) < cfg.min_spacing_m) {
                continue;
            }
            users.push(User::new(id, p));
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::Placement {
                placed: users.len(),
                requested,
                attempts: cfg.attempts_per_user,
            });
        }
    }
    Ok(users)
}
