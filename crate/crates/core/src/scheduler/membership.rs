use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::user::{Direction, User, UserId};
use crate::region::IsolationDatabase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    /// 1-based pair index.
    pub k: usize,
    pub side: Side,
}

/// Region of each user, for users inside some region.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegionMembership {
    by_user: BTreeMap<UserId, (Membership, Direction)>,
}

impl RegionMembership {
    pub fn get(&self, id: UserId) -> Option<Membership> {
        self.by_user.get(&id).map(|(m, _)| *m)
    }

    pub fn len(&self) -> usize {
        self.by_user.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_user.is_empty()
    }

    /// Users of `direction` on `side` of pair `k`, ascending by id.
    pub fn members(&self, k: usize, side: Side, direction: Direction) -> Vec<UserId> {
        self.by_user
            .iter()
            .filter(|(_, (m, d))| m.k == k && m.side == side && *d == direction)
            .map(|(id, _)| *id)
            .collect()
    }
}

/// Closed point-in-rectangle membership.
///
/// A point on a boundary shared by several regions (e.g. the seam between two
/// halves of a split band) is given to the lowest `k`, checking side A before
/// side B.
pub fn classify_users(users: &[User], db: &IsolationDatabase) -> RegionMembership {
    let mut by_user = BTreeMap::new();
    for u in users {
        let hit = db.pairs().iter().find_map(|p| {
            if p.region_a.contains(u.position) {
                Some(Membership { k: p.k, side: Side::A })
            } else if p.region_b.contains(u.position) {
                Some(Membership { k: p.k, side: Side::B })
            } else {
                None
            }
        });
        if let Some(m) = hit {
            by_user.insert(u.id, (m, u.direction()));
        }
    }
    RegionMembership { by_user }
}
