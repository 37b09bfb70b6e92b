use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Position;

/// User index. Odd ids are downlink users, even ids uplink users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct UserId(pub u32);

impl UserId {
    pub fn direction(self) -> Direction {
        if self.0 % 2 == 1 {
            Direction::Downlink
        } else {
            Direction::Uplink
        }
    }

    /// The `n`-th (0-based) downlink id.
    pub fn nth_downlink(n: usize) -> Self {
        UserId(2 * n as u32 + 1)
    }

    /// The `n`-th (0-based) uplink id.
    pub fn nth_uplink(n: usize) -> Self {
        UserId(2 * n as u32 + 2)
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Direction {
    Downlink,
    Uplink,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Downlink => "DL",
            Direction::Uplink => "UL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct User {
    pub id: UserId,
    pub position: Position,
    /// Uplink transmit power; `None` uses the cell default. Unused for downlink.
    pub tx_power_dbm: Option<f64>,
}

impl User {
    pub fn new(id: UserId, position: Position) -> Self {
        Self {
            id,
            position,
            tx_power_dbm: None,
        }
    }

    pub fn direction(&self) -> Direction {
        self.id.direction()
    }
}

/// Checks ids are positive and unique and positions finite.
pub fn validate_users(users: &[User]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for u in users {
        if u.id.0 == 0 {
            return Err(Error::InvalidUsers("user ids start at 1, found 0".into()));
        }
        if !seen.insert(u.id) {
            return Err(Error::InvalidUsers(format!("duplicate user id {}", u.id)));
        }
        if !u.position.is_finite() {
            return Err(Error::InvalidUsers(format!(
                "user {} has non-finite position {}",
                u.id, u.position
            )));
        }
        if let Some(p) = u.tx_power_dbm {
            if !p.is_finite() {
                return Err(Error::InvalidUsers(format!(
                    "user {} has non-finite transmit power",
                    u.id
                )));
            }
        }
    }
    Ok(())
}

/// Downlink and uplink users, each in ascending id order.
pub fn split_by_direction(users: &[User]) -> (Vec<&User>, Vec<&User>) {
    let mut dl: Vec<&User> = users.iter().filter(|u| u.direction() == Direction::Downlink).collect();
    let mut ul: Vec<&User> = users.iter().filter(|u| u.direction() == Direction::Uplink).collect();
    dl.sort_by_key(|u| u.id);
    ul.sort_by_key(|u| u.id);
    (dl, ul)
}
