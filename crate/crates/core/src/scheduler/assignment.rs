use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::resources::ResourcePlan;
use super::user::{Direction, User, UserId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum DuplexMode {
    FullDuplex,
    HalfDuplexDl,
    HalfDuplexUl,
}

impl fmt::Display for DuplexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DuplexMode::FullDuplex => "FD",
            DuplexMode::HalfDuplexDl => "HD-DL",
            DuplexMode::HalfDuplexUl => "HD-UL",
        })
    }
}

/// Occupants of one frequency resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Slot {
    pub resource: usize,
    pub dl: Option<UserId>,
    pub ul: Option<UserId>,
}

impl Slot {
    pub fn full_duplex(resource: usize, dl: UserId, ul: UserId) -> Self {
        Self {
            resource,
            dl: Some(dl),
            ul: Some(ul),
        }
    }

    pub fn downlink(resource: usize, dl: UserId) -> Self {
        Self {
            resource,
            dl: Some(dl),
            ul: None,
        }
    }

    pub fn uplink(resource: usize, ul: UserId) -> Self {
        Self {
            resource,
            dl: None,
            ul: Some(ul),
        }
    }

    pub fn mode(&self) -> Option<DuplexMode> {
        match (self.dl, self.ul) {
            (Some(_), Some(_)) => Some(DuplexMode::FullDuplex),
            (Some(_), None) => Some(DuplexMode::HalfDuplexDl),
            (None, Some(_)) => Some(DuplexMode::HalfDuplexUl),
            (None, None) => None,
        }
    }

    pub fn users(&self) -> impl Iterator<Item = UserId> {
        self.dl.into_iter().chain(self.ul)
    }
}

/// A breach of the one-resource-per-user / two-users-per-resource rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownResource { resource: usize },
    ResourceReused { resource: usize },
    EmptyResource { resource: usize },
    WrongDirection { resource: usize, user: UserId, slot: Direction },
    UnknownUser { resource: usize, user: UserId },
    MultipleResources { user: UserId, resources: Vec<usize> },
    Unassigned { user: UserId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownResource { resource } => {
                write!(f, "resource {resource} is not in the plan")
            }
            Violation::ResourceReused { resource } => {
                write!(f, "resource {resource} appears in more than one slot")
            }
            Violation::EmptyResource { resource } => {
                write!(f, "resource {resource} is listed with no users")
            }
            Violation::WrongDirection { resource, user, slot } => write!(
                f,
                "user {user} ({}) occupies the {slot} position of resource {resource}",
                user.direction()
            ),
            Violation::UnknownUser { resource, user } => {
                write!(f, "resource {resource} carries unknown user {user}")
            }
            Violation::MultipleResources { user, resources } => {
                write!(f, "user {user} holds {} resources: {resources:?}", resources.len())
            }
            Violation::Unassigned { user } => write!(f, "user {user} has no resource"),
        }
    }
}

/// The binary user-to-resource mapping, stored per occupied resource.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Assignment {
    slots: Vec<Slot>,
}

impl Assignment {
    pub fn new(slots: Vec<Slot>) -> Self {
        Self { slots }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn into_slots(self) -> Vec<Slot> {
        self.slots
    }

    pub fn slot_of(&self, user: UserId) -> Option<&Slot> {
        self.slots.iter().find(|s| s.dl == Some(user) || s.ul == Some(user))
    }

    pub fn count(&self, mode: DuplexMode) -> usize {
        self.slots.iter().filter(|s| s.mode() == Some(mode)).count()
    }

    /// Total bandwidth of occupied resources.
    pub fn occupied_bandwidth_hz(&self, plan: &ResourcePlan) -> f64 {
        self.slots.len() as f64 * plan.bandwidth_hz()
    }

    /// Every violation of the assignment rules against `users` and `plan`.
    pub fn violations(&self, users: &[User], plan: &ResourcePlan) -> Vec<Violation> {
        let known: BTreeSet<UserId> = users.iter().map(|u| u.id).collect();
        let mut out = Vec::new();
        let mut seen_resources = BTreeSet::new();
        // x_{u,f} = 1 incidences, grouped by user
        let mut held: BTreeMap<UserId, Vec<usize>> = BTreeMap::new();

        for s in &self.slots {
            if plan.get(s.resource).is_none() {
                out.push(Violation::UnknownResource { resource: s.resource });
            }
            if !seen_resources.insert(s.resource) {
                out.push(Violation::ResourceReused { resource: s.resource });
            }
            if s.mode().is_none() {
                out.push(Violation::EmptyResource { resource: s.resource });
            }
            for (user, slot_dir) in [(s.dl, Direction::Downlink), (s.ul, Direction::Uplink)] {
                let Some(user) = user else { continue };
                if !known.contains(&user) {
                    out.push(Violation::UnknownUser {
                        resource: s.resource,
                        user,
                    });
                }
                if user.direction() != slot_dir {
                    out.push(Violation::WrongDirection {
                        resource: s.resource,
                        user,
                        slot: slot_dir,
                    });
                }
                held.entry(user).or_default().push(s.resource);
            }
        }
        for u in users {
            match held.get(&u.id) {
                None => out.push(Violation::Unassigned { user: u.id }),
                Some(r) if r.len() > 1 => out.push(Violation::MultipleResources {
                    user: u.id,
                    resources: r.clone(),
                }),
                _ => {}
            }
        }
        out
    }

    pub fn verify(&self, users: &[User], plan: &ResourcePlan) -> Result<()> {
        match self.violations(users, plan).into_iter().next() {
            None => Ok(()),
            Some(Violation::Unassigned { user }) => Err(Error::Unassigned(user)),
            Some(v) => Err(Error::Constraint(v.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Position;
    use crate::propagation::LinkBudgetConfig;
    use alloc::vec;

    fn users(n: usize) -> Vec<User> {
        (1..=n as u32)
            .map(|i| User::new(UserId(i), Position::new(i as f64, 0.0)))
            .collect()
    }

    #[test]
    fn valid_mixed_assignment() {
        let plan = ResourcePlan::from_config(&LinkBudgetConfig::default());
        let a = Assignment::new(vec![
            Slot::full_duplex(0, UserId(1), UserId(2)),
            Slot::downlink(1, UserId(3)),
            Slot::uplink(2, UserId(4)),
        ]);
        assert!(a.violations(&users(4), &plan).is_empty());
        assert_eq!(a.count(DuplexMode::FullDuplex), 1);
        assert_eq!(a.occupied_bandwidth_hz(&plan), 1.2e6);
    }

    #[test]
    fn detects_each_violation() {
        let plan = ResourcePlan::from_config(&LinkBudgetConfig::default());
        let a = Assignment::new(vec![
            Slot::full_duplex(0, UserId(2), UserId(1)),
            Slot::downlink(0, UserId(3)),
            Slot::downlink(500, UserId(3)),
            Slot {
                resource: 4,
                dl: None,
                ul: None,
            },
            Slot::uplink(5, UserId(8)),
        ]);
        let v = a.violations(&users(4), &plan);
        assert!(v.contains(&Violation::ResourceReused { resource: 0 }));
        assert!(v.contains(&Violation::UnknownResource { resource: 500 }));
        assert!(v.contains(&Violation::EmptyResource { resource: 4 }));
        assert!(v.contains(&Violation::UnknownUser { resource: 5, user: UserId(8) }));
        assert!(v.contains(&Violation::Unassigned { user: UserId(4) }));
        assert!(v.iter().any(|x| matches!(x, Violation::WrongDirection { user: UserId(2), .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::MultipleResources { user: UserId(3), .. })));
        assert!(a.verify(&users(4), &plan).is_err());
    }
}
