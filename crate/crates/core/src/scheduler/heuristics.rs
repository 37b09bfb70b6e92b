//! Region-aware heuristics and the half-duplex / random full-duplex baselines.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::assignment::{Assignment, Slot};
use super::membership::{classify_users, Side};
use super::resources::ResourcePlan;
use super::user::{split_by_direction, validate_users, Direction, User, UserId};
use crate::error::{Error, Result};
use crate::region::IsolationDatabase;

/// Outcome of the region-pairing pass shared by both heuristics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPairing {
    /// `(dl, ul)` pairs in the order they were formed.
    pub pairs: Vec<(UserId, UserId)>,
    /// Users still to be scheduled, ascending by id.
    pub leftover_dl: Vec<UserId>,
    pub leftover_ul: Vec<UserId>,
}

/// For each pair `k`: downlink users in `A_k` with uplink users in `B_k`,
/// then downlink users in `B_k` with uplink users in `A_k`. Within a set,
/// users are taken in ascending id order; surplus users are left over.
pub fn pair_across_regions(users: &[User], db: &IsolationDatabase) -> RegionPairing {
    let membership = classify_users(users, db);
    let mut pairs = Vec::new();
    let mut taken = BTreeSet::new();
    for p in db.pairs() {
        for (dl_side, ul_side) in [(Side::A, Side::B), (Side::B, Side::A)] {
            let dl = membership.members(p.k, dl_side, Direction::Downlink);
            let ul = membership.members(p.k, ul_side, Direction::Uplink);
            for (&d, &u) in dl.iter().zip(&ul) {
                pairs.push((d, u));
                taken.insert(d);
                taken.insert(u);
            }
        }
    }
    let (dl, ul) = split_by_direction(users);
    let rest = |v: Vec<&User>| -> Vec<UserId> {
        v.into_iter().map(|u| u.id).filter(|id| !taken.contains(id)).collect()
    };
    RegionPairing {
        pairs,
        leftover_dl: rest(dl),
        leftover_ul: rest(ul),
    }
}

fn ensure_capacity(needed: usize, available: usize) -> Result<()> {
    if needed > available {
        Err(Error::Capacity { needed, available })
    } else {
        Ok(())
    }
}

fn fd_slots(pairs: impl IntoIterator<Item = (UserId, UserId)>, start: usize) -> Vec<Slot> {
    pairs
        .into_iter()
        .enumerate()
        .map(|(i, (d, u))| Slot::full_duplex(start + i, d, u))
        .collect()
}

/// Region pairs first, then the remaining users paired at random. Every
/// resource carries a full-duplex pair.
pub fn schedule_fdregrand<R: Rng + ?Sized>(
    users: &[User],
    db: &IsolationDatabase,
    plan: &ResourcePlan,
    rng: &mut R,
) -> Result<Assignment> {
    validate_users(users)?;
    let mut step1 = pair_across_regions(users, db);
    if step1.leftover_dl.len() != step1.leftover_ul.len() {
        let (dl, ul) = split_by_direction(users);
        return Err(Error::PoolMismatch {
            dl: dl.len(),
            ul: ul.len(),
        });
    }
    ensure_capacity(step1.pairs.len() + step1.leftover_dl.len(), plan.len())?;
    step1.leftover_dl.shuffle(rng);
    step1.leftover_ul.shuffle(rng);
    let n1 = step1.pairs.len();
    let mut slots = fd_slots(step1.pairs, 0);
    slots.extend(fd_slots(
        step1.leftover_dl.into_iter().zip(step1.leftover_ul),
        n1,
    ));
    Ok(Assignment::new(slots))
}

/// Region pairs in full duplex; everyone else on dedicated resources,
/// downlink users first, each group in random order.
pub fn schedule_fdreghdelse<R: Rng + ?Sized>(
    users: &[User],
    db: &IsolationDatabase,
    plan: &ResourcePlan,
    rng: &mut R,
) -> Result<Assignment> {
    validate_users(users)?;
    let mut step1 = pair_across_regions(users, db);
    ensure_capacity(
        step1.pairs.len() + step1.leftover_dl.len() + step1.leftover_ul.len(),
        plan.len(),
    )?;
    step1.leftover_dl.shuffle(rng);
    step1.leftover_ul.shuffle(rng);
    let mut slots = fd_slots(step1.pairs, 0);
    for d in step1.leftover_dl {
        slots.push(Slot::downlink(slots.len(), d));
    }
    for u in step1.leftover_ul {
        slots.push(Slot::uplink(slots.len(), u));
    }
    Ok(Assignment::new(slots))
}

/// Uniformly random downlink/uplink pairing on successive resources.
pub fn schedule_fdrand<R: Rng + ?Sized>(
    users: &[User],
    plan: &ResourcePlan,
    rng: &mut R,
) -> Result<Assignment> {
    validate_users(users)?;
    let (dl, ul) = split_by_direction(users);
    if dl.len() != ul.len() {
        return Err(Error::PoolMismatch {
            dl: dl.len(),
            ul: ul.len(),
        });
    }
    ensure_capacity(dl.len(), plan.len())?;
    let mut dl: Vec<UserId> = dl.iter().map(|u| u.id).collect();
    let mut ul: Vec<UserId> = ul.iter().map(|u| u.id).collect();
    dl.shuffle(rng);
    ul.shuffle(rng);
    Ok(Assignment::new(fd_slots(dl.into_iter().zip(ul), 0)))
}

/// Frequency-division duplex: uplink users on `f1`, downlink users on `f2`,
/// one user per resource, in random order.
pub fn schedule_hd<R: Rng + ?Sized>(
    users: &[User],
    plan: &ResourcePlan,
    rng: &mut R,
) -> Result<Assignment> {
    validate_users(users)?;
    let (dl, ul) = split_by_direction(users);
    ensure_capacity(ul.len(), plan.n_f1())?;
    ensure_capacity(dl.len(), plan.n_f2())?;
    let mut dl: Vec<UserId> = dl.iter().map(|u| u.id).collect();
    let mut ul: Vec<UserId> = ul.iter().map(|u| u.id).collect();
    dl.shuffle(rng);
    ul.shuffle(rng);
    let mut slots: Vec<Slot> = ul.into_iter().enumerate().map(|(i, u)| Slot::uplink(i, u)).collect();
    let f2 = plan.f2_start();
    slots.extend(dl.into_iter().enumerate().map(|(i, d)| Slot::downlink(f2 + i, d)));
    Ok(Assignment::new(slots))
}
