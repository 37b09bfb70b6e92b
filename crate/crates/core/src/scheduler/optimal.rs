use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::assignment::{Assignment, Slot};
use super::cost::{build_cost_matrix, CostMatrix, LinkModel};
use super::hungarian::hungarian;
use super::resources::ResourcePlan;
use super::user::{split_by_direction, validate_users, User};
use crate::error::{Error, Result};

/// Result of the optimal downlink/uplink matching, by matrix index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// `(row, col)` in ascending row order.
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_rows: Vec<usize>,
    pub unmatched_cols: Vec<usize>,
}

/// Minimum-cost matching of rows to columns.
///
/// Unequal sides are padded to a square matrix with a sentinel of ten times
/// the largest magnitude entry. Every perfect matching uses the same number
/// of sentinel cells, so the sentinel value does not bias the real pairs;
/// rows or columns matched to padding are reported as unmatched.
pub fn optimal_matching(cost: &CostMatrix) -> Result<Matching> {
    let (nr, nc) = (cost.n_rows(), cost.n_cols());
    let n = nr.max(nc);
    let max_abs = cost.values().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let sentinel = if max_abs > 0.0 { 10.0 * max_abs } else { 1.0 };
    let mut square = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            square.push(if r < nr && c < nc { cost.get(r, c) } else { sentinel });
        }
    }
    let col_of_row = hungarian(&square, n)?;
    let mut m = Matching {
        pairs: Vec::new(),
        unmatched_rows: Vec::new(),
        unmatched_cols: Vec::new(),
    };
    for (r, &c) in col_of_row.iter().enumerate() {
        match (r < nr, c < nc) {
            (true, true) => m.pairs.push((r, c)),
            (true, false) => m.unmatched_rows.push(r),
            (false, true) => m.unmatched_cols.push(c),
            (false, false) => {}
        }
    }
    m.unmatched_cols.sort_unstable();
    Ok(m)
}

fn take_resources(plan: &ResourcePlan, needed: usize) -> Result<()> {
    if needed > plan.len() {
        return Err(Error::Capacity {
            needed,
            available: plan.len(),
        });
    }
    Ok(())
}

/// Maps the optimal matching onto resources: full-duplex pairs on ascending
/// indices from 0, then unmatched downlink and unmatched uplink users on
/// dedicated resources.
pub fn solve_optimal(cost: &CostMatrix, plan: &ResourcePlan) -> Result<Assignment> {
    let m = optimal_matching(cost)?;
    take_resources(plan, m.pairs.len() + m.unmatched_rows.len() + m.unmatched_cols.len())?;
    let rows = cost.row_ids();
    let cols = cost.col_ids();
    let mut slots = Vec::new();
    for &(r, c) in &m.pairs {
        slots.push(Slot::full_duplex(slots.len(), rows[r], cols[c]));
    }
    for &r in &m.unmatched_rows {
        slots.push(Slot::downlink(slots.len(), rows[r]));
    }
    for &c in &m.unmatched_cols {
        slots.push(Slot::uplink(slots.len(), cols[c]));
    }
    Ok(Assignment::new(slots))
}

/// Builds the band-center cost matrix and solves it.
pub fn schedule_optimal(users: &[User], model: &LinkModel<'_>, plan: &ResourcePlan) -> Result<Assignment> {
    validate_users(users)?;
    let carrier = plan.band(super::resources::Band::F1).center_mhz();
    solve_optimal(&build_cost_matrix(users, model, carrier)?, plan)
}

/// Optimal scheduling with per-resource carriers, in two stages.
///
/// Stage one pairs users with the band-center matching. Stage two places the
/// chosen pairs on resources by a second matching whose costs are evaluated
/// at each resource's own center frequency. Unpaired users take the lowest
/// unused indices. The result is exact for the pairing at band center and
/// optimal for resource placement given that pairing.
pub fn schedule_optimal_per_resource(
    users: &[User],
    model: &LinkModel<'_>,
    plan: &ResourcePlan,
) -> Result<Assignment> {
    validate_users(users)?;
    let carrier = plan.band(super::resources::Band::F1).center_mhz();
    let cost = build_cost_matrix(users, model, carrier)?;
    let m = optimal_matching(&cost)?;
    take_resources(plan, m.pairs.len() + m.unmatched_rows.len() + m.unmatched_cols.len())?;
    if m.pairs.len() > plan.n_f1() {
        return Err(Error::Capacity {
            needed: m.pairs.len(),
            available: plan.n_f1(),
        });
    }
    let (dl, ul) = split_by_direction(users);
    let n_res = plan.n_f1();
    let mut data = Vec::with_capacity(m.pairs.len() * n_res);
    for &(r, c) in &m.pairs {
        for f in 0..n_res {
            // safe: f < n_f1 lies in the plan
            let center = plan.get(f).map(|x| x.center_mhz).unwrap_or(carrier);
            data.push(model.pair_cost(dl[r], ul[c], center)?);
        }
    }
    let placement = optimal_matching(&CostMatrix::from_values(m.pairs.len(), n_res, data)?)?;

    let mut slots = Vec::new();
    let mut used = BTreeSet::new();
    for &(p, f) in &placement.pairs {
        let (r, c) = m.pairs[p];
        slots.push(Slot::full_duplex(f, cost.row_ids()[r], cost.col_ids()[c]));
        used.insert(f);
    }
    let mut free = (0..plan.len()).filter(|f| !used.contains(f));
    for &r in &m.unmatched_rows {
        let f = free.next().ok_or(Error::Capacity {
            needed: slots.len() + 1,
            available: plan.len(),
        })?;
        slots.push(Slot::downlink(f, cost.row_ids()[r]));
    }
    for &c in &m.unmatched_cols {
        let f = free.next().ok_or(Error::Capacity {
            needed: slots.len() + 1,
            available: plan.len(),
        })?;
        slots.push(Slot::uplink(f, cost.col_ids()[c]));
    }
    slots.sort_by_key(|s| s.resource);
    Ok(Assignment::new(slots))
}
