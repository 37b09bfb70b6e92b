use alloc::format;
use alloc::vec::Vec;

use super::user::{split_by_direction, Direction, User, UserId};
use crate::error::{Error, Result};
use crate::propagation::{
    effective_interuser_pathloss, interference_power, link_cost, rate_density, sinr_db,
    EffectivePathloss, LinkBudgetConfig,
};
use crate::radio_map::RadioMap;
use crate::region::IsolationDatabase;

/// Everything needed to evaluate a link: the map for BS links, the database
/// for UE-to-UE floors and the cell's radio parameters.
#[derive(Debug, Clone, Copy)]
pub struct LinkModel<'a> {
    pub map: &'a RadioMap,
    pub db: &'a IsolationDatabase,
    pub cfg: &'a LinkBudgetConfig,
}

impl<'a> LinkModel<'a> {
    pub fn new(map: &'a RadioMap, db: &'a IsolationDatabase, cfg: &'a LinkBudgetConfig) -> Self {
        Self { map, db, cfg }
    }

    pub fn uplink_power_dbm(&self, user: &User) -> f64 {
        user.tx_power_dbm.unwrap_or(self.cfg.ue_tx_power_dbm)
    }

    /// Received power of the user's own link (at the UE for downlink, at
    /// the BS for uplink).
    pub fn signal_dbm(&self, user: &User) -> Result<f64> {
        let loss = self.map.pathloss_at(user.position)?;
        Ok(match user.direction() {
            Direction::Downlink => self.cfg.bs_tx_power_dbm - loss,
            Direction::Uplink => self.uplink_power_dbm(user) - loss,
        })
    }

    /// Interference at `dl` from co-channel uplink user `ul`.
    pub fn interference(
        &self,
        dl: &User,
        ul: &User,
        carrier_mhz: f64,
    ) -> Result<(f64, EffectivePathloss)> {
        let eff = effective_interuser_pathloss(dl.position, ul.position, self.db, carrier_mhz)?;
        Ok((interference_power(self.uplink_power_dbm(ul), &eff), eff))
    }

    /// Downlink SINR with an optional co-channel uplink interferer.
    pub fn downlink_sinr_db(&self, dl: &User, interferer: Option<(&User, f64)>) -> Result<f64> {
        let s = self.signal_dbm(dl)?;
        let i = match interferer {
            Some((ul, carrier)) => Some(self.interference(dl, ul, carrier)?.0),
            None => None,
        };
        Ok(sinr_db(s, self.cfg.noise_floor_dbm, i))
    }

    /// Uplink SINR; self-interference at the BS is cancelled perfectly.
    pub fn uplink_sinr_db(&self, ul: &User) -> Result<f64> {
        Ok(sinr_db(self.signal_dbm(ul)?, self.cfg.noise_floor_dbm, None))
    }

    /// Cost of sharing one resource: summed inverse rates of both users.
    pub fn pair_cost(&self, dl: &User, ul: &User, carrier_mhz: f64) -> Result<f64> {
        let r_dl = rate_density(self.downlink_sinr_db(dl, Some((ul, carrier_mhz)))?);
        let r_ul = rate_density(self.uplink_sinr_db(ul)?);
        Ok(link_cost(r_dl) + link_cost(r_ul))
    }
}

/// Rows are downlink users, columns uplink users.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: Vec<UserId>,
    cols: Vec<UserId>,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: Vec<UserId>, cols: Vec<UserId>, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows.len() * cols.len() {
            return Err(Error::InvalidUsers(format!(
                "cost data has {} entries for a {} x {} matrix",
                data.len(),
                rows.len(),
                cols.len()
            )));
        }
        if let Some(i) = data.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCost {
                row: i / cols.len(),
                col: i % cols.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// A matrix over the first `n_rows` downlink and `n_cols` uplink ids.
    pub fn from_values(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        Self::new(
            (0..n_rows).map(UserId::nth_downlink).collect(),
            (0..n_cols).map(UserId::nth_uplink).collect(),
            data,
        )
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_ids(&self) -> &[UserId] {
        &self.rows
    }

    pub fn col_ids(&self) -> &[UserId] {
        &self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols.len() + col]
    }

    /// Sum of the entries at `(row, col)` pairs, in the order given.
    pub fn total(&self, pairs: &[(usize, usize)]) -> f64 {
        pairs.iter().map(|&(r, c)| self.get(r, c)).sum()
    }
}

/// Pair costs at `carrier_mhz` for all downlink/uplink combinations.
pub fn build_cost_matrix(users: &[User], model: &LinkModel<'_>, carrier_mhz: f64) -> Result<CostMatrix> {
    let (dl, ul) = split_by_direction(users);
    let mut data = Vec::with_capacity(dl.len() * ul.len());
    for d in &dl {
        for u in &ul {
            data.push(model.pair_cost(d, u, carrier_mhz)?);
        }
    }
    CostMatrix::new(
        dl.iter().map(|u| u.id).collect(),
        ul.iter().map(|u| u.id).collect(),
        data,
    )
}
