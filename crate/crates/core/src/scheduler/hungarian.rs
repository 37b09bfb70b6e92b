//! Minimum-cost perfect matching on a square matrix (Hungarian method with
//! row/column potentials, O(n^3)).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Solves the square assignment problem for the row-major `n x n` matrix.
///
/// Returns `col_of_row`, a permutation minimizing the total cost.
pub fn hungarian(cost: &[f64], n: usize) -> Result<Vec<usize>> {
    assert_eq!(cost.len(), n * n, "cost matrix must be n x n");
    if let Some(i) = cost.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFiniteCost {
            row: i / n.max(1),
            col: i % n.max(1),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    // 1-based with a virtual column 0, following the classic formulation
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of_row = vec![0; n];
    for j in 1..=n {
        col_of_row[row_of[j] - 1] = j - 1;
    }
    Ok(col_of_row)
}
