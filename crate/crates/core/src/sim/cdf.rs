use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Empirical distribution over a sorted sample vector.
///
/// Quantiles use the midpoint convention: with `n` samples and `h = q * n`,
/// an integral `h = k` strictly inside `(0, n)` averages the `k`-th and
/// `(k+1)`-th order statistics; otherwise the `ceil(h)`-th is returned
/// (clamped to the first and last samples).
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CdfSeries {
    samples: Vec<f64>,
}

/// Sorts `samples` (NaNs are dropped) into a series.
pub fn compute_cdf(mut samples: Vec<f64>) -> CdfSeries {
    samples.retain(|x| !x.is_nan());
    samples.sort_by(f64::total_cmp);
    CdfSeries { samples }
}

impl CdfSeries {
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn query(&self, q: f64) -> Option<f64> {
        let n = self.samples.len();
        if n == 0 || !(0.0..=1.0).contains(&q) {
            return None;
        }
        let h = q * n as f64;
        let k = libm::floor(h);
        if h == k && k > 0.0 && (k as usize) < n {
            let k = k as usize;
            return Some(0.5 * (self.samples[k - 1] + self.samples[k]));
        }
        let idx = (libm::ceil(h) as usize).clamp(1, n);
        Some(self.samples[idx - 1])
    }

    pub fn median(&self) -> Option<f64> {
        self.query(0.5)
    }

    /// Fraction of samples exactly equal to `x`.
    pub fn mass_at(&self, x: f64) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        let lo = self.samples.partition_point(|&s| s < x);
        let hi = self.samples.partition_point(|&s| s <= x);
        (hi - lo) as f64 / self.samples.len() as f64
    }

    /// Fraction of samples at or below `x`.
    pub fn cdf_at(&self, x: f64) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.partition_point(|&s| s <= x) as f64 / self.samples.len() as f64
    }

    /// Fraction of samples strictly above `x`.
    pub fn fraction_above(&self, x: f64) -> f64 {
        if self.samples.is_empty() {
            0.0
        } else {
            1.0 - self.cdf_at(x)
        }
    }

    pub fn merge(&self, other: &CdfSeries) -> CdfSeries {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.samples, &other.samples);
        while i < a.len() && j < b.len() {
            if a[i].total_cmp(&b[j]).is_le() {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        CdfSeries { samples: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn median_of_three() {
        assert_eq!(compute_cdf(vec![3.0, 1.0, 2.0]).median(), Some(2.0));
    }

    #[test]
    fn median_of_four_averages() {
        assert_eq!(compute_cdf(vec![4.0, 1.0, 3.0, 2.0]).median(), Some(2.5));
    }

    #[test]
    fn extremes() {
        let c = compute_cdf(vec![5.0, 1.0, 3.0]);
        assert_eq!(c.query(0.0), Some(1.0));
        assert_eq!(c.query(1.0), Some(5.0));
        assert_eq!(c.query(1.5), None);
        assert_eq!(CdfSeries::default().median(), None);
    }

    #[test]
    fn constant_mass() {
        let c = compute_cdf(vec![7.0; 5]);
        assert_eq!(c.mass_at(7.0), 1.0);
        assert_eq!(c.mass_at(7.5), 0.0);
        assert_eq!(c.fraction_above(6.0), 1.0);
        assert_eq!(c.fraction_above(7.0), 0.0);
    }

    #[test]
    fn merge_equals_concatenation() {
        let a = compute_cdf(vec![1.0, 5.0, 3.0]);
        let b = compute_cdf(vec![2.0, 4.0, 3.0]);
        assert_eq!(a.merge(&b), compute_cdf(vec![1.0, 5.0, 3.0, 2.0, 4.0, 3.0]));
    }
}
