//! Streaming statistics and Monte Carlo drivers.

mod histogram;
mod ks;
pub mod montecarlo;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use histogram::{fmt_float, Histogram, Normalization};
pub use ks::{ks_distance, ks_distance_cdf};
pub use montecarlo::{
    charpoly_magnitudes, charpoly_second_moment, first_eigenangles, nearest_neighbor_spacings,
    one_level_density_mc, one_level_range, pair_correlation_mc, spacings_mc, FirstEigenangles,
    McConfig,
};

/// Count, sum, sum of squares, min and max of a stream.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Accumulator {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
    pub min: f64,
    pub max: f64,
}

impl Default for Accumulator {
    fn default() -> Self {
        Accumulator::new()
    }
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator {
            count: 0,
            sum: 0.0,
            sum_sq: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    pub fn add(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn merge(&mut self, other: &Accumulator) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let n = self.count as f64;
        ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    pub fn standard_error(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

impl FromIterator<f64> for Accumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Accumulator::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Divides every sample by the sample mean.
pub fn mean_normalize(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::invalid("cannot normalize an empty sample"));
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(Error::invalid(format!("sample mean must be positive, got {mean}")));
    }
    Ok(samples.iter().map(|x| x / mean).collect())
}

/// Mean-one density histogram of `samples` over `[0, hi]`.
pub fn mean_one_histogram(samples: &[f64], hi: f64, bins: usize) -> Result<Histogram> {
    let mut h = Histogram::uniform(0.0, hi, bins, Normalization::MeanOneDensity)?;
    for x in mean_normalize(samples)? {
        h.add(x);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_normalize_examples() {
        assert_eq!(mean_normalize(&[2.0, 2.0, 2.0]).unwrap(), vec![1.0, 1.0, 1.0]);
        assert_eq!(mean_normalize(&[1.0, 3.0]).unwrap(), vec![0.5, 1.5]);
        assert!(mean_normalize(&[]).is_err());
        assert!(mean_normalize(&[-1.0, 0.5]).is_err());
    }

    #[test]
    fn accumulator_moments() {
        let acc: Accumulator = [1.0, 2.0, 3.0, 4.0].into_iter().collect();
        assert_eq!(acc.count, 4);
        assert_eq!(acc.mean(), 2.5);
        assert!((acc.variance() - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!((acc.min, acc.max), (1.0, 4.0));
    }
}
