use alloc::vec::Vec;

use num_traits::Float;

use super::EstimateWithCI;
use crate::{Error, Result};

/// Per-replicate counts of large events over an increasing ε grid.
///
/// Counts are accumulated as exact integers, so the aggregate does not depend
/// on the order replicates arrive in.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSweep {
    eps_grid: Vec<f64>,
    exponent: f64,
    counts: Vec<Vec<u64>>,
}

/// `ε^λ N(ε)` aggregated over replicates at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub eps: f64,
    pub estimate: EstimateWithCI,
}

/// Rejects grids that are empty, non-positive or not strictly increasing.
pub(crate) fn check_eps_grid(eps_grid: &[f64]) -> Result<()> {
    if eps_grid.is_empty() {
        return Err(Error::config("the ε grid is empty"));
    }
    if eps_grid.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::config("ε values must be positive and finite"));
    }
    if eps_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("the ε grid must be strictly increasing"));
    }
    Ok(())
}

impl EpsilonSweep {
    pub fn new(eps_grid: Vec<f64>, exponent: f64) -> Result<Self> {
        check_eps_grid(&eps_grid)?;
        if !exponent.is_finite() {
            return Err(Error::config("scaling exponent must be finite"));
        }
        Ok(EpsilonSweep { eps_grid, exponent, counts: Vec::new() })
    }

    /// Adds one replicate. The row must be non-increasing in ε.
    pub fn push(&mut self, row: Vec<u64>) -> Result<()> {
        if row.len() != self.eps_grid.len() {
            return Err(Error::config("count row length differs from the ε grid"));
        }
        if row.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::domain("counts must be non-increasing in ε"));
        }
        self.counts.push(row);
        Ok(())
    }

    pub fn eps_grid(&self) -> &[f64] {
        &self.eps_grid
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn replicates(&self) -> usize {
        self.counts.len()
    }

    /// `ε^λ` at grid index `j`.
    pub fn scale(&self, j: usize) -> f64 {
        self.eps_grid[j].powf(self.exponent)
    }

    /// `ε^λ N(ε)` for replicate `i`, grid index `j`.
    pub fn scaled(&self, i: usize, j: usize) -> f64 {
        self.scale(j) * self.counts[i][j] as f64
    }

    pub fn aggregate(&self) -> Result<Vec<SweepPoint>> {
        let m = self.counts.len();
        if m < 2 {
            return Err(Error::config("aggregation needs at least two replicates"));
        }
        let mut out = Vec::with_capacity(self.eps_grid.len());
        for (j, &eps) in self.eps_grid.iter().enumerate() {
            let mut sum: u128 = 0;
            let mut sum_sq: u128 = 0;
            for row in &self.counts {
                let c = row[j] as u128;
                sum += c;
                sum_sq += c * c;
            }
            let mf = m as f64;
            // M Σc² - (Σc)² is exact in integers.
            let centred = (m as u128) * sum_sq - sum * sum;
            let var_counts = centred as f64 / (mf * (mf - 1.0));
            let mean_counts = sum as f64 / mf;
            let k = self.scale(j);
            out.push(SweepPoint {
                eps,
                estimate: EstimateWithCI::from_moments(k * mean_counts, k * k * var_counts, m as u64),
            });
        }
        Ok(out)
    }
}
