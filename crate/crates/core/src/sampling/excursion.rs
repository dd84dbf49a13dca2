use alloc::vec::Vec;

use num_traits::Float;
use rand_distr::{Distribution, StandardNormal};

use super::RandomStream;
use crate::{Error, Result};

/// A normalised excursion sampled on the grid `k/n`, `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcursionPath {
    values: Vec<f64>,
}

impl ExcursionPath {
    /// Wraps explicit levels `e_0..e_n`. Endpoints must be exactly zero and the
    /// interior strictly positive.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::config("an excursion needs at least two cells"));
        }
        if values[0] != 0.0 || values[values.len() - 1] != 0.0 {
            return Err(Error::config("excursion endpoints must be 0"));
        }
        let interior = &values[1..values.len() - 1];
        if let Some(v) = interior.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::config(alloc::format!("excursion interior must be finite and positive, found {v}")));
        }
        Ok(ExcursionPath { values })
    }

    /// Number of unit cells.
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Trapezoid rule for the area under the path.
    pub fn area(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.n() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Brownian bridge on `{0..n}` rotated at its minimum (Vervaat transform).
pub fn sample_brownian_excursion(n: usize, stream: RandomStream) -> Result<ExcursionPath> {
    if n < 2 {
        return Err(Error::config("excursion resolution n must be at least 2"));
    }
    let mut rng = stream.rng();
    let scale = 1.0 / (n as f64).sqrt();
    let mut walk = Vec::with_capacity(n + 1);
    loop {
        walk.clear();
        walk.push(0.0);
        let mut w = 0.0;
        for _ in 0..n {
            let z: f64 = StandardNormal.sample(&mut rng);
            w += z * scale;
            walk.push(w);
        }
        let end = walk[n];
        let mut argmin = 0;
        let mut min = 0.0;
        for (k, v) in walk.iter_mut().enumerate().take(n) {
            *v -= end * (k as f64 / n as f64);
            if *v < min {
                min = *v;
                argmin = k;
            }
        }
        let mut values = Vec::with_capacity(n + 1);
        values.push(0.0);
        values.extend(walk[argmin + 1..n].iter().chain(&walk[..argmin]).map(|w| w - min));
        values.push(0.0);
        // A second exact minimum would leave an interior zero; redraw.
        if values[1..n].iter().all(|v| *v > 0.0) {
            return Ok(ExcursionPath { values });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cells() {
        let p = sample_brownian_excursion(2, RandomStream::new(42, 3)).unwrap();
        assert_eq!(p.values().len(), 3);
        assert_eq!(p.values()[0], 0.0);
        assert_eq!(p.values()[2], 0.0);
        assert!(p.values()[1] > 0.0);
    }

    #[test]
    fn rejects_tiny_grid() {
        assert!(matches!(sample_brownian_excursion(1, RandomStream::new(42, 0)), Err(Error::Config(_))));
    }

    #[test]
    fn reproducible() {
        let a = sample_brownian_excursion(1000, RandomStream::new(42, 4)).unwrap();
        let b = sample_brownian_excursion(1000, RandomStream::new(42, 4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn validates_explicit_paths() {
        assert!(ExcursionPath::new(alloc::vec![0.0, 1.0, 0.0]).is_ok());
        assert!(ExcursionPath::new(alloc::vec![0.0, 0.0, 1.0, 0.0]).is_err());
        assert!(ExcursionPath::new(alloc::vec![0.1, 1.0, 0.0]).is_err());
    }

    #[test]
    fn range_of_maximum() {
        let n = 1 << 16;
        for id in 0..50 {
            let p = sample_brownian_excursion(n, RandomStream::new(42, id)).unwrap();
            let max = p.max();
            assert!(max > 0.2 && max < 4.0, "max {max}");
        }
    }
}
