use num_traits::Float;

use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Running mean and sum of squared deviations.
///
/// [`merge`](Welford::merge) uses the symmetric pairwise formulas, so
/// `a.merge(&b)` and `b.merge(&a)` agree bit for bit.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&self, other: &Welford) -> Welford {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let na = self.n as f64;
        let nb = other.n as f64;
        let n = self.n + other.n;
        let nf = n as f64;
        let d = self.mean - other.mean;
        Welford { n, mean: (na * self.mean + nb * other.mean) / nf, m2: (self.m2 + other.m2) + d * d * (na * nb) / nf }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; NaN below two observations.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        self.m2 / (self.n - 1) as f64
    }

    pub fn estimate(&self) -> Result<EstimateWithCI> {
        if self.n < 2 {
            return Err(Error::config("a confidence interval needs at least two replicates"));
        }
        Ok(EstimateWithCI::from_moments(self.mean, self.variance(), self.n))
    }
}

impl FromIterator<f64> for Welford {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut w = Welford::new();
        for x in iter {
            w.push(x);
        }
        w
    }
}

/// Monte Carlo mean with a normal-approximation 95% interval.
///
/// The interval is only meaningful for reasonably many replicates (every
/// shipped experiment uses at least 200).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithCI {
    pub mean: f64,
    /// Sample variance of one replicate.
    pub variance: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub m: u64,
}

impl EstimateWithCI {
    pub fn from_moments(mean: f64, variance: f64, m: u64) -> Self {
        let half = Z_95 * (variance.max(0.0) / m as f64).sqrt();
        EstimateWithCI { mean, variance, ci_low: mean - half, ci_high: mean + half, m }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    pub fn rel_half_width(&self) -> f64 {
        self.half_width() / self.mean.abs()
    }

    pub fn std_error(&self) -> f64 {
        (self.variance / self.m as f64).sqrt()
    }

    /// Multiplies every replicate by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        EstimateWithCI::from_moments(self.mean * k, self.variance * k * k, self.m)
    }

    /// Whether two independent estimates differ by less than the 95% quantile
    /// of their joint standard error.
    pub fn agrees_with(&self, other: &EstimateWithCI) -> bool {
        let se = (self.std_error().powi(2) + other.std_error().powi(2)).sqrt();
        (self.mean - other.mean).abs() <= Z_95 * se
    }
}
