//! Aggregation of replicate results: means with confidence intervals,
//! ε-sweeps, Kolmogorov-Smirnov distances and ratio diagnostics.

mod ks;
mod ratio;
pub(crate) mod sweep;
mod welford;

pub use ks::ks_distance;
pub use ratio::{pearson, ratio_diagnostic, RatioRow, RatioTarget};
pub use sweep::{EpsilonSweep, SweepPoint};
pub use welford::{EstimateWithCI, Welford, Z_95};
