//! Core algorithms for counting large faces of random laminations of the disk
//! and large dislocations of self-similar fragmentations.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that touches the file
//! system, threads or the command line lives in the `largeface` companion crate.
//!
//! Layout:
//!
//! - [`sampling`]: counter-based random streams, discretised Brownian excursions
//!   and jump sets of stable subordinators.
//! - [`lamination`]: the min-split tree of an excursion (one record per
//!   triangle), triangle metrics, large-triangle counts, the centroid and the
//!   level functional.
//! - [`fragmentation`]: an event-driven simulator for binary conservative
//!   self-similar fragmentations with truncated dislocation measures.
//! - [`theory`]: special functions, quadrature and every closed form the
//!   simulations are checked against.
//! - [`stats`]: Welford aggregation, ε-sweeps, Kolmogorov-Smirnov distances and
//!   ratio diagnostics.
#![no_std]
// Float methods come from `num_traits::Float` (backed by libm). Whenever std is
// part of the build its inherent methods take over and the imports look unused.
#![allow(unused_imports)]
// `!(x > 0.0)` is how NaN gets rejected alongside the range check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod error;
pub mod fragmentation;
pub mod lamination;
pub mod mark;
pub mod sampling;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use mark::{Mark, Psi};
pub use sampling::RandomStream;
