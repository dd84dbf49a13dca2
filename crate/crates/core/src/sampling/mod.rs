//! Random streams and the two path samplers everything else is built on.

mod excursion;
pub(crate) mod stable;
mod stream;

pub use excursion::{sample_brownian_excursion, ExcursionPath};
pub use stable::{sample_stable_jumps, stable_jump_constant, StableJumpSample};
pub use stream::{derive_stream, RandomStream, StreamRng};
