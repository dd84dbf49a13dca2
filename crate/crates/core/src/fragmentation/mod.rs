//! Event-driven simulation of binary conservative self-similar fragmentations
//! and the functionals read off a simulated path.

mod counting;
mod law;
mod sim;

pub use counting::{
    count_large_events, count_large_events_sweep, index_change_check, scaling_exponent, sigma_p, IndexChangeReport,
};
pub use law::{DislocationLaw, LawKind, PowerTail};
pub use sim::{simulate, FragConfig, FragEvent, FrozenFragment, Simulation};
