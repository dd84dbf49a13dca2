use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Float;
use rand_distr::{Distribution, Exp1};

use super::DislocationLaw;
use crate::mark::{Mark, Psi};
use crate::sampling::RandomStream;
use crate::stats::sweep::check_eps_grid;
use crate::{Error, Result};

/// Everything a fragmentation run needs.
#[derive(Debug, Clone)]
pub struct FragConfig {
    /// Index of self-similarity: a fragment of mass `m` splits at rate
    /// `m^α λ(δ')`.
    pub alpha: f64,
    pub law: DislocationLaw,
    /// Fragments lighter than this are frozen instead of simulated.
    pub mass_cutoff: f64,
    pub psi: Psi,
    pub eps_grid: Vec<f64>,
    pub max_events: usize,
}

impl FragConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::config("alpha must be finite"));
        }
        if !(self.mass_cutoff > 0.0 && self.mass_cutoff < 1.0) {
            return Err(Error::config("mass_cutoff must lie in (0, 1)"));
        }
        if self.max_events == 0 {
            return Err(Error::config("max_events must be positive"));
        }
        check_eps_grid(&self.eps_grid)
    }
}

/// One split. Times are those of the split itself on both clocks; the
/// lifetimes are those of the fragment that split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FragEvent {
    pub time_homog: f64,
    pub time_selfsim: f64,
    pub parent_mass: f64,
    pub s1: f64,
    pub child_masses: [f64; 2],
    pub psi_value: f64,
    pub lifetime_homog: f64,
    pub lifetime_selfsim: f64,
}

impl FragEvent {
    pub fn mark(&self) -> Mark {
        Mark::new(self.parent_mass, self.s1)
    }
}

/// A fragment that fell below the mass cutoff and was not simulated further.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrozenFragment {
    pub mass: f64,
    pub birth_homog: f64,
    pub birth_selfsim: f64,
}

/// A simulated path: every split in order of homogeneous time plus the
/// frozen remainder.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub events: Vec<FragEvent>,
    pub frozen: Vec<FrozenFragment>,
    pub alpha: f64,
    pub mass_cutoff: f64,
    pub law: DislocationLaw,
    pub psi: Psi,
}

impl Simulation {
    /// Total frozen mass; 1 up to rounding for conservative laws.
    pub fn frozen_mass(&self) -> f64 {
        self.frozen.iter().map(|f| f.mass).sum()
    }
}

struct Live {
    death_homog: f64,
    seq: u64,
    mass: f64,
    birth_homog: f64,
    birth_selfsim: f64,
}

impl PartialEq for Live {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Live {}

impl PartialOrd for Live {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Live {
    // Reversed so the max-heap pops the earliest death first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.death_homog.total_cmp(&self.death_homog).then(other.seq.cmp(&self.seq))
    }
}

/// Runs one path.
///
/// Every live fragment gets an exponential lifetime of rate `λ(δ')` on the
/// homogeneous clock; its self-similar lifetime is that value times `m^{-α}`.
/// Both clocks therefore describe the same split tree, which is what makes the
/// index change exact on every path.
pub fn simulate(config: &FragConfig, stream: RandomStream) -> Result<Simulation> {
    config.validate()?;
    let law = &config.law;
    let rate = law.total_rate();
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::config("total rate of the dislocation law is not finite"));
    }
    let mut rng = stream.rng();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut events = Vec::new();
    let mut frozen = Vec::new();
    let first: f64 = Exp1.sample(&mut rng);
    heap.push(Live { death_homog: first / rate, seq, mass: 1.0, birth_homog: 0.0, birth_selfsim: 0.0 });
    while let Some(live) = heap.pop() {
        if events.len() >= config.max_events {
            return Err(Error::SimulationAborted {
                events: events.len(),
                reason: alloc::format!(
                    "max_events = {} reached with {} fragments alive; raise max_events or mass_cutoff",
                    config.max_events,
                    heap.len() + 1
                ),
            });
        }
        let m = live.mass;
        let life_h = live.death_homog - live.birth_homog;
        let life_s = life_h * m.powf(-config.alpha);
        let death_s = live.birth_selfsim + life_s;
        let s1 = law.sample_s1(&mut rng);
        let c1 = m * s1;
        // Exact by Sterbenz since c1 ≥ m/2.
        let c2 = m - c1;
        let mark = Mark::new(m, s1);
        events.push(FragEvent {
            time_homog: live.death_homog,
            time_selfsim: death_s,
            parent_mass: m,
            s1,
            child_masses: [c1, c2],
            psi_value: config.psi.eval(&mark),
            lifetime_homog: life_h,
            lifetime_selfsim: life_s,
        });
        for c in [c1, c2] {
            if c < config.mass_cutoff {
                frozen.push(FrozenFragment { mass: c, birth_homog: live.death_homog, birth_selfsim: death_s });
            } else {
                seq += 1;
                let e: f64 = Exp1.sample(&mut rng);
                heap.push(Live {
                    death_homog: live.death_homog + e / rate,
                    seq,
                    mass: c,
                    birth_homog: live.death_homog,
                    birth_selfsim: death_s,
                });
            }
        }
    }
    Ok(Simulation {
        events,
        frozen,
        alpha: config.alpha,
        mass_cutoff: config.mass_cutoff,
        law: law.clone(),
        psi: config.psi.clone(),
    })
}
