use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::{DislocationLaw, Simulation};
use crate::mark::Psi;
use crate::stats::sweep::check_eps_grid;
use crate::{Error, Result};

/// Checks that neither the truncation of the law nor the mass cutoff can hide
/// a dislocation with `ψ > eps`.
fn check_counting_preconditions(sim: &Simulation, psi: &Psi, eps: f64) -> Result<()> {
    if !(eps > 0.0) {
        return Err(Error::domain("eps must be positive"));
    }
    if !sim.law.is_lossless() {
        let dp = sim.law.delta_prime();
        match psi.smaller_fragment_bound() {
            Some(k) if k * dp <= eps => {}
            Some(k) => {
                return Err(Error::config(alloc::format!(
                    "truncation δ' = {dp} can drop {} dislocations with ψ up to {}·δ' = {} > ε = {eps}; use δ' ≤ {}",
                    psi.name(),
                    k,
                    k * dp,
                    eps / k
                )))
            }
            None => {
                return Err(Error::config(alloc::format!(
                    "ψ = {} is not bounded by a multiple of 1-s₁, so no truncation of the law is safe",
                    psi.name()
                )))
            }
        }
    }
    let needed = psi.min_relevant_mass(eps);
    if sim.mass_cutoff > needed {
        return Err(Error::config(alloc::format!(
            "mass cutoff {} freezes fragments that can still carry ε = {eps} large {} dislocations; use a cutoff ≤ {needed}",
            sim.mass_cutoff,
            psi.name()
        )));
    }
    Ok(())
}

/// Number of simulated dislocations with `ψ > eps`.
pub fn count_large_events(sim: &Simulation, psi: &Psi, eps: f64) -> Result<u64> {
    check_counting_preconditions(sim, psi, eps)?;
    Ok(sim.events.iter().filter(|e| psi.eval(&e.mark()) > eps).count() as u64)
}

/// [`count_large_events`] over a strictly increasing grid.
pub fn count_large_events_sweep(sim: &Simulation, psi: &Psi, eps_grid: &[f64]) -> Result<Vec<u64>> {
    check_eps_grid(eps_grid)?;
    check_counting_preconditions(sim, psi, eps_grid[0])?;
    let mut hist = vec![0u64; eps_grid.len() + 1];
    for e in &sim.events {
        let v = psi.eval(&e.mark());
        hist[eps_grid.partition_point(|x| *x < v)] += 1;
    }
    let mut out = vec![0u64; eps_grid.len()];
    let mut acc = 0;
    for j in (0..eps_grid.len()).rev() {
        acc += hist[j + 1];
        out[j] = acc;
    }
    Ok(out)
}

/// Exponent λ with `ε^λ N(ε)` converging: `1/b` when `ab < 1`, `a` when
/// `ab > 1`. The critical case `ab = 1` carries a logarithmic correction and is
/// rejected, as are functionals without a mass exponent.
pub fn scaling_exponent(law: &DislocationLaw, psi: &Psi) -> Result<f64> {
    let b = psi.mass_exponent().ok_or_else(|| {
        Error::config(alloc::format!("ψ = {} has no mass exponent; give the scaling exponent", psi.name()))
    })?;
    let a = law.tail_exponent();
    let ab = a * b;
    if (ab - 1.0).abs() < 1e-12 {
        return Err(Error::config(alloc::format!(
            "a·b = 1 is the critical case (a = {a}, b = {b}); give the scaling exponent explicitly"
        )));
    }
    Ok(if ab < 1.0 { 1.0 / b } else { a })
}

/// `Σ(p) = ∫_0^∞ Σ_i X_i(t)^p dt` on the homogeneous clock.
///
/// Simulated fragments contribute `mass^p × lifetime`. A frozen fragment of
/// mass `m` contributes its expected remaining integral `m^p / Φ(p-1)`, where
/// `Φ` is the Laplace exponent of the simulated (truncated) law.
pub fn sigma_p(sim: &Simulation, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::domain(alloc::format!("Σ(p) needs p > 1, got {p}")));
    }
    let live: f64 = sim.events.iter().map(|e| e.parent_mass.powf(p) * e.lifetime_homog).sum();
    if sim.frozen.is_empty() {
        return Ok(live);
    }
    let phi = sim.law.laplace_exponent(p - 1.0)?;
    let frozen: f64 = sim.frozen.iter().map(|f| f.mass.powf(p)).sum();
    Ok(live + frozen / phi)
}

/// Both sides of the index-change identity
/// `Σ f(m) τ_homog = Σ m^α f(m) τ_selfsim` for one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexChangeReport {
    pub homogeneous: f64,
    pub self_similar: f64,
}

impl IndexChangeReport {
    pub fn rel_diff(&self) -> f64 {
        (self.homogeneous - self.self_similar).abs() / self.homogeneous.abs().max(f64::MIN_POSITIVE)
    }

    pub fn holds(&self, rel_tol: f64) -> bool {
        self.rel_diff() <= rel_tol
    }
}

/// Evaluates both sides of the index-change identity. Frozen fragments enter
/// with the mean residual lifetime `1/λ` on the homogeneous clock and the
/// correspondingly rescaled one on the self-similar clock.
pub fn index_change_check<F: Fn(f64) -> f64>(sim: &Simulation, f: F) -> IndexChangeReport {
    let alpha = sim.alpha;
    let mut homogeneous = 0.0;
    let mut self_similar = 0.0;
    for e in &sim.events {
        let m = e.parent_mass;
        homogeneous += f(m) * e.lifetime_homog;
        self_similar += m.powf(alpha) * f(m) * e.lifetime_selfsim;
    }
    let residual = 1.0 / sim.law.total_rate();
    for z in &sim.frozen {
        let m = z.mass;
        homogeneous += f(m) * residual;
        self_similar += m.powf(alpha) * f(m) * (residual * m.powf(-alpha));
    }
    IndexChangeReport { homogeneous, self_similar }
}
