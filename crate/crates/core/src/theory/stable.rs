//! Laws attached to the β-stable subordinator: Laplace exponent and renewal
//! density of the tagged fragment, the largest jump, and the Monte Carlo
//! estimators for the longest-chord constants of stable laminations.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use rand_distr::{Distribution, Gamma};

use super::brownian::renewal_laplace;
use super::quad::{integrate, QuadratureSpec};
use super::special::gamma;
use crate::sampling::stable::{check_beta_delta, stable_jumps_from, truncated_subordinator_at};
use crate::sampling::{stable_jump_constant, RandomStream, StableJumpSample};
use crate::stats::{EstimateWithCI, Welford};
use crate::{Error, Result};

pub fn c_beta(beta: f64) -> f64 {
    stable_jump_constant(beta)
}

/// `D_β = β²Γ(2-1/β)/Γ(2-β)`.
pub fn d_beta(beta: f64) -> f64 {
    beta * beta * gamma(2.0 - 1.0 / beta) / gamma(2.0 - beta)
}

/// Laplace exponent of the stable tagged fragment, `βΓ(p+1-1/β)/Γ(p)`.
pub fn phi_stable(beta: f64, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain(alloc::format!("Φ needs p > 0, got {p}")));
    }
    Ok(beta * gamma(p + 1.0 - 1.0 / beta) / gamma(p))
}

/// `C_β (1-e^{-x})^{-1/β}`.
pub fn u_density_stable(beta: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    c_beta(beta) * (-(-x).exp_m1()).powf(-1.0 / beta)
}

/// `∫ e^{-px} dU(x)` by quadrature; equals `1/Φ(p)`.
pub fn u_laplace_stable(beta: f64, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    renewal_laplace(c_beta(beta), 1.0 / beta, p, spec)
}

/// `P(Δ₁ ≤ y) = exp(-y^{-1/β}/Γ(1-1/β))`.
pub fn delta1_cdf(beta: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    (-(y.powf(-1.0 / beta)) / gamma(1.0 - 1.0 / beta)).exp()
}

/// `E[T₁^{1-1/β}] = Γ(2-β)/Γ(1/β)`.
pub fn t1_moment_target(beta: f64) -> f64 {
    gamma(2.0 - beta) / gamma(1.0 / beta)
}

/// `2π(β-1)/Γ(2-β)`, the factor in front of `E[min(T₁-Δ₁, Δ₁)]`.
pub fn stable_face_prefactor(beta: f64) -> f64 {
    2.0 * PI * (beta - 1.0) / gamma(2.0 - beta)
}

/// One replicate of `min(T₁ - Δ₁, Δ₁)`.
pub fn stable_face_sample(beta: f64, delta: f64, stream: RandomStream) -> Result<f64> {
    check_beta_delta(beta, delta)?;
    let s = stable_jumps_from(beta, delta, &mut stream.rng());
    Ok((s.t1 - s.delta1).min(s.delta1))
}

/// Limit of `ε^{...}`-scaled large-face counts in the stable lamination:
/// `2π(β-1)/Γ(2-β) E[min(T₁-Δ₁, Δ₁)]`, estimated over streams `(seed, 0..m)`.
pub fn stable_face_constant(beta: f64, m: u64, delta: f64, seed: u64) -> Result<EstimateWithCI> {
    check_beta_delta(beta, delta)?;
    let mut w = Welford::new();
    for i in 0..m {
        w.push(stable_face_sample(beta, delta, RandomStream::new(seed, i))?);
    }
    Ok(w.estimate()?.scaled(stable_face_prefactor(beta)))
}

/// `D_β E[T₁ (1 - Σ (Δᵢ/T₁)^{p+1})]` for one sample, before averaging. Its
/// mean is `Φ_β(p)` up to the truncation of the small jumps.
pub fn nu_beta_phi_sample(sample: &StableJumpSample, p: f64) -> f64 {
    let t = sample.t1;
    let s: f64 = sample.jumps.iter().map(|j| (j / t).powf(p + 1.0)).sum();
    d_beta(sample.beta) * t * (1.0 - s)
}

/// Monte Carlo estimators of the stable longest-chord CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordEstimator {
    /// Average of `T₁ ∫_{Δ₁/(aT₁) ∨ 1}^{1/(1-a)} (1-1/x)^{-1/β} dx` over jump
    /// samples. Unbiased but with infinite variance: the summand has a tail of
    /// index `2/β`, so it degrades sharply as β approaches 2.
    Direct,
    /// The same expectation after integrating the largest jump and one
    /// size-biased jump out analytically. What is left is an average of a
    /// bounded function of a light-tailed subordinator at a Gamma time.
    Conditioned,
}

impl ChordEstimator {
    pub fn name(&self) -> &'static str {
        match self {
            ChordEstimator::Direct => "direct",
            ChordEstimator::Conditioned => "conditioned",
        }
    }
}

impl core::str::FromStr for ChordEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(ChordEstimator::Direct),
            "conditioned" => Ok(ChordEstimator::Conditioned),
            other => Err(Error::config(alloc::format!("unknown chord estimator '{other}'"))),
        }
    }
}

/// Parameters shared by all replicates of a stable chord estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct StableChordSetup {
    pub beta: f64,
    /// Points `a ∈ (0, 1/2)` at which `P(L < a)` is wanted.
    pub a_grid: Vec<f64>,
    /// Small-jump cutoff of the simulated subordinator.
    pub delta: f64,
    pub estimator: ChordEstimator,
    pub quad: QuadratureSpec,
}

impl StableChordSetup {
    pub fn validate(&self) -> Result<()> {
        check_beta_delta(self.beta, self.delta)?;
        if self.a_grid.is_empty() || self.a_grid.iter().any(|a| !(*a > 0.0 && *a < 0.5)) {
            return Err(Error::domain("every a must lie in (0, 1/2)"));
        }
        self.quad.validate()
    }

    /// Constant multiplying the sample mean.
    pub fn prefactor(&self) -> f64 {
        let beta = self.beta;
        match self.estimator {
            ChordEstimator::Direct => d_beta(beta) * c_beta(beta),
            ChordEstimator::Conditioned => {
                let lambda = 1.0 / gamma(1.0 - 1.0 / beta);
                gamma(2.0 - 1.0 / beta) * lambda.powf(beta + 1.0)
            }
        }
    }

    /// Unscaled values for one replicate, one per grid point.
    pub fn sample(&self, stream: RandomStream) -> Result<Vec<f64>> {
        let mut rng = stream.rng();
        match self.estimator {
            ChordEstimator::Direct => {
                let s = stable_jumps_from(self.beta, self.delta, &mut rng);
                self.a_grid
                    .iter()
                    .map(|&a| Ok(s.t1 * direct_inner(self.beta, a, s.delta1 / s.t1, &self.quad)?))
                    .collect()
            }
            ChordEstimator::Conditioned => {
                let lambda = 1.0 / gamma(1.0 - 1.0 / self.beta);
                let law =
                    Gamma::new(2.0 - self.beta, 1.0 / lambda).map_err(|e| Error::config(alloc::format!("{e}")))?;
                let theta: f64 = law.sample(&mut rng);
                let z = truncated_subordinator_at(self.beta, theta, self.delta, &mut rng);
                self.a_grid.iter().map(|&a| conditioned_kernel(self.beta, a, z, &self.quad)).collect()
            }
        }
    }
}

/// Inner integral of the direct estimator for largest-jump share `r = Δ₁/T₁`:
/// `∫_{r/a ∨ 1}^{1/(1-a)} (1-1/x)^{-γ} dx = ∫_{u_lo}^{a} u^{-γ}(1-u)^{-2} du`
/// with `u = 1 - 1/x`, evaluated in `u = w^k`, `k = 1/(1-γ)`.
pub fn direct_inner(beta: f64, a: f64, r: f64, quad: &QuadratureSpec) -> Result<f64> {
    let u_lo = if r > a { 1.0 - a / r } else { 0.0 };
    if u_lo >= a {
        return Ok(0.0);
    }
    power_substituted(beta, u_lo, a, |u| (1.0 - u).powi(-2), quad)
}

/// `∫_{lo}^{hi} u^{-γ} f(u) du` in the variable `w = u^{1-γ}`.
fn power_substituted<F: Fn(f64) -> f64>(beta: f64, lo: f64, hi: f64, f: F, quad: &QuadratureSpec) -> Result<f64> {
    let k = beta / (beta - 1.0);
    let q = integrate(|w| k * f(w.powf(k)), lo.powf(1.0 / k), hi.powf(1.0 / k), quad)?;
    Ok(q.value)
}

/// Conditioned kernel `K(z)`:
/// `∫_0^a u^{-γ}(1-u)^{-2} [hi^{1-γ} - lo^{1-γ}]₊/(1-γ) du` with `ρ = a/(1-u)`,
/// `lo = (1/ρ - 1 - z) ∨ 0`, `hi = ρ(1+z)/(1-ρ)`, nonzero only when `ρ(2+z) > 1`.
pub fn conditioned_kernel(beta: f64, a: f64, z: f64, quad: &QuadratureSpec) -> Result<f64> {
    let g = 1.0 / beta;
    let start = (1.0 - a * (2.0 + z)).max(0.0);
    if start >= a {
        return Ok(0.0);
    }
    let bracket = |u: f64| {
        let rho = a / (1.0 - u);
        let lo = (1.0 / rho - 1.0 - z).max(0.0);
        let hi = rho * (1.0 + z) / (1.0 - rho);
        let v = (hi.powf(1.0 - g) - lo.powf(1.0 - g)).max(0.0) / (1.0 - g);
        v * (1.0 - u).powi(-2)
    };
    // `lo` switches to 0 at u = 1 - a(1+z); split there.
    let kink = 1.0 - a * (1.0 + z);
    if kink > start && kink < a {
        Ok(power_substituted(beta, start, kink, bracket, quad)? + power_substituted(beta, kink, a, bracket, quad)?)
    } else {
        power_substituted(beta, start, a, bracket, quad)
    }
}

/// One point of the stable chord CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordCdfPoint {
    pub a: f64,
    pub estimate: EstimateWithCI,
    /// Whether the mean was pulled back into `[0, 1]`.
    pub clamped: bool,
}

/// Turns per-replicate rows from [`StableChordSetup::sample`] into clamped CDF
/// estimates. Rows are consumed in the given order.
pub fn finish_chord_cdf<'a, I>(setup: &StableChordSetup, rows: I) -> Result<Vec<ChordCdfPoint>>
where
    I: IntoIterator<Item = &'a Vec<f64>>,
{
    let mut acc = alloc::vec![Welford::new(); setup.a_grid.len()];
    for row in rows {
        for (w, v) in acc.iter_mut().zip(row) {
            w.push(*v);
        }
    }
    let k = setup.prefactor();
    setup
        .a_grid
        .iter()
        .zip(acc)
        .map(|(&a, w)| {
            let mut e = w.estimate()?.scaled(k);
            let clamped = e.mean < 0.0 || e.mean > 1.0;
            if clamped {
                e.mean = e.mean.clamp(0.0, 1.0);
                e.ci_low = e.ci_low.min(e.mean);
                e.ci_high = e.ci_high.max(e.mean);
            }
            Ok(ChordCdfPoint { a, estimate: e, clamped })
        })
        .collect()
}

/// `P(L < a)` on a grid of `a` for the β-stable lamination, from `m`
/// replicates on streams `(seed, 0..m)` (common random numbers across `a`).
pub fn stable_longest_chord_cdf(setup: &StableChordSetup, m: u64, seed: u64) -> Result<Vec<ChordCdfPoint>> {
    setup.validate()?;
    let rows = (0..m).map(|i| setup.sample(RandomStream::new(seed, i))).collect::<Result<Vec<_>>>()?;
    finish_chord_cdf(setup, rows.iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sample_stable_jumps;
    use crate::theory::brownian::brownian_longest_chord_cdf;

    #[test]
    fn constants() {
        assert!((stable_face_prefactor(1.5) - PI.sqrt()).abs() < 1e-13);
        assert!((c_beta(1.5) - 1.0 / (1.5 * gamma(1.0 / 3.0))).abs() < 1e-15);
        assert!((d_beta(1.5) - 2.25 * gamma(4.0 / 3.0) / gamma(0.5)).abs() < 1e-14);
    }

    #[test]
    fn stable_laplace() {
        let spec = QuadratureSpec::default();
        assert!((1.0 / phi_stable(1.5, 1.0).unwrap() - 0.746_565_0).abs() < 1e-6);
        for beta in [1.2, 1.5, 1.8] {
            for p in [0.5, 1.0, 2.0] {
                let q = u_laplace_stable(beta, p, &spec).unwrap();
                let t = 1.0 / phi_stable(beta, p).unwrap();
                assert!((q - t).abs() < 1e-9, "β={beta} p={p}: {q} vs {t}");
            }
        }
    }

    #[test]
    fn delta1_cdf_limits() {
        assert_eq!(delta1_cdf(1.5, 0.0), 0.0);
        assert!(delta1_cdf(1.5, 1e12) > 0.999);
        assert!(delta1_cdf(1.5, 0.1) < delta1_cdf(1.5, 0.2));
    }

    #[test]
    fn direct_inner_full_branch() {
        // r ≤ a integrates from u = 0: closed form at γ→ via quadrature check.
        let quad = QuadratureSpec::default();
        let v = direct_inner(1.5, 0.4, 0.1, &quad).unwrap();
        let g = 1.0 / 1.5;
        let check = crate::theory::quad::integrate_endpoint_powers(|u| (1.0 - u).powi(-2), 0.0, 0.4, g, 0.0, &quad)
            .unwrap()
            .value;
        assert!((v - check).abs() < 1e-10 * check);
        assert_eq!(direct_inner(1.5, 0.4, 0.8, &quad).unwrap(), 0.0);
    }

    #[test]
    fn kernel_at_zero_reproduces_brownian_cdf_near_two() {
        // As β → 2 the Gamma time collapses to 0 and only K(0) survives.
        let quad = QuadratureSpec::default();
        for a in [0.35, 0.4, 0.45] {
            let setup = StableChordSetup {
                beta: 2.0 - 1e-9,
                a_grid: alloc::vec![a],
                delta: 1e-4,
                estimator: ChordEstimator::Conditioned,
                quad,
            };
            let v = setup.prefactor() * conditioned_kernel(setup.beta, a, 0.0, &quad).unwrap();
            let b = brownian_longest_chord_cdf(a).unwrap();
            assert!((v - b).abs() < 1e-7, "a={a}: {v} vs {b}");
        }
    }

    #[test]
    fn kernel_vanishes_below_one_third() {
        let quad = QuadratureSpec::default();
        assert_eq!(conditioned_kernel(1.5, 0.3, 0.0, &quad).unwrap(), 0.0);
        assert!(conditioned_kernel(1.5, 0.3, 0.5, &quad).unwrap() > 0.0);
    }

    #[test]
    fn estimators_agree() {
        // Both estimate the same expectation; the direct one is heavy tailed
        // but well behaved enough at β = 1.3 for a coarse comparison.
        let quad = QuadratureSpec::with_rel_tol(1e-8);
        let mk =
            |estimator, delta| StableChordSetup { beta: 1.3, a_grid: alloc::vec![0.3, 0.4], delta, estimator, quad };
        let d = stable_longest_chord_cdf(&mk(ChordEstimator::Direct, 1e-4), 20_000, 42).unwrap();
        let c = stable_longest_chord_cdf(&mk(ChordEstimator::Conditioned, 1e-4), 20_000, 43).unwrap();
        for (x, y) in d.iter().zip(&c) {
            let tol = 4.0 * (x.estimate.std_error().powi(2) + y.estimate.std_error().powi(2)).sqrt();
            assert!(
                (x.estimate.mean - y.estimate.mean).abs() < tol.max(0.01),
                "a={}: direct {:?} conditioned {:?}",
                x.a,
                x.estimate,
                y.estimate
            );
        }
    }

    #[test]
    fn stable_face_constant_reproducible() {
        let a = stable_face_constant(1.5, 200, 1e-4, 42).unwrap();
        let b = stable_face_constant(1.5, 200, 1e-4, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.ci_low <= a.mean && a.mean <= a.ci_high);
    }

    #[test]
    fn phi_identity_single_sample_bounded() {
        let s = sample_stable_jumps(1.5, 1e-5, RandomStream::new(42, 0)).unwrap();
        let v = nu_beta_phi_sample(&s, 1.0);
        assert!(v > 0.0 && v <= d_beta(1.5) * s.t1);
    }
}
