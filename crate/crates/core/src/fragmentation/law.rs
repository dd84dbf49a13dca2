use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use num_traits::Float;
use rand::Rng;

use crate::theory::brownian::BrownianTail;
use crate::theory::quad::QuadratureSpec;
use crate::theory::renewal::{laplace_exponent, mean_log_drift, truncated_drift, TailFunction};
use crate::{Error, Result};

/// Density `κ u^{-1-a}` for the smaller fragment `u ∈ (0, 1/2)`, with tail
/// `(κ/a)(u^{-a} - 2^a) ~ (κ/a) u^{-a}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTail {
    pub kappa: f64,
    pub a: f64,
}

impl PowerTail {
    /// Constant `c` in `ν̄(u) ~ c u^{-a}`.
    pub fn c(&self) -> f64 {
        self.kappa / self.a
    }
}

impl TailFunction for PowerTail {
    fn tail(&self, u: f64) -> f64 {
        if u >= 0.5 {
            return 0.0;
        }
        self.c() * (u.powf(-self.a) - 2.0.powf(self.a))
    }

    fn small_u_exponent(&self) -> f64 {
        self.a
    }

    fn inverse_tail(&self, y: f64) -> f64 {
        (y / self.c() + 2.0.powf(self.a)).powf(-1.0 / self.a)
    }
}

/// What drives the splits.
#[derive(Clone)]
pub enum LawKind {
    /// Every split is `(s₁, 1-s₁)`, at total rate `rate`.
    PointMass { s1: f64, rate: f64 },
    /// Smaller fragment `1-s₁` drawn from a measure given by its tail.
    Density { name: String, tail: Arc<dyn TailFunction + Send + Sync> },
}

impl fmt::Debug for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawKind::PointMass { s1, rate } => write!(f, "PointMass {{ s1: {s1}, rate: {rate} }}"),
            LawKind::Density { name, .. } => write!(f, "Density {{ name: {name:?} }}"),
        }
    }
}

/// A binary dislocation measure restricted to `1 - s₁ > δ'`.
#[derive(Debug, Clone)]
pub struct DislocationLaw {
    kind: LawKind,
    delta_prime: f64,
    total_rate: f64,
}

impl DislocationLaw {
    pub fn point_mass(s1: f64, rate: f64) -> Result<Self> {
        if !(0.5..1.0).contains(&s1) {
            return Err(Error::config(alloc::format!("point mass needs 1/2 ≤ s1 < 1, got {s1}")));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::config("point mass rate must be positive and finite"));
        }
        Ok(DislocationLaw { kind: LawKind::PointMass { s1, rate }, delta_prime: 0.0, total_rate: rate })
    }

    /// The Brownian dislocation measure `ν_e`, truncated at `δ'`.
    pub fn brownian(delta_prime: f64) -> Result<Self> {
        Self::from_tail("brownian_nu_e", Arc::new(BrownianTail), delta_prime)
    }

    pub fn power_tail(kappa: f64, a: f64, delta_prime: f64) -> Result<Self> {
        if !(kappa > 0.0 && a > 0.0 && a < 1.0) {
            return Err(Error::config("power tail needs kappa > 0 and 0 < a < 1"));
        }
        Self::from_tail("power_tail", Arc::new(PowerTail { kappa, a }), delta_prime)
    }

    pub fn from_tail(name: &str, tail: Arc<dyn TailFunction + Send + Sync>, delta_prime: f64) -> Result<Self> {
        if !(delta_prime > 0.0 && delta_prime < tail.support_end()) {
            return Err(Error::config(alloc::format!(
                "truncation δ' must lie in (0, {}), got {delta_prime}",
                tail.support_end()
            )));
        }
        let total_rate = tail.tail(delta_prime);
        if !(total_rate > 0.0 && total_rate.is_finite()) {
            return Err(Error::config(alloc::format!(
                "truncated total rate ν̄(δ') = {total_rate} is not finite and positive"
            )));
        }
        Ok(DislocationLaw { kind: LawKind::Density { name: name.into(), tail }, delta_prime, total_rate })
    }

    pub fn kind(&self) -> &LawKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            LawKind::PointMass { .. } => "point_mass",
            LawKind::Density { name, .. } => name,
        }
    }

    pub fn delta_prime(&self) -> f64 {
        self.delta_prime
    }

    /// `λ(δ') = ν(1 - s₁ > δ')`.
    pub fn total_rate(&self) -> f64 {
        self.total_rate
    }

    /// Whether the simulated measure is the full measure.
    pub fn is_lossless(&self) -> bool {
        matches!(self.kind, LawKind::PointMass { .. })
    }

    /// Draws `s₁` from the truncated law normalised to a probability.
    pub fn sample_s1<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            LawKind::PointMass { s1, .. } => *s1,
            LawKind::Density { tail, .. } => {
                let v: f64 = rng.random();
                let u = tail.inverse_tail(self.total_rate * (1.0 - v));
                1.0 - u.clamp(self.delta_prime, 0.5)
            }
        }
    }

    /// Laplace exponent of the truncated measure.
    pub fn laplace_exponent(&self, p: f64) -> Result<f64> {
        match &self.kind {
            LawKind::PointMass { s1, rate } => {
                if !(p > 0.0) {
                    return Err(Error::domain("Laplace exponent needs p > 0"));
                }
                Ok(rate * (1.0 - s1.powf(p + 1.0) - (1.0 - s1).powf(p + 1.0)))
            }
            LawKind::Density { tail, .. } => {
                laplace_exponent(tail.as_ref(), p, self.delta_prime, &QuadratureSpec::default())
            }
        }
    }

    /// Mean log-mass drift `m` of the tagged fragment under the truncated measure.
    pub fn mean_log_drift(&self) -> Result<f64> {
        match &self.kind {
            LawKind::PointMass { s1, rate } => {
                let s2 = 1.0 - s1;
                Ok(rate * (-s1 * s1.ln() - s2 * s2.ln()))
            }
            LawKind::Density { tail, .. } => {
                mean_log_drift(tail.as_ref(), self.delta_prime, &QuadratureSpec::default())
            }
        }
    }

    /// `∫_{1-s₁ ≤ δ'} ln(1/s₁) ν(ds)`: the drift the truncation drops.
    pub fn truncation_bias(&self) -> Result<f64> {
        match &self.kind {
            LawKind::PointMass { .. } => Ok(0.0),
            LawKind::Density { tail, .. } => {
                truncated_drift(tail.as_ref(), self.delta_prime, &QuadratureSpec::default())
            }
        }
    }

    /// `a` in `ν̄(u) ≍ u^{-a}` near 0; 0 for a point mass.
    pub fn tail_exponent(&self) -> f64 {
        match &self.kind {
            LawKind::PointMass { .. } => 0.0,
            LawKind::Density { tail, .. } => tail.small_u_exponent(),
        }
    }

    /// A note when the law is lattice, i.e. `ln s₁ / ln s₂` is rational
    /// (detected for denominators up to 100); renewal limits then oscillate.
    pub fn lattice_warning(&self) -> Option<String> {
        let LawKind::PointMass { s1, .. } = self.kind else {
            return None;
        };
        let r = s1.ln() / (1.0 - s1).ln();
        (1..=100u32).find_map(|q| {
            let p = (r * q as f64).round();
            ((r * q as f64 - p).abs() < 1e-9 * q as f64).then(|| {
                alloc::format!("point mass s1 = {s1} is lattice (ln s1/ln s2 ≈ {p}/{q}); renewal limits do not apply")
            })
        })
    }
}
