use core::f64::consts::PI;

use num_traits::Float;

use super::special::bessel_j1;
use super::stable::{c_beta, d_beta};

/// Limits that the simulations are compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryConstants {
    /// Mean log-mass drift of the Brownian tagged fragment, `2√(2π)`.
    pub m_brownian: f64,
    /// `lim ε N'(ε)` for triangles whose shortest edge exceeds ε.
    pub limit_edge: f64,
    /// `lim ε^{1/2} E[N''(ε)]` for triangles of area above ε, `√2 π^{3/2} J₁(π/2)`.
    ///
    /// Integrating the triangle intensity `(1/4π)(abc)^{-3/2}` over the region
    /// where one arc is small gives this value, which is also the mean of the
    /// per-path limit `4 ∫ Σ sin(π|I(s)|) ds`. The expression `(√2π/2) J₁(π/2)`
    /// that is sometimes quoted is smaller by a factor `2√π`.
    pub limit_area_mean: f64,
    /// `lim ε N(ε)` for `ψ(x, s) = (1-s₁)x`, `1/π`.
    pub limit_psi1: f64,
}

impl TheoryConstants {
    pub fn brownian() -> Self {
        TheoryConstants {
            m_brownian: 2.0 * (2.0 * PI).sqrt(),
            limit_edge: 2.0,
            limit_area_mean: 2.0.sqrt() * PI.powf(1.5) * bessel_j1(PI / 2.0),
            limit_psi1: 1.0 / PI,
        }
    }

    /// `(C_β, D_β)`.
    pub fn stable(beta: f64) -> (f64, f64) {
        (c_beta(beta), d_beta(beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::quad::{integrate_endpoint_powers, QuadratureSpec};

    #[test]
    fn values() {
        let c = TheoryConstants::brownian();
        assert!((c.m_brownian - 5.013_256_549_262_001).abs() < 1e-12);
        // Small-arc asymptotics of the intensity: one arc a → 0 with the
        // others b, 1-b, and area ≈ 2πa sin²(πb), so
        // ε^{1/2} E N'' → 2 · (1/4π) · 2√(2π) ∫ sin(πb) b^{-3/2} (1-b)^{-1/2} db.
        let spec = QuadratureSpec::default();
        let i = integrate_endpoint_powers(|b| (PI * b).sin() / b, 0.0, 1.0, 0.5, 0.5, &spec).unwrap().value;
        let oracle = (2.0 * PI).sqrt() / PI * i;
        assert!((c.limit_area_mean - oracle).abs() < 1e-8 * oracle, "{} vs {oracle}", c.limit_area_mean);
        assert!((c.limit_area_mean - 4.463_629_154_053_49).abs() < 1e-9);
        assert!((c.limit_psi1 - 1.0 / PI).abs() < 1e-15);
        let (cb, db) = TheoryConstants::stable(1.5);
        assert!((cb - 0.248_855).abs() < 1e-6);
        assert!(db > 0.0);
    }
}
