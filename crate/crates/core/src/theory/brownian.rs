//! Closed forms attached to the Brownian dislocation measure
//! `ν_e(ds₁) = 2/√(2π s₁³(1-s₁)³) ds₁` on `s₁ ∈ [1/2, 1)`.

use core::f64::consts::PI;

use num_traits::Float;

use super::quad::{integrate, integrate_endpoint_powers, QuadratureSpec};
use super::renewal::TailFunction;
use super::special::gamma;
use crate::{Error, Result};

/// `2√2/√π`, the total mass of `g₁` and the prefactor of its tail.
pub const G1_PREFACTOR: f64 = 1.595_769_121_605_730_7;

/// Density of `ν_e` in the variable `s₁`.
pub fn nu_e_density(s1: f64) -> f64 {
    if !(0.5..1.0).contains(&s1) {
        return 0.0;
    }
    2.0 / (2.0 * PI * (s1 * (1.0 - s1)).powi(3)).sqrt()
}

/// `Φ(p) = 2√2 Γ(p+1/2)/Γ(p)`.
pub fn phi_brownian(p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain(alloc::format!("Φ needs p > 0, got {p}")));
    }
    Ok(2.0 * 2.0.sqrt() * gamma(p + 0.5) / gamma(p))
}

/// Mean log-mass drift of the tagged fragment, `2√(2π)`.
pub fn m_brownian() -> f64 {
    2.0 * (2.0 * PI).sqrt()
}

const V_MAX: f64 = core::f64::consts::FRAC_1_SQRT_2;

fn prefactor() -> f64 {
    4.0 / (2.0 * PI).sqrt()
}

/// `Φ(p)` by quadrature of `∫ (1 - s₁^{p+1} - s₂^{p+1}) ν_e(ds₁)`.
///
/// With `s₁ = 1 - v²` the integrand becomes
/// `c (1 - (1-v²)^{p+1} - v^{2p+2}) (1-v²)^{-3/2} v^{-2}`; the `v^{2p}` piece is
/// integrated in `w = v^{2p+1}` so both parts are smooth.
pub fn phi_by_quadrature(p: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain(alloc::format!("Φ needs p > 0, got {p}")));
    }
    let main = integrate(
        |v| {
            let v2 = v * v;
            -((p + 1.0) * (-v2).ln_1p()).exp_m1() / v2 * (1.0 - v2).powf(-1.5)
        },
        0.0,
        V_MAX,
        spec,
    )?;
    let k = 2.0 * p + 1.0;
    let power = integrate(
        |w| {
            let v = w.powf(1.0 / k);
            (1.0 - v * v).powf(-1.5) / k
        },
        0.0,
        V_MAX.powf(k),
        spec,
    )?;
    Ok(prefactor() * (main.value - power.value))
}

/// The `m` integrand in the variable `v`, `s₁ = 1 - v²`.
fn m_integrand(v: f64) -> f64 {
    let v2 = v * v;
    prefactor() * (-(-v2).ln_1p() / v2 * (1.0 - v2).powf(-0.5) - 2.0 * v.ln() * (1.0 - v2).powf(-1.5))
}

/// `m = ∫ (s₁ ln(1/s₁) + s₂ ln(1/s₂)) ν_e(ds₁)` by quadrature.
///
/// After `s₁ = 1 - v²` the only singular piece is `-2 ln v`, integrated in
/// closed form; the remainder `-2 ln v ((1-v²)^{-3/2} - 1)` vanishes at 0.
pub fn m_by_quadrature(spec: &QuadratureSpec) -> Result<f64> {
    let smooth = integrate(
        |v| {
            let v2 = v * v;
            -(-v2).ln_1p() / v2 * (1.0 - v2).powf(-0.5) - 2.0 * v.ln() * ((1.0 - v2).powf(-1.5) - 1.0)
        },
        0.0,
        V_MAX,
        spec,
    )?;
    let log_part = 2.0 * V_MAX * (1.0 - V_MAX.ln());
    Ok(prefactor() * (smooth.value + log_part))
}

/// Part of `m` coming from `s₁ ∈ (1 - v_max², 1)`.
pub fn m_near_one(v_max: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(integrate(m_integrand, 0.0, v_max, spec)?.value)
}

/// Tail of `ν_e` in the smaller fragment:
/// `g₁(u) = (2√2/√π) u^{-1/2} (1-2u)/√(1-u)` for `u < 1/2`.
pub fn g1(u: f64) -> f64 {
    if u <= 0.0 {
        return f64::INFINITY;
    }
    if u >= 0.5 {
        return 0.0;
    }
    G1_PREFACTOR * (1.0 - 2.0 * u) / (u * (1.0 - u)).sqrt()
}

/// `∫_0^∞ g₁(u) du`, expected to equal `2√2/√π`.
pub fn g1_integral(spec: &QuadratureSpec) -> Result<f64> {
    let q = integrate_endpoint_powers(|u| G1_PREFACTOR * (1.0 - 2.0 * u) / (1.0 - u).sqrt(), 0.0, 0.5, 0.5, 0.0, spec)?;
    Ok(q.value)
}

/// `g₁` as a [`TailFunction`], with the closed-form inverse.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BrownianTail;

impl TailFunction for BrownianTail {
    fn tail(&self, u: f64) -> f64 {
        g1(u)
    }

    fn small_u_exponent(&self) -> f64 {
        0.5
    }

    fn inverse_tail(&self, y: f64) -> f64 {
        // G² = (1-2u)²/(u(1-u)) = 1/q - 4 with q = u(1-u).
        let g = y / G1_PREFACTOR;
        let q = 1.0 / (g * g + 4.0);
        2.0 * q / (1.0 + (1.0 - 4.0 * q).max(0.0).sqrt())
    }
}

/// Density of the renewal measure `dU` of the Brownian tagged fragment.
pub fn u_density_brownian(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    (-(-x).exp_m1()).powf(-0.5) / (2.0 * (2.0 * PI).sqrt())
}

/// `∫_0^∞ c e^{-px} (1-e^{-x})^{-γ} dx` computed in `y = 1 - e^{-x}`:
/// `c ∫_0^1 y^{-γ} (1-y)^{p-1} dy`.
pub(crate) fn renewal_laplace(c: f64, gamma_exp: f64, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain("Laplace transform needs p > 0"));
    }
    let q = integrate_endpoint_powers(|_| c, 0.0, 1.0, gamma_exp, 1.0 - p, spec)?;
    Ok(q.value)
}

/// `∫ e^{-px} dU(x)` by quadrature; equals `1/Φ(p)`.
pub fn u_laplace_brownian(p: f64, spec: &QuadratureSpec) -> Result<f64> {
    renewal_laplace(1.0 / (2.0 * (2.0 * PI).sqrt()), 0.5, p, spec)
}

/// Law of the longest chord's arc fraction `L` in the Brownian triangulation:
/// `P(L < a)` for `0 < a < 1/2`.
pub fn brownian_longest_chord_cdf(a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 0.5) {
        return Err(Error::domain(alloc::format!("chord CDF needs 0 < a < 1/2, got {a}")));
    }
    if a <= 1.0 / 3.0 {
        return Ok(0.0);
    }
    let r = (1.0 - 2.0 * a).sqrt();
    let v = 6.0 / PI * ((1.0 / 3.0.sqrt()).atan() - r.atan()) - (3.0 * a - 1.0) * r / (PI * a * (1.0 - a));
    Ok(v.clamp(0.0, 1.0))
}
