//! Tail functions of binary dislocation measures and the functionals of the
//! tagged fragment built from them.

use num_traits::Float;

use super::quad::{integrate, integrate_endpoint_powers, QuadratureSpec};
use crate::{Error, Result};

/// Tail `ν̄(u) = ν(1 - s₁ > u)` of a binary conservative dislocation measure,
/// seen as a function of the smaller fragment `u = 1 - s₁ ∈ (0, 1/2]`.
pub trait TailFunction {
    /// `ν̄(u)` for `u > 0`; non-increasing, zero from [`support_end`](Self::support_end) on.
    fn tail(&self, u: f64) -> f64;

    /// Exponent `a` such that `ν̄(u)` is at most of order `u^{-a}` near 0
    /// (0 for finite measures).
    fn small_u_exponent(&self) -> f64;

    /// Smallest `u` with `ν̄(u) = 0`; at most 1/2.
    fn support_end(&self) -> f64 {
        0.5
    }

    /// Some `u` with `ν̄(u) = y`, for `0 < y ≤ ν̄(0+)`. The default bisects.
    fn inverse_tail(&self, y: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = self.support_end();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.tail(mid) > y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `ν̄(u) = height` for `u < end`, i.e. a point mass at `1 - s₁ = end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepTail {
    pub height: f64,
    pub end: f64,
}

impl TailFunction for StepTail {
    fn tail(&self, u: f64) -> f64 {
        if u < self.end {
            self.height
        } else {
            0.0
        }
    }

    fn small_u_exponent(&self) -> f64 {
        0.0
    }

    fn support_end(&self) -> f64 {
        self.end
    }

    fn inverse_tail(&self, _y: f64) -> f64 {
        self.end
    }
}

/// `(1/m) ∫_0^∞ ν̄(u^b) du`, the limit of `ε^{1/b} N(ε)` when `ψ ≤ (1-s₁)x^b`
/// and the tail is lighter than `u^{-1/b}`. `m = ∞` gives 0.
pub fn renewal_limit<T: TailFunction + ?Sized>(g: &T, b: f64, m: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::domain("renewal limit needs b > 0"));
    }
    if !(m > 0.0) {
        return Err(Error::domain("renewal limit needs m > 0"));
    }
    let ab = g.small_u_exponent() * b;
    if ab >= 1.0 {
        return Err(Error::numerical(alloc::format!(
            "∫ ν̄(u^b) du diverges at 0: tail exponent a = {} times b = {b} is not below 1 (the light-tail regime a < 1/b is required)",
            g.small_u_exponent()
        )));
    }
    if m.is_infinite() {
        return Ok(0.0);
    }
    let end = g.support_end().powf(1.0 / b);
    let q = if ab > 0.0 {
        integrate_endpoint_powers(|u| g.tail(u.powf(b)) * u.powf(ab), 0.0, end, ab, 0.0, spec)?
    } else {
        integrate(|u| g.tail(u.powf(b)), 0.0, end, spec)?
    };
    Ok(q.value / m)
}

/// `∫_{δ'}^{1/2} h'(u) ν̄(u) du + h(δ') ν̄(δ')`, i.e. `∫ h dν` over `u > δ'` for
/// `h(0) = 0`, with `u = w^k` flattening the `u^{-a}` growth of the tail.
fn integrate_against<T, H, D>(g: &T, h: H, dh: D, delta_prime: f64, spec: &QuadratureSpec) -> Result<f64>
where
    T: TailFunction + ?Sized,
    H: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let end = g.support_end();
    if delta_prime >= end {
        return Ok(0.0);
    }
    let boundary = if delta_prime > 0.0 { h(delta_prime) * g.tail(delta_prime) } else { 0.0 };
    let a = g.small_u_exponent();
    let k = 1.0 / (1.0 - a);
    let q = integrate(
        |w| {
            let u = w.powf(k);
            dh(u) * g.tail(u) * k * w.powf(k - 1.0)
        },
        delta_prime.powf(1.0 / k),
        end.powf(1.0 / k),
        spec,
    )?;
    Ok(boundary + q.value)
}

/// Laplace exponent `Φ(p) = ∫ (1 - s₁^{p+1} - s₂^{p+1}) ν(ds)` restricted to `1 - s₁ > δ'`.
pub fn laplace_exponent<T: TailFunction + ?Sized>(
    g: &T,
    p: f64,
    delta_prime: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain("Laplace exponent needs p > 0"));
    }
    check_integrable(g)?;
    integrate_against(
        g,
        |u| -((p + 1.0) * (-u).ln_1p()).exp_m1() - u.powf(p + 1.0),
        |u| (p + 1.0) * ((1.0 - u).powf(p) - u.powf(p)),
        delta_prime,
        spec,
    )
}

/// Mean drift `m = ∫ (s₁ ln(1/s₁) + s₂ ln(1/s₂)) ν(ds)` of the tagged fragment's
/// negative log-mass, restricted to `1 - s₁ > δ'`.
pub fn mean_log_drift<T: TailFunction + ?Sized>(g: &T, delta_prime: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_integrable(g)?;
    integrate_against(g, |u| -(1.0 - u) * (-u).ln_1p() - u * u.ln(), |u| ((1.0 - u) / u).ln(), delta_prime, spec)
}

/// `∫_{(0,δ']} ln(1/(1-u)) ν(du)`: the log-mass drift lost by truncating at `δ'`.
pub fn truncated_drift<T: TailFunction + ?Sized>(g: &T, delta_prime: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_integrable(g)?;
    if delta_prime <= 0.0 {
        return Ok(0.0);
    }
    let cut = delta_prime.min(g.support_end());
    let at_cut = g.tail(delta_prime);
    let a = g.small_u_exponent();
    let f = |u: f64| (g.tail(u) - at_cut) / (1.0 - u);
    let q = if a > 0.0 {
        integrate_endpoint_powers(|u| f(u) * u.powf(a), 0.0, cut, a, 0.0, spec)?
    } else {
        integrate(f, 0.0, cut, spec)?
    };
    Ok(q.value)
}

fn check_integrable<T: TailFunction + ?Sized>(g: &T) -> Result<()> {
    if g.small_u_exponent() >= 1.0 {
        return Err(Error::domain("the dislocation measure must satisfy ∫(1-s₁)ν(ds) < ∞"));
    }
    Ok(())
}
