//! Adaptive Gauss-Kronrod quadrature plus the endpoint substitutions used for
//! every singular integrand in this crate.

use alloc::vec::Vec;

use num_traits::Float;

use crate::{Error, Result};

/// How endpoint singularities are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Plain adaptive bisection. Only accepted for integrands that are bounded
    /// at both ends.
    Adaptive,
    /// Algebraic endpoint singularities are removed by a power substitution
    /// before the adaptive pass.
    SubstitutionAtSingularity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub rel_tol: f64,
    /// Absolute floor on the error target, for integrals that may vanish.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: Scheme::SubstitutionAtSingularity,
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 1000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureSpec { rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.abs_tol < 0.0 || self.max_subdivisions == 0 {
            return Err(Error::config("quadrature needs rel_tol > 0, abs_tol >= 0 and at least one subdivision"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

// Kronrod 15-point nodes and weights, Gauss 7-point weights, as tabulated.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Piece> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() {
        return Err(Error::numerical(alloc::format!("integrand is not finite on [{a}, {b}]")));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Piece { a, b, value, error })
}

/// Adaptive G7K15 on a finite interval for a bounded integrand.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, intervals: 0 });
    }
    let mut pieces: Vec<Piece> = alloc::vec![gk15(&mut f, a, b)?];
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        if error <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            return Ok(Quadrature { value, error, intervals: pieces.len() });
        }
        if pieces.len() >= spec.max_subdivisions {
            return Err(Error::numerical(alloc::format!(
                "quadrature on [{a}, {b}] did not converge: estimate {value}, error {error} after {} intervals",
                pieces.len()
            )));
        }
        let worst =
            pieces.iter().enumerate().max_by(|x, y| x.1.error.total_cmp(&y.1.error)).map(|(i, _)| i).unwrap_or(0);
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            return Err(Error::numerical(alloc::format!(
                "quadrature on [{a}, {b}] hit roundoff near {mid}: estimate {value}, error {error}"
            )));
        }
        pieces.push(gk15(&mut f, p.a, mid)?);
        pieces.push(gk15(&mut f, mid, p.b)?);
    }
}

/// `∫_a^b (x-a)^{-left} (b-x)^{-right} f(x) dx` for exponents below 1 and `f`
/// bounded near the endpoints.
///
/// Each half with a positive exponent of the interval is mapped by `x - a = w^k` (resp. `b - x = w^k`)
/// with `k = 1/(1-exponent)`, which turns the weight into the constant `k`.
pub fn integrate_endpoint_powers<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if !(left < 1.0 && right < 1.0) {
        return Err(Error::domain("endpoint exponents must be below 1 for integrability"));
    }
    if !(b > a) {
        return Err(Error::domain("need a < b"));
    }
    if spec.scheme == Scheme::Adaptive && (left > 0.0 || right > 0.0) {
        return Err(Error::config("singular endpoints require the substitution scheme"));
    }
    let len = b - a;
    let mid = a + 0.5 * len;
    let lhs = if left <= 0.0 {
        integrate(|x| f(x) * (x - a).powf(-left) * (b - x).powf(-right), a, mid, spec)?
    } else {
        let k = 1.0 / (1.0 - left);
        let top = (0.5 * len).powf(1.0 / k);
        integrate(
            |w| {
                let d = w.powf(k);
                k * f(a + d) * (len - d).powf(-right)
            },
            0.0,
            top,
            spec,
        )?
    };
    let rhs = if right <= 0.0 {
        integrate(|x| f(x) * (x - a).powf(-left) * (b - x).powf(-right), mid, b, spec)?
    } else {
        let k = 1.0 / (1.0 - right);
        let top = (0.5 * len).powf(1.0 / k);
        integrate(
            |w| {
                let d = w.powf(k);
                k * f(b - d) * (len - d).powf(-left)
            },
            0.0,
            top,
            spec,
        )?
    };
    Ok(Quadrature {
        value: lhs.value + rhs.value,
        error: lhs.error + rhs.error,
        intervals: lhs.intervals + rhs.intervals,
    })
}

/// `∫_a^∞ f(x) dx` through `x = a + t/(1-t)`; `f` must decay faster than `1/x`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    integrate(
        |t| {
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        },
        0.0,
        1.0,
        spec,
    )
}
