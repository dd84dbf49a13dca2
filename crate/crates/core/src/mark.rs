//! Marks of dislocations and the size functionals evaluated on them.

use alloc::string::String;
use alloc::sync::Arc;
use core::f64::consts::PI;
use core::fmt;

use num_traits::Float;

use crate::{Error, Result};

/// A binary dislocation: a fragment of mass `x` splitting into `x s₁` and
/// `x s₂`, with `s₁ ≥ s₂` and `s₁ + s₂ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mark {
    pub x: f64,
    pub s1: f64,
    pub s2: f64,
}

impl Mark {
    pub fn new(x: f64, s1: f64) -> Self {
        Mark { x, s1, s2: 1.0 - s1 }
    }
}

type CustomFn = Arc<dyn Fn(&Mark) -> f64 + Send + Sync>;

/// Size functional `ψ(x, s)`; a dislocation is large at level ε when `ψ > ε`.
#[derive(Clone)]
pub enum Psi {
    /// `ψ = x`: every split of a fragment heavier than ε counts.
    ParentMass,
    /// `ψ = (1-s₁) x^b`.
    PowerTail { b: f64 },
    /// `ψ = (1-s₁) x`.
    Psi1,
    /// Shortest edge of the triangle, `min(2 sin πx, 2 sin πxs₁, 2 sin πxs₂)`.
    Edge,
    /// Area of the triangle, `2 sin(πxs₁) sin(πxs₂) sin(πx)`.
    Area,
    /// `min(x, 1 - xs₁)`; above 1/2 only at the face containing the centre.
    Centroid,
    /// User supplied. `bound`, if known, is a `K` with `ψ ≤ K (1-s₁)`.
    Custom { name: String, f: CustomFn, bound: Option<f64> },
}

impl fmt::Debug for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psi::PowerTail { b } => write!(f, "PowerTail {{ b: {b} }}"),
            Psi::Custom { name, bound, .. } => write!(f, "Custom {{ name: {name:?}, bound: {bound:?} }}"),
            other => f.write_str(other.name()),
        }
    }
}

impl Psi {
    pub fn custom<F>(name: impl Into<String>, f: F, bound: Option<f64>) -> Self
    where
        F: Fn(&Mark) -> f64 + Send + Sync + 'static,
    {
        Psi::Custom { name: name.into(), f: Arc::new(f), bound }
    }

    /// Parses the command-line names `edge`, `area`, `psi1`, `parent_mass`,
    /// `power_tail` (needs `b`) and `centroid`.
    pub fn from_kind(kind: &str, b: Option<f64>) -> Result<Self> {
        let psi = match kind {
            "edge" => Psi::Edge,
            "area" => Psi::Area,
            "psi1" => Psi::Psi1,
            "parent_mass" => Psi::ParentMass,
            "centroid" => Psi::Centroid,
            "power_tail" => {
                let b = b.ok_or_else(|| Error::config("psi kind power_tail needs b"))?;
                if !(b > 0.0 && b.is_finite()) {
                    return Err(Error::config("psi exponent b must be positive"));
                }
                Psi::PowerTail { b }
            }
            other => return Err(Error::config(alloc::format!("unknown size functional '{other}'"))),
        };
        Ok(psi)
    }

    /// `b` such that `ψ(x, s) = φ(s) x^b`, when ψ has that form.
    pub fn mass_exponent(&self) -> Option<f64> {
        match self {
            Psi::ParentMass | Psi::Psi1 | Psi::Edge => Some(1.0),
            Psi::PowerTail { b } => Some(*b),
            Psi::Area => Some(3.0),
            Psi::Centroid | Psi::Custom { .. } => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Psi::ParentMass => "parent_mass",
            Psi::PowerTail { .. } => "power_tail",
            Psi::Psi1 => "psi1",
            Psi::Edge => "edge",
            Psi::Area => "area",
            Psi::Centroid => "centroid",
            Psi::Custom { name, .. } => name,
        }
    }

    pub fn eval(&self, m: &Mark) -> f64 {
        match self {
            Psi::ParentMass => m.x,
            Psi::PowerTail { b } => m.s2 * m.x.powf(*b),
            Psi::Psi1 => m.s2 * m.x,
            Psi::Edge => shortest_edge(m.x, m.x * m.s1, m.x * m.s2),
            Psi::Area => triangle_area(m.x, m.x * m.s1, m.x * m.s2),
            Psi::Centroid => m.x.min(1.0 - m.x * m.s1),
            Psi::Custom { f, .. } => f(m),
        }
    }

    /// Largest value over all marks with `x ≤ 1`.
    pub fn sup(&self) -> f64 {
        match self {
            Psi::ParentMass | Psi::Centroid => 1.0,
            Psi::PowerTail { .. } | Psi::Psi1 => 0.5,
            Psi::Edge => 3.0.sqrt(),
            Psi::Area => 0.75 * 3.0.sqrt(),
            Psi::Custom { .. } => f64::INFINITY,
        }
    }

    /// A constant `K` with `ψ(x, s) ≤ K (1-s₁)` for `x ≤ 1`, if one exists.
    /// Truncating `1-s₁ ≤ δ'` then loses no `ε`-large event once `Kδ' ≤ ε`.
    pub fn smaller_fragment_bound(&self) -> Option<f64> {
        match self {
            Psi::PowerTail { .. } | Psi::Psi1 => Some(1.0),
            // 2 sin(πxs₂) ≤ 2πs₂, and the area carries the same factor.
            Psi::Edge | Psi::Area => Some(2.0 * PI),
            Psi::ParentMass | Psi::Centroid => None,
            Psi::Custom { bound, .. } => *bound,
        }
    }

    /// Smallest parent mass at which `ψ` can exceed `eps`; fragments lighter
    /// than this never produce an `eps`-large dislocation.
    pub fn min_relevant_mass(&self, eps: f64) -> f64 {
        match self {
            Psi::ParentMass | Psi::Centroid => eps,
            Psi::PowerTail { b } => (2.0 * eps).powf(1.0 / b),
            Psi::Psi1 => 2.0 * eps,
            // Shortest edge ≤ 2 sin(πx/2).
            Psi::Edge => {
                if eps >= 2.0 {
                    f64::INFINITY
                } else {
                    2.0 * (0.5 * eps).asin() / PI
                }
            }
            // Area ≤ 2 sin²(πx/2) sin(πx), increasing on (0, 2/3].
            Psi::Area => {
                let bound = |x: f64| 2.0 * (0.5 * PI * x).sin().powi(2) * (PI * x).sin();
                if eps >= bound(2.0 / 3.0) {
                    return f64::INFINITY;
                }
                let (mut lo, mut hi) = (0.0, 2.0 / 3.0);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if bound(mid) > eps {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                lo
            }
            Psi::Custom { .. } => 0.0,
        }
    }
}

/// `min(2 sin πx, 2 sin π·arc1, 2 sin π·arc2)` for arcs `arc1 + arc2 = x`.
pub(crate) fn shortest_edge(x: f64, arc1: f64, arc2: f64) -> f64 {
    let a = (PI * x).sin();
    let b = (PI * arc1).sin();
    let c = (PI * arc2).sin();
    2.0 * a.min(b).min(c)
}

pub(crate) fn triangle_area(x: f64, arc1: f64, arc2: f64) -> f64 {
    2.0 * (PI * arc1).sin() * (PI * arc2).sin() * (PI * x).sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kinds_parse() {
        assert!(matches!(Psi::from_kind("edge", None), Ok(Psi::Edge)));
        assert!(matches!(Psi::from_kind("power_tail", Some(3.0)), Ok(Psi::PowerTail { b }) if b == 3.0));
        assert!(matches!(Psi::from_kind("power_tail", None), Err(Error::Config(_))));
        assert!(matches!(Psi::from_kind("perimeter", None), Err(Error::Config(_))));
    }

    #[test]
    fn custom_functional() {
        let p = Psi::custom("half_x", |m: &Mark| 0.5 * m.x, None);
        assert_eq!(p.eval(&Mark::new(0.8, 0.6)), 0.4);
        assert_eq!(p.name(), "half_x");
    }

    #[test]
    fn relevant_mass_thresholds() {
        let eps = 0.1;
        let x = Psi::Edge.min_relevant_mass(eps);
        assert!((2.0 * (0.5 * PI * x).sin() - eps).abs() < 1e-12);
        let x = Psi::Area.min_relevant_mass(eps);
        assert!((Psi::Area.eval(&Mark::new(x, 0.5)) - eps).abs() < 1e-12);
        assert!(Psi::Area.min_relevant_mass(2.0).is_infinite());
    }

    proptest! {
        #[test]
        fn bounds_hold(x in 1e-6f64..1.0, s1 in 0.5f64..1.0) {
            let m = Mark::new(x, s1);
            for psi in [Psi::Edge, Psi::Area, Psi::Psi1, Psi::PowerTail { b: 3.0 }, Psi::ParentMass, Psi::Centroid] {
                let v = psi.eval(&m);
                prop_assert!(v >= -1e-15 && v <= psi.sup() + 1e-12, "{:?} {}", psi, v);
                if let Some(k) = psi.smaller_fragment_bound() {
                    prop_assert!(v <= k * m.s2 + 1e-15);
                }
                // Below the relevant mass nothing exceeds the level.
                let eps = 0.5 * v;
                if eps > 0.0 {
                    prop_assert!(psi.min_relevant_mass(eps) <= x * (1.0 + 1e-9));
                }
            }
        }
    }
}
