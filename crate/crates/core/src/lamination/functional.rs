use super::DislocationTree;

/// Discrete version of `∫_0^∞ Σ_i w(|I_i(t)|) dt`, the sum running over the
/// interval components of `{e > t}`.
///
/// Each record contributes `w(x)(level - birth_level)`. A unit cell `[k, k+1]`
/// exists as an interval from the later of its two endpoint splits up to the
/// path above it; for the linear interpolant it shrinks from full length at
/// `max(e_k, e_{k+1})` to nothing at `min`, so it contributes
/// `w(1/n)(min - max)/2`. With `w(x) = x` the total is exactly the trapezoid
/// area of the path.
pub fn level_functional<W: Fn(f64) -> f64>(tree: &DislocationTree, w: W) -> f64 {
    let internal: f64 = tree.records().iter().map(|r| w(r.x()) * (r.level - r.birth_level)).sum();
    let v = tree.values();
    let cell: f64 = v.windows(2).map(|p| (p[0] - p[1]).abs()).sum();
    internal - 0.5 * w(1.0 / tree.n() as f64) * cell
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::extract_dislocations;
    use crate::sampling::{sample_brownian_excursion, ExcursionPath, RandomStream};
    use core::f64::consts::PI;
    use num_traits::Float;

    #[test]
    fn hand_example_without_cells() {
        let t = extract_dislocations(&ExcursionPath::new(alloc::vec![0.0, 3.0, 1.0, 2.0, 0.0]).unwrap());
        let v = level_functional(&t, |x| if x > 0.25 { x } else { 0.0 });
        assert!((v - 2.5).abs() < 1e-15);
        let area = level_functional(&t, |x| x);
        assert!((area - 1.5).abs() < 1e-15);
    }

    #[test]
    fn identity_weight_is_path_area() {
        let p = sample_brownian_excursion(1 << 16, RandomStream::new(42, 9)).unwrap();
        let t = extract_dislocations(&p);
        let v = level_functional(&t, |x| x);
        assert!(((v - p.area()) / p.area()).abs() < 1e-10);
    }

    #[test]
    fn sine_weight_dominated_by_area() {
        for id in 0..5 {
            let p = sample_brownian_excursion(1 << 14, RandomStream::new(42, id)).unwrap();
            let t = extract_dislocations(&p);
            let s = level_functional(&t, |x| (PI * x).sin());
            assert!(s > 0.0 && s <= PI * p.area());
        }
    }
}
