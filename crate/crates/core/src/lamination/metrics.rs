use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::{DislocationRecord, DislocationTree};
use crate::mark::{shortest_edge, triangle_area, Psi};
use crate::stats::sweep::check_eps_grid;
use crate::{Error, Result};

/// Chord lengths and area of the triangle attached to a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleMetrics {
    /// `(2 sin πx, 2 sin πxs₁, 2 sin πxs₂)`.
    pub edges: [f64; 3],
    pub shortest: f64,
    pub area: f64,
}

pub fn triangle_metrics(rec: &DislocationRecord) -> TriangleMetrics {
    let x = rec.x();
    let (a1, a2) = rec.arcs();
    TriangleMetrics {
        edges: [2.0 * (PI * x).sin(), 2.0 * (PI * a1).sin(), 2.0 * (PI * a2).sin()],
        shortest: shortest_edge(x, a1, a2),
        area: triangle_area(x, a1, a2),
    }
}

fn psi_of(psi: &Psi, rec: &DislocationRecord) -> f64 {
    match psi {
        // Use the exact arc ratios for the geometric functionals.
        Psi::Edge => {
            let (a1, a2) = rec.arcs();
            shortest_edge(rec.x(), a1, a2)
        }
        Psi::Area => {
            let (a1, a2) = rec.arcs();
            triangle_area(rec.x(), a1, a2)
        }
        other => other.eval(&rec.mark()),
    }
}

/// Number of records with `ψ > eps`.
pub fn count_large(tree: &DislocationTree, psi: &Psi, eps: f64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(Error::domain(alloc::format!("eps must be positive, got {eps}")));
    }
    Ok(tree.records().iter().filter(|r| psi_of(psi, r) > eps).count() as u64)
}

/// [`count_large`] at every point of a strictly increasing grid, in one pass.
pub fn count_large_sweep(tree: &DislocationTree, psi: &Psi, eps_grid: &[f64]) -> Result<Vec<u64>> {
    check_eps_grid(eps_grid)?;
    // hist[k] = number of records exceeding exactly the first k grid points.
    let mut hist = vec![0u64; eps_grid.len() + 1];
    for r in tree.records() {
        let v = psi_of(psi, r);
        hist[eps_grid.partition_point(|e| *e < v)] += 1;
    }
    let mut out = vec![0u64; eps_grid.len()];
    let mut acc = 0;
    for j in (0..eps_grid.len()).rev() {
        acc += hist[j + 1];
        out[j] = acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::extract_dislocations;
    use crate::mark::Mark;
    use crate::sampling::{sample_brownian_excursion, ExcursionPath, RandomStream};

    fn rec(lo: u32, split: u32, hi: u32, n: u32) -> DislocationRecord {
        DislocationRecord { lo, hi, split, n, level: 1.0, birth_level: 0.0 }
    }

    #[test]
    fn equilateral() {
        let m = triangle_metrics(&rec(0, 2, 4, 6));
        for e in m.edges {
            assert!((e - 3.0.sqrt()).abs() < 1e-15);
        }
        assert!((m.area - 0.75 * 3.0.sqrt()).abs() < 1e-15);
        assert!((m.area - 1.299_038_1).abs() < 1e-7);
    }

    #[test]
    fn degenerate_mark() {
        let m = Mark { x: 1.0, s1: 1.0, s2: 0.0 };
        assert!(Psi::Edge.eval(&m).abs() < 1e-15);
        assert!(Psi::Area.eval(&m).abs() < 1e-15);
    }

    #[test]
    fn unequal_split() {
        // x = 0.5, s = (0.6, 0.4)
        let m = triangle_metrics(&rec(0, 6, 10, 20));
        assert!((m.edges[0] - 2.0).abs() < 1e-15);
        assert!((m.edges[1] - 1.618_034_0).abs() < 1e-7);
        assert!((m.edges[2] - 1.175_570_5).abs() < 1e-7);
        assert!((m.shortest - 1.175_570_5).abs() < 1e-7);
        assert!((m.area - 0.951_056_5).abs() < 1e-7);
        // Oracle: the same products written out independently.
        let oracle = 2.0 * (0.3 * PI).sin() * (0.2 * PI).sin() * (0.5 * PI).sin();
        assert!((m.area - oracle).abs() < 1e-15);
    }

    #[test]
    fn single_record_counts() {
        // n = 3 cells, root split giving x = 1 would not be equilateral; use a
        // toy tree with one record of x = 2/3, s = (1/2, 1/2) as the only
        // interesting one: the count only looks at that record's value.
        let r = rec(0, 2, 4, 6);
        assert!(psi_of(&Psi::Edge, &r) > 1.0);
        assert!(psi_of(&Psi::Edge, &r) < 2.0);
        let t = extract_dislocations(&ExcursionPath::new(alloc::vec![0.0, 1.0, 0.0]).unwrap());
        assert_eq!(count_large(&t, &Psi::Edge, 1.0).unwrap(), 0);
        assert!(count_large(&t, &Psi::Edge, 0.0).is_err());
    }

    #[test]
    fn sweep_matches_pointwise_and_is_monotone() {
        let path = sample_brownian_excursion(1 << 12, RandomStream::new(42, 1)).unwrap();
        let t = extract_dislocations(&path);
        let grid = [0.01, 0.05, 0.1, 0.4, 1.0, 1.8];
        for psi in [Psi::Edge, Psi::Area, Psi::Psi1] {
            let s = count_large_sweep(&t, &psi, &grid).unwrap();
            for (j, e) in grid.iter().enumerate() {
                assert_eq!(s[j], count_large(&t, &psi, *e).unwrap());
            }
            assert!(s.windows(2).all(|w| w[0] >= w[1]));
        }
        assert_eq!(count_large(&t, &Psi::Edge, 1.7321).unwrap(), 0);
        for r in t.records() {
            let m = triangle_metrics(r);
            assert!(m.shortest >= 0.0 && m.shortest <= 3.0.sqrt() + 1e-15);
            assert!(m.area >= 0.0 && m.area <= 0.75 * 3.0.sqrt() + 1e-15);
        }
    }
}
