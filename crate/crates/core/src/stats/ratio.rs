use alloc::vec::Vec;

use num_traits::Float;

use super::{EpsilonSweep, Welford};
use crate::{Error, Result};

/// What `ε^λ N(ε)` is compared with.
#[derive(Debug, Clone, PartialEq)]
pub enum RatioTarget {
    /// Deterministic limit shared by all replicates.
    Scalar(f64),
    /// One random limit per replicate, in replicate order.
    PerReplicate(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub eps: f64,
    pub mean_ratio: f64,
    pub var_ratio: f64,
    /// Pearson correlation of `ε^λ N(ε)` with the per-replicate target; `None`
    /// for scalar targets or when either side has zero variance.
    pub corr: Option<f64>,
    pub m_effective: usize,
    /// Replicates dropped because their target was zero or not finite.
    pub excluded: usize,
}

/// Pearson correlation, `None` if either sample is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n != ys.len() || n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

pub fn ratio_diagnostic(sweep: &EpsilonSweep, target: &RatioTarget) -> Result<Vec<RatioRow>> {
    let m = sweep.replicates();
    let targets: Vec<f64> = match target {
        RatioTarget::Scalar(t) => alloc::vec![*t; m],
        RatioTarget::PerReplicate(ts) => {
            if ts.len() != m {
                return Err(Error::config(alloc::format!("{} targets supplied for {m} replicates", ts.len())));
            }
            ts.clone()
        }
    };
    let keep: Vec<usize> = (0..m).filter(|&i| targets[i] != 0.0 && targets[i].is_finite()).collect();
    let excluded = m - keep.len();
    let mut rows = Vec::with_capacity(sweep.eps_grid().len());
    for (j, &eps) in sweep.eps_grid().iter().enumerate() {
        let ratios: Welford = keep.iter().map(|&i| sweep.scaled(i, j) / targets[i]).collect();
        let corr = match target {
            RatioTarget::Scalar(_) => None,
            RatioTarget::PerReplicate(_) => {
                let xs: Vec<f64> = keep.iter().map(|&i| sweep.scaled(i, j)).collect();
                let ys: Vec<f64> = keep.iter().map(|&i| targets[i]).collect();
                pearson(&xs, &ys)
            }
        };
        rows.push(RatioRow {
            eps,
            mean_ratio: if keep.is_empty() { f64::NAN } else { ratios.mean() },
            var_ratio: ratios.variance(),
            corr,
            m_effective: keep.len(),
            excluded,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sweep(rows: &[Vec<u64>]) -> EpsilonSweep {
        let mut s = EpsilonSweep::new(vec![0.5, 1.0], 1.0).unwrap();
        for r in rows {
            s.push(r.clone()).unwrap();
        }
        s
    }

    #[test]
    fn scalar_target() {
        let s = sweep(&[vec![4, 2], vec![4, 2]]);
        let rows = ratio_diagnostic(&s, &RatioTarget::Scalar(2.0)).unwrap();
        assert!((rows[0].mean_ratio - 1.0).abs() < 1e-15);
        assert!(rows[0].corr.is_none());
    }

    #[test]
    fn per_replicate_target_and_exclusion() {
        let s = sweep(&[vec![2, 1], vec![4, 2], vec![6, 3], vec![8, 4]]);
        let rows = ratio_diagnostic(&s, &RatioTarget::PerReplicate(vec![1.0, 2.0, 0.0, 4.0])).unwrap();
        assert_eq!(rows[0].excluded, 1);
        assert_eq!(rows[0].m_effective, 3);
        assert!((rows[0].mean_ratio - 1.0).abs() < 1e-15);
        assert!((rows[0].corr.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_correlation() {
        let s = sweep(&[vec![3, 1], vec![3, 1]]);
        let rows = ratio_diagnostic(&s, &RatioTarget::PerReplicate(vec![1.0, 1.0])).unwrap();
        assert!(rows[0].corr.is_none());
    }

    #[test]
    fn target_length_checked() {
        let s = sweep(&[vec![3, 1], vec![3, 1]]);
        assert!(ratio_diagnostic(&s, &RatioTarget::PerReplicate(vec![1.0])).is_err());
    }
}
