use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::{DislocationRecord, DislocationTree, NO_CHILD};
use crate::sampling::ExcursionPath;
use crate::{Error, Result};

/// The record of the face containing the centre of the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centroid {
    pub index: usize,
    pub record: DislocationRecord,
    /// Some arc is exactly half the circle, so the centre sits on a chord.
    pub degenerate: bool,
}

/// Longest chord of the lamination as an arc fraction `L` and its length
/// `2 sin(πL)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongestChord {
    pub fraction: f64,
    pub length: f64,
}

/// Walks down from the root into the child holding more than half of the
/// circle until neither child does.
///
/// When a child holds exactly half, the walk stops at the current record and
/// reports it as degenerate.
pub fn find_centroid(tree: &DislocationTree) -> Centroid {
    let n = tree.n() as u64;
    let mut i = 0;
    let mut degenerate = false;
    loop {
        let r = tree.records()[i];
        let [lc, rc] = tree.children(i);
        let (l, rr) = (r.left_len() as u64, r.right_len() as u64);
        degenerate |= 2 * l == n || 2 * rr == n;
        if 2 * l > n && lc != NO_CHILD {
            i = lc as usize;
        } else if 2 * rr > n && rc != NO_CHILD {
            i = rc as usize;
        } else {
            return Centroid { index: i, record: r, degenerate };
        }
    }
}

/// [`find_centroid`] without building the tree.
///
/// Every record on the way down to the centroid holds more than half of the
/// circle, so its interval contains the midpoint `n/2`. The records containing
/// the midpoint are the running minima seen when scanning outwards from it,
/// and each one's interval ends at the next running minimum on either side
/// that beats it (ties go to the earlier index, as in the tree). The centroid
/// is the smallest of these intervals that still exceeds half the circle.
/// `index` is left at 0 since pre-order numbers are unknown here.
pub fn centroid_from_path(path: &ExcursionPath) -> Centroid {
    let v = path.values();
    let n = path.n();
    let half = n / 2;
    // Left minima at indices ≤ n/2 (ties kept), right minima beyond (strict).
    let mut left = Vec::new();
    let mut m = f64::INFINITY;
    for k in (1..=half).rev() {
        if v[k] <= m {
            m = v[k];
            left.push(k);
        }
    }
    let mut right = Vec::new();
    m = f64::INFINITY;
    for (k, &x) in v.iter().enumerate().take(n).skip(half + 1) {
        if x < m {
            m = x;
            right.push(k);
        }
    }
    let first_right_below = |x: f64| right.iter().copied().find(|&r| v[r] < x).unwrap_or(n);
    let first_left_at_most = |x: f64| left.iter().copied().find(|&l| v[l] <= x).unwrap_or(0);
    let mut best: Option<(usize, usize, usize)> = None;
    let mut consider = |lo: usize, split: usize, hi: usize| {
        if 2 * (hi - lo) > n && best.map_or(true, |(bl, _, bh)| hi - lo < bh - bl) {
            best = Some((lo, split, hi));
        }
    };
    for (i, &k) in left.iter().enumerate() {
        consider(left.get(i + 1).copied().unwrap_or(0), k, first_right_below(v[k]));
    }
    for (j, &k) in right.iter().enumerate() {
        consider(first_left_at_most(v[k]), k, right.get(j + 1).copied().unwrap_or(n));
    }
    let (lo, split, hi) = best.expect("the root holds the whole circle");
    let nn = n as u64;
    let (l, r) = ((split - lo) as u64, (hi - split) as u64);
    let record = DislocationRecord {
        lo: lo as u32,
        hi: hi as u32,
        split: split as u32,
        n: n as u32,
        level: v[split],
        birth_level: v[lo].max(v[hi]),
    };
    Centroid { index: 0, record, degenerate: 2 * l == nn || 2 * r == nn }
}

/// `L = max(1-x, xs₁)` for the centroid record.
///
/// Accepts the closed condition `x ≥ 1/2`, `xs₁ ≤ 1/2` so degenerate centroids
/// go through with `L = 1/2`.
pub fn longest_chord_fraction(centroid: &DislocationRecord) -> Result<LongestChord> {
    let n = centroid.n as u64;
    let len = centroid.len() as u64;
    let (big, _) = centroid.child_lens();
    if 2 * len < n || 2 * big as u64 > n {
        return Err(Error::domain(alloc::format!(
            "record [{}, {}] does not contain the centre",
            centroid.lo,
            centroid.hi
        )));
    }
    let fraction = (n - len).max(big as u64) as f64 / n as f64;
    Ok(LongestChord { fraction, length: 2.0 * (PI * fraction).sin() })
}
