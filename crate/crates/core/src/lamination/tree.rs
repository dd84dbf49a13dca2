use alloc::vec;
use alloc::vec::Vec;

use crate::mark::Mark;
use crate::sampling::ExcursionPath;

/// Child slot of a record whose side is a single grid cell.
pub const NO_CHILD: u32 = u32::MAX;

/// One split of the grid interval `[lo, hi]` at its interior minimum `split`.
///
/// Lengths stay integral so the fractions are exact ratios of cell counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DislocationRecord {
    pub lo: u32,
    pub hi: u32,
    pub split: u32,
    /// Number of cells of the whole grid.
    pub n: u32,
    /// Path value at `split`.
    pub level: f64,
    /// Level of the parent split, 0 at the root.
    pub birth_level: f64,
}

impl DislocationRecord {
    // A record always spans at least two cells.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u32 {
        self.hi - self.lo
    }

    pub fn left_len(&self) -> u32 {
        self.split - self.lo
    }

    pub fn right_len(&self) -> u32 {
        self.hi - self.split
    }

    /// Cell counts of the larger and smaller children.
    pub fn child_lens(&self) -> (u32, u32) {
        let (l, r) = (self.left_len(), self.right_len());
        if l >= r {
            (l, r)
        } else {
            (r, l)
        }
    }

    pub fn x(&self) -> f64 {
        self.len() as f64 / self.n as f64
    }

    pub fn s1(&self) -> f64 {
        self.child_lens().0 as f64 / self.len() as f64
    }

    pub fn s2(&self) -> f64 {
        self.child_lens().1 as f64 / self.len() as f64
    }

    /// Arc fractions `(xs₁, xs₂)` of the circle, as exact ratios.
    pub fn arcs(&self) -> (f64, f64) {
        let (big, small) = self.child_lens();
        (big as f64 / self.n as f64, small as f64 / self.n as f64)
    }

    pub fn mark(&self) -> Mark {
        Mark { x: self.x(), s1: self.s1(), s2: self.s2() }
    }
}

/// The `n - 1` splits of an `n`-cell excursion in pre-order, with links.
#[derive(Debug, Clone, PartialEq)]
pub struct DislocationTree {
    n: usize,
    records: Vec<DislocationRecord>,
    parent: Vec<u32>,
    children: Vec<[u32; 2]>,
    values: Vec<f64>,
    ties: usize,
}

impl DislocationTree {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Records in pre-order; index 0 is the root.
    pub fn records(&self) -> &[DislocationRecord] {
        &self.records
    }

    pub fn root(&self) -> &DislocationRecord {
        &self.records[0]
    }

    /// Parent index, or `None` at the root.
    pub fn parent(&self, i: usize) -> Option<usize> {
        let p = self.parent[i];
        (p != NO_CHILD).then_some(p as usize)
    }

    /// Left and right children; [`NO_CHILD`] marks a single cell.
    pub fn children(&self, i: usize) -> [u32; 2] {
        self.children[i]
    }

    /// Path values `e_0..e_n` the tree was built from.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Equal interior values met while building; they are ordered by index.
    pub fn ties(&self) -> usize {
        self.ties
    }
}

/// Min-split tree of the excursion in `O(n)`.
///
/// A Cartesian tree over the interior values gives every split point its
/// parent; equal values are ordered by grid index, so the earlier one splits
/// first. Intervals and birth levels are then filled in by a pre-order walk.
pub fn extract_dislocations(path: &ExcursionPath) -> DislocationTree {
    let values = path.values();
    let n = path.n();
    assert!(n < u32::MAX as usize, "grid too large for 32-bit indices");
    let nodes = n - 1;
    // Positions 1..n-1 are stored at slot position - 1.
    let mut left = vec![NO_CHILD; nodes];
    let mut right = vec![NO_CHILD; nodes];
    let mut stack: Vec<u32> = Vec::with_capacity(64);
    let mut ties = 0;
    for slot in 0..nodes {
        let v = values[slot + 1];
        let mut last = NO_CHILD;
        while let Some(&top) = stack.last() {
            let tv = values[top as usize + 1];
            if tv == v {
                ties += 1;
            }
            if tv > v {
                last = top;
                stack.pop();
            } else {
                break;
            }
        }
        left[slot] = last;
        if let Some(&top) = stack.last() {
            right[top as usize] = slot as u32;
        }
        stack.push(slot as u32);
    }
    let root = stack[0];

    let mut records = Vec::with_capacity(nodes);
    let mut parent = Vec::with_capacity(nodes);
    let mut children = Vec::with_capacity(nodes);
    // (slot, lo, hi, parent record, birth level, which child of the parent)
    let mut todo: Vec<(u32, u32, u32, u32, f64, usize)> = Vec::with_capacity(64);
    todo.push((root, 0, n as u32, NO_CHILD, 0.0, 0));
    while let Some((slot, lo, hi, par, birth, side)) = todo.pop() {
        let idx = records.len() as u32;
        let split = slot + 1;
        let level = values[split as usize];
        records.push(DislocationRecord { lo, hi, split, n: n as u32, level, birth_level: birth });
        parent.push(par);
        children.push([NO_CHILD, NO_CHILD]);
        if par != NO_CHILD {
            children[par as usize][side] = idx;
        }
        let (l, r) = (left[slot as usize], right[slot as usize]);
        // Right first so the left subtree is numbered next (pre-order).
        if r != NO_CHILD {
            todo.push((r, split, hi, idx, level, 1));
        }
        if l != NO_CHILD {
            todo.push((l, lo, split, idx, level, 0));
        }
    }
    debug_assert_eq!(records.len(), nodes);
    DislocationTree { n, records, parent, children, values: values.to_vec(), ties }
}
