//! The triangulation coded by an excursion, seen through its min-split tree.
//!
//! Every interval of the grid is split at its interior minimum; each split is
//! one triangle of the lamination with arcs `1-x`, `xs₁`, `xs₂`.

mod centroid;
mod functional;
mod metrics;
mod tree;

pub use centroid::{centroid_from_path, find_centroid, longest_chord_fraction, Centroid, LongestChord};
pub use functional::level_functional;
pub use metrics::{count_large, count_large_sweep, triangle_metrics, TriangleMetrics};
pub use tree::{extract_dislocations, DislocationRecord, DislocationTree, NO_CHILD};
