//! Shared fixtures for the criterion benches.

use rainbow_core::{extremal_union, random_colored, EdgeColoredGraph};

/// Random instances at the sizes the sweep uses, with a color count around
/// the vertex count where the search is hardest.
pub fn sweep_sized(n: usize, count: u64) -> Vec<EdgeColoredGraph> {
    (0..count)
        .map(|seed| random_colored(n, 0.6, n as u64, seed))
        .collect()
}

pub fn extremal_family(max_s: usize) -> Vec<EdgeColoredGraph> {
    (1..=max_s).map(extremal_union).collect()
}
