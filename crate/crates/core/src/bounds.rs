//! Lower bounds on the longest heterochromatic path and per-instance
//! verdicts.
//!
//! Under a minimum color degree `k`:
//!
//! | k | guaranteed length |
//! |---|-------------------|
//! | 0 | 0 |
//! | 1, 2 | ⌈(k+1)/2⌉ |
//! | 3..=6 | k − 1 |
//! | ≥ 7 | ⌈2k/3⌉ + 1 |
//!
//! Under a minimum pairwise color neighborhood union `s`: `s` for `s <= 2`,
//! `2` for `s = 3`, and `max(⌊(2s+4)/5⌋, ⌈s/3⌉ + 1)` from `s = 4` on.

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeColoredGraph, GraphError};
use crate::path::HeteroPath;

/// Guaranteed path length when every vertex has color degree at least `k`.
pub fn degree_bound(k: usize) -> usize {
    match k {
        0 => 0,
        1 | 2 => (k + 2) / 2,
        3..=6 => k - 1,
        _ => (2 * k).div_ceil(3) + 1,
    }
}

/// Guaranteed path length when every vertex pair has color neighborhood
/// union at least `s`.
pub fn union_bound(s: usize) -> usize {
    match s {
        0..=2 => s,
        3 => 2,
        _ => (2 * s).div_ceil(5).max(s.div_ceil(3) + 1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub k: usize,
    pub s: Option<usize>,
    pub degree_bound: usize,
    pub union_bound: Option<usize>,
    pub exact_length: usize,
    pub heuristic_length: usize,
    pub degree_ok: bool,
    /// True when no union bound applies.
    pub union_ok: bool,
    /// `exact_length` equals the largest applicable bound.
    pub tight: bool,
}

impl BoundReport {
    pub fn violated(&self) -> bool {
        !(self.degree_ok && self.union_ok)
    }

    /// Largest applicable lower bound.
    pub fn best_bound(&self) -> usize {
        self.union_bound
            .map_or(self.degree_bound, |u| u.max(self.degree_bound))
    }
}

/// Verdicts for `g` given an optimal path and a heuristic one.
pub fn check_instance(
    g: &EdgeColoredGraph,
    exact: &HeteroPath,
    heuristic: &HeteroPath,
) -> Result<BoundReport, GraphError> {
    let stats = g.stats()?;
    Ok(report_from(
        stats.k,
        stats.s,
        exact.length(),
        heuristic.length(),
    ))
}

pub(crate) fn report_from(
    k: usize,
    s: Option<usize>,
    exact_length: usize,
    heuristic_length: usize,
) -> BoundReport {
    let degree_bound = degree_bound(k);
    let union_bound = s.map(union_bound);
    let best = union_bound.map_or(degree_bound, |u| u.max(degree_bound));
    BoundReport {
        k,
        s,
        degree_bound,
        union_bound,
        exact_length,
        heuristic_length,
        degree_ok: exact_length >= degree_bound,
        union_ok: union_bound.is_none_or(|u| exact_length >= u),
        tight: exact_length == best,
    }
}
