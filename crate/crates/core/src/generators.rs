//! Instance generators: rainbow complete graphs, the extremal family for the
//! neighborhood-union bound, and seeded random colorings.
//!
//! # Random instance contract
//!
//! `random_colored(n, p, c, seed)` seeds a xoshiro256++ generator with
//! `seed` through SplitMix64 (`Xoshiro256PlusPlus::seed_from_u64`). Vertex
//! pairs are visited in lexicographic order `(0,1), (0,2), ..., (n-2,n-1)`;
//! for each pair one 64-bit word `r` is drawn and the edge is present iff
//! `(r >> 11) * 2^-53 < p`. A present edge then draws one more word `w` and
//! gets color `(w * c) >> 64` (128-bit product). Nothing else consumes
//! randomness, so the graph depends only on `(n, p, c, seed)`.

use std::fmt;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::EdgeColoredGraph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("n must be at least 1")]
    NoVertices,
    #[error("s must be at least 1")]
    ZeroUnion,
    #[error("edge probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("color count must be at least 1")]
    NoColors,
}

/// Description of a generated instance. Serialized as a tagged JSON object,
/// e.g. `{"kind":"random","n":9,"p":0.6,"c":14,"seed":7}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenSpec {
    RainbowComplete { n: usize },
    ExtremalUnion { s: usize },
    Random { n: usize, p: f64, c: u64, seed: u64 },
}

impl GenSpec {
    pub fn validate(&self) -> Result<(), GenError> {
        match *self {
            GenSpec::RainbowComplete { n: 0 } => Err(GenError::NoVertices),
            GenSpec::ExtremalUnion { s: 0 } => Err(GenError::ZeroUnion),
            GenSpec::Random { n, p, c, .. } => {
                if n == 0 {
                    Err(GenError::NoVertices)
                } else if !(0.0..=1.0).contains(&p) {
                    Err(GenError::Probability(p))
                } else if c == 0 {
                    Err(GenError::NoColors)
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn generate(&self) -> Result<EdgeColoredGraph, GenError> {
        self.validate()?;
        Ok(match *self {
            GenSpec::RainbowComplete { n } => rainbow_complete(n),
            GenSpec::ExtremalUnion { s } => extremal_union(s),
            GenSpec::Random { n, p, c, seed } => random_colored(n, p, c, seed),
        })
    }
}

/// Renders as the equivalent CLI invocation, used in `.ecg` header comments.
impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::RainbowComplete { n } => write!(f, "gen rainbow-k --n {n}"),
            GenSpec::ExtremalUnion { s } => write!(f, "gen extremal --s {s}"),
            GenSpec::Random { n, p, c, seed } => {
                write!(f, "gen random --n {n} --p {p} --c {c} --seed {seed}")
            }
        }
    }
}

/// Rainbow coloring of `K_n` minus the listed edges: colors `0, 1, ...` in
/// lexicographic order of the remaining edges.
fn rainbow_minus(n: usize, skip: &[(usize, usize)]) -> EdgeColoredGraph {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            if !skip.contains(&(u, v)) {
                edges.push((u, v, edges.len() as u64));
            }
        }
    }
    EdgeColoredGraph::new(n, edges).expect("complete graph is simple")
}

pub fn rainbow_complete(n: usize) -> EdgeColoredGraph {
    rainbow_minus(n, &[])
}

/// `G_s`: rainbow `K_{(s+4)/2}` minus edge `{0,1}` for even `s`, rainbow
/// `K_{(s+3)/2}` for odd `s`. Every vertex pair has color neighborhood union
/// at least `s` and the longest rainbow path has length `floor(s/2) + 1`.
pub fn extremal_union(s: usize) -> EdgeColoredGraph {
    if s.is_multiple_of(2) {
        rainbow_minus((s + 4) / 2, &[(0, 1)])
    } else {
        rainbow_minus((s + 3) / 2, &[])
    }
}

/// Seeded Erdős–Rényi graph with uniformly drawn colors `0..c`; see the
/// module docs for the exact sampling contract.
pub fn random_colored(n: usize, p: f64, c: u64, seed: u64) -> EdgeColoredGraph {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let r = rng.next_u64();
            if unit_interval(r) < p {
                let color = ((rng.next_u64() as u128 * c as u128) >> 64) as u64;
                edges.push((u, v, color));
            }
        }
    }
    EdgeColoredGraph::new(n, edges).expect("generated graph is simple")
}

/// Top 53 bits of `r` as a float in `[0, 1)`.
pub(crate) fn unit_interval(r: u64) -> f64 {
    (r >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
