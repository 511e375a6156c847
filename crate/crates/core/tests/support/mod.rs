//! Test-only checks of the structural facts about longest heterochromatic
//! paths that the exchange arguments rely on. Each check takes the complete
//! list of longest paths (both orientations) and returns violations as text.

#![allow(dead_code)]

use rainbow_core::graph::{ColorIndex, ColorSet, EdgeColoredGraph, Vertex};
use rainbow_core::path::HeteroPath;

#[derive(Debug, Default, Clone, Copy)]
pub struct PremiseTally {
    /// Premises found to hold (so the check was not vacuous).
    pub rotation_premises: u64,
    pub minimal_chord_premises: u64,
    pub insertion_premises: u64,
}

fn outside<'a>(
    g: &'a EdgeColoredGraph,
    p: &'a HeteroPath,
) -> impl Iterator<Item = (Vertex, ColorIndex)> + 'a {
    g.neighbors(p.last())
        .iter()
        .copied()
        .filter(move |&(v, _)| !p.contains(v))
}

/// Rotation fact. For a longest `P = u1 .. u(l+1)` and `3 <= x <= l` with
/// `C(u1 ux)` outside `C(P)`, the color of `u(x-1) ux` is not on any edge
/// from `u(l+1)` to a vertex off `P`. Equivalently it is not in
/// `CN(u(l+1)) - C(u1 u(l+1), ..., u(l-1) u(l+1))`.
pub fn check_rotation(
    g: &EdgeColoredGraph,
    longest: &[HeteroPath],
    tally: &mut PremiseTally,
) -> Vec<String> {
    let mut bad = Vec::new();
    for p in longest {
        let vs = p.vertices();
        let l = p.length();
        let u = |i: usize| vs[i - 1];
        let end = u(l + 1);
        let cn_end = g.color_neighborhood(end).unwrap();
        let mut to_prefix = g.empty_color_set();
        for j in 1..l {
            if let Some(c) = g.color_between(u(j), end) {
                to_prefix.insert(c);
            }
        }
        let exposed: ColorSet = cn_end.difference(&to_prefix);
        for x in 3..=l {
            let Some(chord) = g.color_between(u(1), u(x)) else {
                continue;
            };
            if p.colors().contains(chord) {
                continue;
            }
            tally.rotation_premises += 1;
            let freed = g.color_between(u(x - 1), u(x)).unwrap();
            if let Some((v, _)) = outside(g, p).find(|&(_, c)| c == freed) {
                bad.push(format!(
                    "rotation: path {vs:?}, x = {x}, external {v} carries freed color"
                ));
            }
            if exposed.contains(freed) {
                bad.push(format!("rotation (set form): path {vs:?}, x = {x}"));
            }
        }
    }
    bad
}

/// For every longest path and every vertex `v1` off the path adjacent to
/// its end, the 1-based index `j` of the path edge sharing the color of
/// `u(l+1) v1`.
fn repeat_positions(g: &EdgeColoredGraph, p: &HeteroPath) -> Vec<(Vertex, usize)> {
    let colors = p.edge_colors(g);
    outside(g, p)
        .map(|(v, c)| {
            let j = colors
                .iter()
                .position(|&pc| pc == c)
                .expect("a longest path cannot be extended");
            (v, j + 1)
        })
        .collect()
}

/// Minimal-chord facts. Among all longest paths `P` with an outside vertex
/// `v1` at the end, pick those minimizing the index `j0` of the path edge
/// colored like `u(l+1) v1`. Then every existing chord `u1 ux` with
/// `j0 < x <= 2 j0` has its color in `C(P)`, and for `2 j0 < x <= l` the
/// chords `u1 ux`, `u1 u(x+1)` contribute at most one color outside `C(P)`.
pub fn check_minimal_repeat(
    g: &EdgeColoredGraph,
    longest: &[HeteroPath],
    tally: &mut PremiseTally,
) -> Vec<String> {
    let mut bad = Vec::new();
    let configs: Vec<(&HeteroPath, Vertex, usize)> = longest
        .iter()
        .flat_map(|p| {
            repeat_positions(g, p)
                .into_iter()
                .map(move |(v, j)| (p, v, j))
        })
        .collect();
    let Some(j0) = configs.iter().map(|c| c.2).min() else {
        return bad;
    };
    for &(p, v1, j) in &configs {
        if j != j0 {
            continue;
        }
        let vs = p.vertices();
        let l = p.length();
        let u = |i: usize| vs[i - 1];
        for x in j0 + 1..=(2 * j0).min(l + 1) {
            if let Some(c) = g.color_between(u(1), u(x)) {
                tally.minimal_chord_premises += 1;
                if !p.colors().contains(c) {
                    bad.push(format!(
                        "minimal repeat: path {vs:?}, v1 = {v1}, j0 = {j0}, x = {x}"
                    ));
                }
            }
        }
        for x in 2 * j0 + 1..=l {
            let fresh: std::collections::BTreeSet<ColorIndex> = [u(x), u(x + 1)]
                .into_iter()
                .filter_map(|w| g.color_between(u(1), w))
                .filter(|&c| !p.colors().contains(c))
                .collect();
            tally.insertion_premises += 1;
            if fresh.len() > 1 {
                bad.push(format!(
                    "insertion pair: path {vs:?}, v1 = {v1}, j0 = {j0}, x = {x}"
                ));
            }
        }
    }
    bad
}
