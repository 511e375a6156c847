//! Heterochromatic paths and the rearrangement moves used to extend them.
//!
//! A path `u1 u2 ... u(l+1)` is stored as its vertex sequence. Move positions
//! (`x`) are **1-based** so that `Rotation { x: 3 }` talks about `u3`, the
//! same vertex the rearrangement templates name.
//!
//! | move | candidate sequence |
//! |------|--------------------|
//! | `TailExtend(v)` | `u1 .. u(l+1) v` |
//! | `HeadExtend(v)` | `v u1 .. u(l+1)` |
//! | `Rotation(x)` | `u(x-1) .. u1 ux .. u(l+1)` |
//! | `Detour(x, v)` | `u1 .. ux v u(x+2) .. u(l+1)` |
//! | `Insertion(x)` | `u2 .. ux u1 u(x+1) .. u(l+1)` |
//! | `CycleRotation(x, v)` | `v ux .. u(l+1) u1 .. u(x-1)` |
//!
//! Guards are never derived symbolically: a move applies exactly when its
//! candidate sequence passes [`check_sequence`].

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{ColorIndex, ColorSet, EdgeColoredGraph, GraphError, Vertex};

/// Why a vertex sequence is not a heterochromatic path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum InvalidPath {
    #[error("empty sequence")]
    Empty,
    #[error("vertex {0} out of range")]
    OutOfRange(Vertex),
    #[error("vertex {0} repeated")]
    RepeatedVertex(Vertex),
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(Vertex, Vertex),
    #[error("color index {0} repeated")]
    RepeatedColor(ColorIndex),
}

/// Validates `seq` and returns the color set of its edges.
pub fn check_sequence(g: &EdgeColoredGraph, seq: &[Vertex]) -> Result<ColorSet, InvalidPath> {
    let first = *seq.first().ok_or(InvalidPath::Empty)?;
    let n = g.vertex_count();
    if first >= n {
        return Err(InvalidPath::OutOfRange(first));
    }
    let mut on_path = vec![false; n];
    on_path[first] = true;
    let mut colors = g.empty_color_set();
    for w in seq.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b >= n {
            return Err(InvalidPath::OutOfRange(b));
        }
        if std::mem::replace(&mut on_path[b], true) {
            return Err(InvalidPath::RepeatedVertex(b));
        }
        let c = g
            .color_between(a, b)
            .ok_or(InvalidPath::NotAdjacent(a, b))?;
        if !colors.insert(c) {
            return Err(InvalidPath::RepeatedColor(c));
        }
    }
    Ok(colors)
}

/// Distinct vertices, consecutive adjacency, pairwise distinct edge colors.
pub fn is_heterochromatic(g: &EdgeColoredGraph, seq: &[Vertex]) -> bool {
    check_sequence(g, seq).is_ok()
}

/// A validated heterochromatic path together with its color set `C(P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeteroPath {
    vertices: Vec<Vertex>,
    colors: ColorSet,
}

impl HeteroPath {
    pub fn new(g: &EdgeColoredGraph, vertices: Vec<Vertex>) -> Result<Self, InvalidPath> {
        let colors = check_sequence(g, &vertices)?;
        Ok(HeteroPath { vertices, colors })
    }

    /// The length-0 path at `v`.
    pub fn single(g: &EdgeColoredGraph, v: Vertex) -> Result<Self, GraphError> {
        g.check_vertex(v)?;
        Ok(HeteroPath {
            vertices: vec![v],
            colors: g.empty_color_set(),
        })
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn colors(&self) -> &ColorSet {
        &self.colors
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// Dense colors of the edges in path order.
    pub fn edge_colors(&self, g: &EdgeColoredGraph) -> Vec<ColorIndex> {
        self.vertices
            .windows(2)
            .map(|w| g.color_between(w[0], w[1]).expect("validated path"))
            .collect()
    }

    pub fn reversed(&self) -> HeteroPath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        HeteroPath {
            vertices,
            colors: self.colors.clone(),
        }
    }

    /// `length <l>: v0 v1 ... vl`
    pub fn render(&self) -> String {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        format!("length {}: {}", self.length(), vs.join(" "))
    }
}

impl fmt::Display for HeteroPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    TailExtend,
    HeadExtend,
    Rotation,
    Detour,
    Insertion,
    CycleRotation,
}

/// A parametric rearrangement. Positions `x` are 1-based, see module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    TailExtend { v: Vertex },
    HeadExtend { v: Vertex },
    Rotation { x: usize },
    Detour { x: usize, v: Vertex },
    Insertion { x: usize },
    CycleRotation { x: usize, v: Vertex },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::TailExtend { .. } => MoveKind::TailExtend,
            Move::HeadExtend { .. } => MoveKind::HeadExtend,
            Move::Rotation { .. } => MoveKind::Rotation,
            Move::Detour { .. } => MoveKind::Detour,
            Move::Insertion { .. } => MoveKind::Insertion,
            Move::CycleRotation { .. } => MoveKind::CycleRotation,
        }
    }

    /// Change in edge count when the move applies.
    pub fn length_delta(&self) -> usize {
        match self.kind() {
            MoveKind::TailExtend | MoveKind::HeadExtend | MoveKind::CycleRotation => 1,
            MoveKind::Rotation | MoveKind::Detour | MoveKind::Insertion => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{mv:?} out of range for a path of length {length}")]
    OutOfRange { mv: Move, length: usize },
}

/// Rearranged vertex sequence for `mv`, without consulting any graph.
///
/// Valid ranges for a path of length `l`: `Rotation` 3..=l+1, `Detour`
/// 1..=l-1, `Insertion` 2..=l, `CycleRotation` 2..=l+1 with `l >= 2`.
pub fn candidate_sequence(path: &[Vertex], mv: Move) -> Result<Vec<Vertex>, MoveError> {
    let len = path.len();
    let l = len.saturating_sub(1);
    let bad = || MoveError::OutOfRange { mv, length: l };
    if len == 0 {
        return Err(bad());
    }
    // u(i) with 1-based i
    let u = |i: usize| path[i - 1];
    let seq = match mv {
        Move::TailExtend { v } => {
            let mut s = path.to_vec();
            s.push(v);
            s
        }
        Move::HeadExtend { v } => {
            let mut s = Vec::with_capacity(len + 1);
            s.push(v);
            s.extend_from_slice(path);
            s
        }
        Move::Rotation { x } => {
            if !(3..=l + 1).contains(&x) {
                return Err(bad());
            }
            let mut s: Vec<Vertex> = (1..x).rev().map(u).collect();
            s.extend_from_slice(&path[x - 1..]);
            s
        }
        Move::Detour { x, v } => {
            if x < 1 || x + 2 > l + 1 {
                return Err(bad());
            }
            let mut s = path[..x].to_vec();
            s.push(v);
            s.extend_from_slice(&path[x + 1..]);
            s
        }
        Move::Insertion { x } => {
            if !(2..=l).contains(&x) {
                return Err(bad());
            }
            let mut s = path[1..x].to_vec();
            s.push(u(1));
            s.extend_from_slice(&path[x..]);
            s
        }
        Move::CycleRotation { x, v } => {
            if l < 2 || !(2..=l + 1).contains(&x) {
                return Err(bad());
            }
            let mut s = Vec::with_capacity(len + 1);
            s.push(v);
            s.extend_from_slice(&path[x - 1..]);
            s.extend_from_slice(&path[..x - 1]);
            s
        }
    };
    Ok(seq)
}

/// `Some(new path)` iff the candidate sequence is heterochromatic in `g`.
pub fn apply_move(
    g: &EdgeColoredGraph,
    path: &HeteroPath,
    mv: Move,
) -> Result<Option<HeteroPath>, MoveError> {
    let seq = candidate_sequence(path.vertices(), mv)?;
    Ok(HeteroPath::new(g, seq).ok())
}

/// Parameterizations worth trying: extends to outside neighbors, chords at
/// `u1` for rotation and insertion, common outside neighbors of `ux` and
/// `u(x+2)` for detours, outside neighbors of `ux` once `u1 u(l+1)` closes a
/// cycle. Ordered by kind, then ascending parameters.
fn candidate_moves(g: &EdgeColoredGraph, path: &HeteroPath) -> Vec<Move> {
    let vs = path.vertices();
    let l = path.length();
    let u = |i: usize| vs[i - 1];
    let n = g.vertex_count();
    let mut on_path = vec![false; n];
    for &v in vs {
        on_path[v] = true;
    }
    let outside = |w: &&(Vertex, ColorIndex)| !on_path[w.0];

    let mut moves = Vec::new();
    moves.extend(
        g.neighbors(path.last())
            .iter()
            .filter(outside)
            .map(|&(v, _)| Move::TailExtend { v }),
    );
    moves.extend(
        g.neighbors(path.first())
            .iter()
            .filter(outside)
            .map(|&(v, _)| Move::HeadExtend { v }),
    );
    for x in 3..=l + 1 {
        if g.has_edge(u(1), u(x)) {
            moves.push(Move::Rotation { x });
        }
    }
    for x in 1..l {
        for &(v, _) in g.neighbors(u(x)).iter().filter(outside) {
            if g.has_edge(v, u(x + 2)) {
                moves.push(Move::Detour { x, v });
            }
        }
    }
    for x in 2..=l {
        if g.has_edge(u(1), u(x)) && g.has_edge(u(1), u(x + 1)) {
            moves.push(Move::Insertion { x });
        }
    }
    if l >= 2 && g.has_edge(u(1), u(l + 1)) {
        for x in 2..=l + 1 {
            for &(v, _) in g.neighbors(u(x)).iter().filter(outside) {
                moves.push(Move::CycleRotation { x, v });
            }
        }
    }
    moves
}

/// Every successful move with the resulting length, in deterministic order.
pub fn enumerate_moves(g: &EdgeColoredGraph, path: &HeteroPath) -> Vec<(Move, usize)> {
    candidate_moves(g, path)
        .into_iter()
        .filter_map(|mv| {
            let next = apply_move(g, path, mv).expect("candidates are in range")?;
            Some((mv, next.length()))
        })
        .collect()
}

/// First successful tail extend, then head extend.
fn try_extend(g: &EdgeColoredGraph, path: &HeteroPath) -> Option<HeteroPath> {
    let tails = g
        .neighbors(path.last())
        .iter()
        .map(|&(v, _)| Move::TailExtend { v });
    let heads = g
        .neighbors(path.first())
        .iter()
        .map(|&(v, _)| Move::HeadExtend { v });
    tails
        .chain(heads)
        .filter(|mv| match *mv {
            Move::TailExtend { v } | Move::HeadExtend { v } => !path.contains(v),
            _ => unreachable!(),
        })
        .find_map(|mv| apply_move(g, path, mv).ok().flatten())
}

/// Greedy extension plus move-based plateau search starting from the
/// length-0 path at `start`.
///
/// After greedy extends stall, the first length-increasing move is taken if
/// any exists. Otherwise the first equal-length move whose result admits an
/// immediate extend is taken; failing that, the first equal-length move to a
/// sequence not seen since the last gain. At most `2n` consecutive
/// equal-length moves are made without a gain.
pub fn local_search(g: &EdgeColoredGraph, start: Vertex) -> Result<HeteroPath, GraphError> {
    let mut path = HeteroPath::single(g, start)?;
    let budget = 2 * g.vertex_count();
    let mut plateau = 0;
    let mut seen: HashSet<Vec<Vertex>> = HashSet::new();

    let mut best_len = 0;
    loop {
        while let Some(next) = try_extend(g, &path) {
            path = next;
        }
        if path.length() > best_len {
            best_len = path.length();
            plateau = 0;
            seen.clear();
        }
        seen.insert(path.vertices().to_vec());
        if plateau >= budget {
            break;
        }

        let moves = enumerate_moves(g, &path);
        let l = path.length();
        if let Some(&(mv, _)) = moves.iter().find(|(_, len)| *len > l) {
            path = apply_move(g, &path, mv)
                .unwrap()
                .expect("enumerated moves apply");
            continue;
        }

        let sideways: Vec<HeteroPath> = moves
            .iter()
            .filter(|(_, len)| *len == l)
            .map(|&(mv, _)| {
                apply_move(g, &path, mv)
                    .unwrap()
                    .expect("enumerated moves apply")
            })
            .collect();
        let chosen = sideways
            .iter()
            .position(|p| try_extend(g, p).is_some())
            .or_else(|| sideways.iter().position(|p| !seen.contains(p.vertices())));
        match chosen {
            Some(i) => {
                path = sideways.into_iter().nth(i).unwrap();
                plateau += 1;
            }
            None => break,
        }
    }
    Ok(path)
}

/// Best [`local_search`] result over all start vertices; ties go to the
/// smaller start.
pub fn local_search_all(g: &EdgeColoredGraph) -> Result<HeteroPath, GraphError> {
    let mut best: Option<HeteroPath> = None;
    for v in 0..g.vertex_count() {
        let p = local_search(g, v)?;
        if best.as_ref().is_none_or(|b| p.length() > b.length()) {
            best = Some(p);
        }
    }
    best.ok_or(GraphError::Empty)
}
