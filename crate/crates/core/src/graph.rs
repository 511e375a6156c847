//! Immutable edge-colored graph model, color neighborhoods and the `.ecg`
//! text format.
//!
//! Color labels are arbitrary `u64` values. On construction they are mapped to
//! dense indices `0..c` so that color sets can be fixed-width bitsets; every
//! algorithm in the crate works on the dense indices and only the I/O layer
//! talks about labels.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex id, dense and 0-based.
pub type Vertex = usize;

/// Dense color index inside one graph.
pub type ColorIndex = usize;

/// A color label as it appears in the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub u64);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("parallel edge {{{0}, {1}}}")]
    ParallelEdge(Vertex, Vertex),
    #[error("color union of a vertex with itself ({0})")]
    SameVertex(Vertex),
    #[error("graph has no vertices")]
    Empty,
}

/// Membership set over the dense color indices of one graph.
#[derive(Debug, Clone)]
pub struct ColorSet(FixedBitSet);

impl PartialEq for ColorSet {
    fn eq(&self, other: &Self) -> bool {
        self.0.ones().eq(other.0.ones())
    }
}

impl Eq for ColorSet {}

impl ColorSet {
    /// Empty set able to hold colors `0..capacity`.
    pub fn with_capacity(capacity: usize) -> Self {
        ColorSet(FixedBitSet::with_capacity(capacity))
    }

    pub fn insert(&mut self, color: ColorIndex) -> bool {
        !self.0.put(color)
    }

    pub fn remove(&mut self, color: ColorIndex) {
        self.0.set(color, false);
    }

    pub fn contains(&self, color: ColorIndex) -> bool {
        self.0.contains(color)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn union(&self, other: &ColorSet) -> ColorSet {
        let mut out = self.0.clone();
        out.grow(other.0.len());
        out.union_with(&other.0);
        ColorSet(out)
    }

    pub fn difference(&self, other: &ColorSet) -> ColorSet {
        let mut out = self.0.clone();
        out.difference_with(&other.0);
        ColorSet(out)
    }

    pub fn union_len(&self, other: &ColorSet) -> usize {
        self.0.union_count(&other.0)
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Dense indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = ColorIndex> + '_ {
        self.0.ones()
    }
}

impl FromIterator<ColorIndex> for ColorSet {
    fn from_iter<I: IntoIterator<Item = ColorIndex>>(iter: I) -> Self {
        let mut set = FixedBitSet::new();
        for c in iter {
            set.grow(c + 1);
            set.insert(c);
        }
        ColorSet(set)
    }
}

/// One stored edge, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub color: ColorId,
}

/// Summary statistics: minimum color degree `k`, minimum pairwise color
/// neighborhood union `s` (absent for a single vertex) and the number of
/// distinct colors `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub k: usize,
    pub s: Option<usize>,
    pub c: usize,
}

/// Simple undirected graph with one color per edge.
#[derive(Debug, Clone)]
pub struct EdgeColoredGraph {
    n: usize,
    edges: Vec<Edge>,
    labels: Vec<ColorId>,
    adjacency: Vec<Vec<(Vertex, ColorIndex)>>,
}

impl PartialEq for EdgeColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for EdgeColoredGraph {}

impl EdgeColoredGraph {
    /// Builds a graph on `n` vertices. Endpoint order in each triple is
    /// irrelevant.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, u64)>,
    {
        let mut list = Vec::new();
        for (a, b, color) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge {
                u,
                v,
                color: ColorId(color),
            });
        }
        list.sort_by_key(|e| (e.u, e.v));
        if let Some(w) = list
            .windows(2)
            .find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v))
        {
            return Err(GraphError::ParallelEdge(w[0].u, w[0].v));
        }

        let mut dense: HashMap<ColorId, ColorIndex> = HashMap::new();
        let mut labels = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for e in &list {
            let idx = *dense.entry(e.color).or_insert_with(|| {
                labels.push(e.color);
                labels.len() - 1
            });
            adjacency[e.u].push((e.v, idx));
            adjacency[e.v].push((e.u, idx));
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Ok(EdgeColoredGraph {
            n,
            edges: list,
            labels,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `c(G)`, the number of distinct colors.
    pub fn color_count(&self) -> usize {
        self.labels.len()
    }

    pub fn color_label(&self, color: ColorIndex) -> ColorId {
        self.labels[color]
    }

    /// Neighbors of `v` with the dense color of the connecting edge, sorted by
    /// neighbor.
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, ColorIndex)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    /// Dense color of edge `{u, v}`, if present.
    pub fn color_between(&self, u: Vertex, v: Vertex) -> Option<ColorIndex> {
        let row = self.adjacency.get(u)?;
        row.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| row[i].1)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.color_between(u, v).is_some()
    }

    pub fn empty_color_set(&self) -> ColorSet {
        ColorSet::with_capacity(self.color_count())
    }

    /// Color labels of a set, ascending by dense index.
    pub fn labels_of(&self, set: &ColorSet) -> Vec<ColorId> {
        set.iter().map(|c| self.labels[c]).collect()
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// `CN(v)`: colors on the edges incident with `v`.
    pub fn color_neighborhood(&self, v: Vertex) -> Result<ColorSet, GraphError> {
        self.check_vertex(v)?;
        let mut set = self.empty_color_set();
        for &(_, c) in &self.adjacency[v] {
            set.insert(c);
        }
        Ok(set)
    }

    /// `d^c(v) = |CN(v)|`.
    pub fn color_degree(&self, v: Vertex) -> Result<usize, GraphError> {
        self.color_neighborhood(v).map(|s| s.len())
    }

    /// `|CN(u) ∪ CN(v)|` for distinct `u`, `v`.
    pub fn cn_union(&self, u: Vertex, v: Vertex) -> Result<usize, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SameVertex(u));
        }
        let a = self.color_neighborhood(u)?;
        let b = self.color_neighborhood(v)?;
        Ok(a.union_len(&b))
    }

    pub fn stats(&self) -> Result<GraphStats, GraphError> {
        if self.n == 0 {
            return Err(GraphError::Empty);
        }
        let hoods: Vec<ColorSet> = (0..self.n)
            .map(|v| self.color_neighborhood(v))
            .collect::<Result<_, _>>()?;
        let k = hoods.iter().map(ColorSet::len).min().unwrap_or(0);
        let mut s: Option<usize> = None;
        for u in 0..self.n {
            for v in u + 1..self.n {
                let x = hoods[u].union_len(&hoods[v]);
                s = Some(s.map_or(x, |cur| cur.min(x)));
            }
        }
        Ok(GraphStats {
            k,
            s,
            c: self.color_count(),
        })
    }

    /// Same graph with every color label passed through `f`. `f` must be
    /// injective on the labels in use.
    pub fn relabel_colors(&self, mut f: impl FnMut(ColorId) -> ColorId) -> EdgeColoredGraph {
        let edges = self.edges.iter().map(|e| (e.u, e.v, f(e.color).0));
        EdgeColoredGraph::new(self.n, edges).expect("relabeling keeps the graph simple")
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn permute_vertices(&self, perm: &[Vertex]) -> Result<EdgeColoredGraph, GraphError> {
        let edges = self.edges.iter().map(|e| (perm[e.u], perm[e.v], e.color.0));
        EdgeColoredGraph::new(self.n, edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `ecg <n> <m>` header")]
    MissingHeader,
    #[error("malformed header, expected `ecg <n> <m>`")]
    BadHeader,
    #[error("malformed edge line, expected `<u> <v> <c>`")]
    BadEdge,
    #[error("expected u < v, got {0} {1}")]
    Unordered(Vertex, Vertex),
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, kind: impl Into<ParseErrorKind>) -> ParseError {
    ParseError {
        line,
        kind: kind.into(),
    }
}

/// Parses the `.ecg` text format.
///
/// ```text
/// # comment
/// ecg <n> <m>
/// <u> <v> <c>     (m lines, 0 <= u < v < n)
/// ```
pub fn parse_ecg(text: &str) -> Result<EdgeColoredGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(err(0, ParseErrorKind::MissingHeader))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match fields.as_slice() {
        ["ecg", n, m] => match (n.parse::<usize>(), m.parse::<usize>()) {
            (Ok(n), Ok(m)) => (n, m),
            _ => return Err(err(header_line, ParseErrorKind::BadHeader)),
        },
        _ => return Err(err(header_line, ParseErrorKind::BadHeader)),
    };

    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    let mut last_line = header_line;
    for (line, body) in lines {
        last_line = line;
        if edges.len() == m {
            return Err(err(
                line,
                ParseErrorKind::EdgeCount {
                    expected: m,
                    found: m + 1,
                },
            ));
        }
        let nums: Vec<u64> = body
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| err(line, ParseErrorKind::BadEdge))?;
        let &[u, v, c] = nums.as_slice() else {
            return Err(err(line, ParseErrorKind::BadEdge));
        };
        let (u, v) = (u as usize, v as usize);
        if u == v {
            return Err(err(line, GraphError::SelfLoop(u)));
        }
        for x in [u, v] {
            if x >= n {
                return Err(err(line, GraphError::VertexOutOfRange { vertex: x, n }));
            }
        }
        if u > v {
            return Err(err(line, ParseErrorKind::Unordered(u, v)));
        }
        if !seen.insert((u, v)) {
            return Err(err(line, GraphError::ParallelEdge(u, v)));
        }
        edges.push((u, v, c));
    }
    if edges.len() != m {
        return Err(err(
            last_line,
            ParseErrorKind::EdgeCount {
                expected: m,
                found: edges.len(),
            },
        ));
    }
    EdgeColoredGraph::new(n, edges).map_err(|e| err(last_line, e))
}

/// Canonical `.ecg` text: header, then edges sorted by `(u, v)`, LF endings.
pub fn serialize_ecg(g: &EdgeColoredGraph) -> String {
    let mut out = format!("ecg {} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.color));
    }
    out
}

impl fmt::Display for EdgeColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_ecg(self))
    }
}

impl std::str::FromStr for EdgeColoredGraph {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ecg(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rainbow_k(n: usize) -> EdgeColoredGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v, edges.len() as u64));
            }
        }
        EdgeColoredGraph::new(n, edges).unwrap()
    }

    fn star_mono() -> EdgeColoredGraph {
        EdgeColoredGraph::new(4, [(0, 1, 7), (0, 2, 7), (0, 3, 7)]).unwrap()
    }

    // K4 without {0,1}, all colors distinct
    fn g4() -> EdgeColoredGraph {
        EdgeColoredGraph::new(4, [(0, 2, 0), (0, 3, 1), (1, 2, 2), (1, 3, 3), (2, 3, 4)]).unwrap()
    }

    /// Brute force: collect incident edge colors from the raw edge list.
    fn naive_cn(g: &EdgeColoredGraph, v: Vertex) -> std::collections::BTreeSet<u64> {
        g.edges()
            .iter()
            .filter(|e| e.u == v || e.v == v)
            .map(|e| e.color.0)
            .collect()
    }

    #[test]
    fn neighborhoods() {
        assert_eq!(rainbow_k(4).color_neighborhood(0).unwrap().len(), 3);
        let star = star_mono();
        let cn = star.color_neighborhood(0).unwrap();
        assert_eq!(star.labels_of(&cn), vec![ColorId(7)]);
        assert_eq!(g4().color_neighborhood(0).unwrap().len(), 2);
        assert_eq!(
            rainbow_k(3).color_neighborhood(3),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn color_degrees() {
        let k5 = rainbow_k(5);
        assert!((0..5).all(|v| k5.color_degree(v).unwrap() == 4));
        assert_eq!(star_mono().color_degree(0).unwrap(), 1);
        let p = EdgeColoredGraph::new(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(p.color_degree(1).unwrap(), 1);
    }

    #[test]
    fn unions() {
        let k4 = rainbow_k(4);
        let naive = naive_cn(&k4, 0).union(&naive_cn(&k4, 1)).count();
        assert_eq!(naive, 5);
        assert_eq!(k4.cn_union(0, 1).unwrap(), naive);

        let g = g4();
        let naive = naive_cn(&g, 0).union(&naive_cn(&g, 1)).count();
        assert_eq!(naive, 4);
        assert_eq!(g.cn_union(0, 1).unwrap(), 4);

        let edgeless = EdgeColoredGraph::new(2, []).unwrap();
        assert_eq!(edgeless.cn_union(0, 1).unwrap(), 0);
        assert_eq!(k4.cn_union(2, 2), Err(GraphError::SameVertex(2)));
    }

    #[test]
    fn stats_examples() {
        assert_eq!(
            rainbow_k(6).stats().unwrap(),
            GraphStats {
                k: 5,
                s: Some(9),
                c: 15
            }
        );
        assert_eq!(rainbow_k(4).stats().unwrap().s, Some(5));
        assert_eq!(
            EdgeColoredGraph::new(3, []).unwrap().stats().unwrap(),
            GraphStats {
                k: 0,
                s: Some(0),
                c: 0
            }
        );
        assert_eq!(
            EdgeColoredGraph::new(0, []).unwrap().stats(),
            Err(GraphError::Empty)
        );
        assert_eq!(
            EdgeColoredGraph::new(1, []).unwrap().stats().unwrap().s,
            None
        );
    }

    #[test]
    fn construction_rejects_non_simple() {
        assert_eq!(
            EdgeColoredGraph::new(2, [(1, 1, 0)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            EdgeColoredGraph::new(2, [(0, 1, 0), (1, 0, 3)]),
            Err(GraphError::ParallelEdge(0, 1))
        );
        assert!(matches!(
            EdgeColoredGraph::new(2, [(0, 2, 0)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn parse_examples() {
        let g = parse_ecg("ecg 2 1\n0 1 5").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges()[0].color, ColorId(5));

        let k3 = rainbow_k(3);
        assert_eq!(parse_ecg(&serialize_ecg(&k3)).unwrap(), k3);

        let e = parse_ecg("ecg 2 2\n0 1 1\n0 1 2").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(
            e.kind,
            ParseErrorKind::Graph(GraphError::ParallelEdge(0, 1))
        );
    }

    #[test]
    fn parse_comments_and_crlf() {
        let text = "# generated\r\necg 3 2\r\n# mid\r\n0 1 4\r\n1 2 9\r\n";
        let g = parse_ecg(text).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(serialize_ecg(&g), "ecg 3 2\n0 1 4\n1 2 9\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("", 0, ParseErrorKind::MissingHeader),
            ("ecg 3\n", 1, ParseErrorKind::BadHeader),
            ("graph 3 1\n", 1, ParseErrorKind::BadHeader),
            ("ecg 3 1\n0 x 1\n", 2, ParseErrorKind::BadEdge),
            ("ecg 3 1\n0 1\n", 2, ParseErrorKind::BadEdge),
            ("ecg 3 1\n2 2 1\n", 2, GraphError::SelfLoop(2).into()),
            (
                "ecg 3 1\n0 3 1\n",
                2,
                GraphError::VertexOutOfRange { vertex: 3, n: 3 }.into(),
            ),
            ("ecg 3 1\n2 1 1\n", 2, ParseErrorKind::Unordered(2, 1)),
            (
                "ecg 3 2\n0 1 1\n",
                2,
                ParseErrorKind::EdgeCount {
                    expected: 2,
                    found: 1,
                },
            ),
            (
                "ecg 3 1\n0 1 1\n1 2 1\n",
                3,
                ParseErrorKind::EdgeCount {
                    expected: 1,
                    found: 2,
                },
            ),
        ];
        for (text, line, kind) in cases {
            let e = parse_ecg(text).unwrap_err();
            assert_eq!((e.line, &e.kind), (line, &kind), "input {text:?}");
        }
    }

    #[test]
    fn color_set_ops() {
        let a: ColorSet = [1, 3, 5].into_iter().collect();
        let b: ColorSet = [3, 4].into_iter().collect();
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![1, 3, 4, 5]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![1, 5]);
        assert_eq!(a.union_len(&b), 4);
        assert!(!a.is_subset(&b));
        assert!(a.difference(&b).is_subset(&a));
    }

    fn arb_graph() -> impl Strategy<Value = EdgeColoredGraph> {
        (1usize..9).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(proptest::option::of(0u64..6), pairs).prop_map(move |cols| {
                let mut edges = Vec::new();
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if let Some(c) = cols[i] {
                            edges.push((u, v, c * 1000 + 17));
                        }
                        i += 1;
                    }
                }
                EdgeColoredGraph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip(g in arb_graph()) {
            prop_assert_eq!(parse_ecg(&serialize_ecg(&g)).unwrap(), g);
        }

        #[test]
        fn degree_relations(g in arb_graph()) {
            let st = g.stats().unwrap();
            for v in 0..g.vertex_count() {
                let dc = g.color_degree(v).unwrap();
                prop_assert!(dc <= g.degree(v));
                let distinct = naive_cn(&g, v).len() == g.degree(v);
                prop_assert_eq!(dc == g.degree(v), distinct);
                prop_assert!(dc <= st.c);
                prop_assert_eq!(dc, naive_cn(&g, v).len());
            }
            if let Some(s) = st.s {
                prop_assert!(s >= st.k);
            }
        }

        #[test]
        fn stats_invariant_under_color_bijection(g in arb_graph(), salt in 0u64..1000) {
            let h = g.relabel_colors(|c| ColorId(c.0.wrapping_mul(7919) ^ salt));
            prop_assert_eq!(g.stats().unwrap(), h.stats().unwrap());
        }
    }
}
