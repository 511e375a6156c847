//! Exact longest heterochromatic path.
//!
//! [`longest_hetero_path`] is a depth-first branch and bound over
//! `(current vertex, visited set, used colors)`, started from every vertex in
//! ascending order with neighbors tried in ascending order. A branch is cut
//! when its length plus `min(unvisited vertices, unused colors still present
//! on edges touching an unvisited vertex)` cannot beat the incumbent; every
//! future edge consumes one unvisited vertex and one unused color, and has an
//! unvisited endpoint, so the cut is sound. The search stops early once the
//! incumbent reaches `min(n - 1, c(G))`.
//!
//! Since the incumbent is only replaced by strictly longer trails and the
//! search visits trails in lexicographic order, the returned path is the
//! lexicographically smallest among the longest ones. The parallel mode
//! searches start vertices concurrently with a shared incumbent length and
//! returns the same path.
//!
//! [`exhaustive_longest`] enumerates every simple path and filters with
//! [`is_heterochromatic`]; it shares no code with the search above and is the
//! cross-check used by the tests and by the sweep before a counterexample is
//! reported.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeColoredGraph, Vertex};
use crate::path::{is_heterochromatic, HeteroPath};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest graph [`exhaustive_longest`] and [`all_longest_paths`] accept.
pub const EXHAUSTIVE_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has no vertices")]
    Empty,
    #[error("exhaustive enumeration refused for n = {n} (limit {max})")]
    TooLarge { n: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of search nodes before giving up.
    pub budget: u64,
    /// Search start vertices on the rayon pool.
    pub parallel: bool,
    /// Bound-based cuts. Off means plain enumeration of rainbow trails.
    pub pruning: bool,
    /// Skip states `(current, visited, used)` already expanded. Only active
    /// when `n <= 64` and `c(G) <= memo_width <= 64`.
    pub memo: bool,
    pub memo_width: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            budget: DEFAULT_BUDGET,
            parallel: false,
            pruning: true,
            memo: false,
            memo_width: 64,
        }
    }
}

impl OracleConfig {
    pub fn with_budget(budget: u64) -> Self {
        OracleConfig {
            budget,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned: u64,
    pub memo_hits: u64,
}

impl SearchStats {
    fn absorb(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.pruned += other.pruned;
        self.memo_hits += other.memo_hits;
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub path: HeteroPath,
    /// False when the node budget ran out; `path` is then the incumbent.
    pub exact: bool,
    pub stats: SearchStats,
}

/// Graph in the layout the search wants: dense `u32` adjacency and one color
/// bitmask per vertex.
struct Prepared {
    n: usize,
    words: usize,
    adjacency: Vec<Vec<(u32, u32)>>,
    masks: Vec<u64>,
    /// Upper bound on path length in vertices.
    max_vertices: usize,
    memo: bool,
}

impl Prepared {
    fn new(g: &EdgeColoredGraph, cfg: &OracleConfig) -> Self {
        let n = g.vertex_count();
        let c = g.color_count();
        let words = c.div_ceil(64).max(1);
        let mut masks = vec![0u64; n * words];
        let adjacency = (0..n)
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .map(|&(w, col)| {
                        masks[v * words + col / 64] |= 1 << (col % 64);
                        (w as u32, col as u32)
                    })
                    .collect()
            })
            .collect();
        Prepared {
            n,
            words,
            adjacency,
            masks,
            max_vertices: n.min(c + 1),
            memo: cfg.memo && n <= 64 && c <= cfg.memo_width.min(64),
        }
    }
}

/// State shared between start vertices in parallel mode.
struct Shared {
    best_vertices: AtomicUsize,
    nodes: AtomicU64,
    /// Smallest start whose search reached the global upper bound.
    finished_start: AtomicUsize,
}

struct Dfs<'a> {
    prep: &'a Prepared,
    budget: u64,
    pruning: bool,
    shared: Option<&'a Shared>,
    start: Vertex,
    visited: Vec<bool>,
    unvisited: usize,
    used: Vec<u64>,
    scratch: Vec<u64>,
    trail: Vec<Vertex>,
    best: Vec<Vertex>,
    seen: HashSet<(u32, u64, u64)>,
    stats: SearchStats,
    exhausted: bool,
    done: bool,
}

impl<'a> Dfs<'a> {
    fn new(prep: &'a Prepared, cfg: &OracleConfig, shared: Option<&'a Shared>) -> Self {
        Dfs {
            prep,
            budget: cfg.budget,
            pruning: cfg.pruning,
            shared,
            start: 0,
            visited: vec![false; prep.n],
            unvisited: prep.n,
            used: vec![0; prep.words],
            scratch: vec![0; prep.words],
            trail: Vec::with_capacity(prep.n),
            best: Vec::new(),
            seen: HashSet::new(),
            stats: SearchStats::default(),
            exhausted: false,
            done: false,
        }
    }

    fn run_from(&mut self, start: Vertex) {
        self.start = start;
        self.enter(start);
        self.expand(start);
        self.leave(start);
    }

    fn enter(&mut self, v: Vertex) {
        self.visited[v] = true;
        self.unvisited -= 1;
        self.trail.push(v);
    }

    fn leave(&mut self, v: Vertex) {
        self.visited[v] = false;
        self.unvisited += 1;
        self.trail.pop();
    }

    fn over_budget(&mut self) -> bool {
        self.stats.nodes += 1;
        let spent = match self.shared {
            Some(sh) => sh.nodes.fetch_add(1, Ordering::Relaxed) + 1,
            None => self.stats.nodes,
        };
        spent > self.budget
    }

    /// Upper bound on the number of vertices the trail can still gain.
    fn potential(&mut self) -> usize {
        if self.unvisited == 0 {
            return 0;
        }
        let words = self.prep.words;
        self.scratch.fill(0);
        for v in 0..self.prep.n {
            if !self.visited[v] {
                let m = &self.prep.masks[v * words..(v + 1) * words];
                for (acc, &bits) in self.scratch.iter_mut().zip(m) {
                    *acc |= bits;
                }
            }
        }
        let colors: u32 = self
            .scratch
            .iter()
            .zip(&self.used)
            .map(|(&a, &u)| (a & !u).count_ones())
            .sum();
        self.unvisited.min(colors as usize)
    }

    fn memo_key(&self, cur: Vertex) -> (u32, u64, u64) {
        let visited = self.trail.iter().fold(0u64, |acc, &v| acc | 1 << v);
        (cur as u32, visited, self.used[0])
    }

    fn expand(&mut self, cur: Vertex) {
        if self.over_budget() {
            self.exhausted = true;
            return;
        }
        if let Some(sh) = self.shared {
            if sh.finished_start.load(Ordering::Relaxed) < self.start {
                self.done = true;
                return;
            }
        }
        if self.trail.len() > self.best.len() {
            self.best.clone_from(&self.trail);
            if let Some(sh) = self.shared {
                sh.best_vertices
                    .fetch_max(self.best.len(), Ordering::Relaxed);
            }
            if self.best.len() >= self.prep.max_vertices {
                if let Some(sh) = self.shared {
                    sh.finished_start.fetch_min(self.start, Ordering::Relaxed);
                }
                self.done = true;
                return;
            }
        }
        if self.pruning {
            let reach = self.trail.len() + self.potential();
            let shared_best = self
                .shared
                .map_or(0, |sh| sh.best_vertices.load(Ordering::Relaxed));
            // Ties with the shared incumbent must survive so that each start
            // still finds its own lexicographically first longest trail.
            if reach <= self.best.len() || reach < shared_best {
                self.stats.pruned += 1;
                return;
            }
        }
        if self.prep.memo && !self.seen.insert(self.memo_key(cur)) {
            self.stats.memo_hits += 1;
            return;
        }

        let prep = self.prep;
        for &(next, color) in &prep.adjacency[cur] {
            let (next, color) = (next as usize, color as usize);
            let (word, bit) = (color / 64, 1u64 << (color % 64));
            if self.visited[next] || self.used[word] & bit != 0 {
                continue;
            }
            self.used[word] |= bit;
            self.enter(next);
            self.expand(next);
            self.leave(next);
            self.used[word] &= !bit;
            if self.exhausted || self.done {
                return;
            }
        }
    }
}

/// Longest heterochromatic path, exact unless the node budget runs out.
pub fn longest_hetero_path(
    g: &EdgeColoredGraph,
    cfg: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    if g.vertex_count() == 0 {
        return Err(OracleError::Empty);
    }
    let prep = Prepared::new(g, cfg);
    let (best, exact, stats) = if cfg.parallel {
        search_parallel(&prep, cfg)
    } else {
        search_sequential(&prep, cfg)
    };
    let path = HeteroPath::new(g, best).expect("search only builds heterochromatic trails");
    Ok(OracleResult { path, exact, stats })
}

fn search_sequential(prep: &Prepared, cfg: &OracleConfig) -> (Vec<Vertex>, bool, SearchStats) {
    let mut dfs = Dfs::new(prep, cfg, None);
    for start in 0..prep.n {
        dfs.run_from(start);
        if dfs.exhausted || dfs.done {
            break;
        }
    }
    (dfs.best, !dfs.exhausted, dfs.stats)
}

fn search_parallel(prep: &Prepared, cfg: &OracleConfig) -> (Vec<Vertex>, bool, SearchStats) {
    let shared = Shared {
        best_vertices: AtomicUsize::new(0),
        nodes: AtomicU64::new(0),
        finished_start: AtomicUsize::new(usize::MAX),
    };
    let runs: Vec<(Vec<Vertex>, bool, SearchStats)> = (0..prep.n)
        .into_par_iter()
        .map(|start| {
            let mut dfs = Dfs::new(prep, cfg, Some(&shared));
            dfs.run_from(start);
            (dfs.best, dfs.exhausted, dfs.stats)
        })
        .collect();

    let mut stats = SearchStats::default();
    let mut exhausted = false;
    let mut best: Vec<Vertex> = Vec::new();
    for (trail, ran_out, st) in runs {
        stats.absorb(st);
        exhausted |= ran_out;
        // runs are in start order; keep the first of maximal length
        if trail.len() > best.len() {
            best = trail;
        }
    }
    (best, !exhausted, stats)
}

/// Pruning-free reference: every simple path, filtered by
/// [`is_heterochromatic`]. Ties resolve to the lexicographically smallest
/// sequence.
pub fn exhaustive_longest(g: &EdgeColoredGraph) -> Result<HeteroPath, OracleError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(OracleError::Empty);
    }
    if n > EXHAUSTIVE_MAX_N {
        return Err(OracleError::TooLarge {
            n,
            max: EXHAUSTIVE_MAX_N,
        });
    }
    let mut best: Vec<Vertex> = vec![0];
    let mut stack = Vec::with_capacity(n);
    let mut on_path = vec![false; n];

    fn walk(
        g: &EdgeColoredGraph,
        stack: &mut Vec<Vertex>,
        on_path: &mut [bool],
        best: &mut Vec<Vertex>,
    ) {
        if stack.len() > best.len() && is_heterochromatic(g, stack) {
            best.clone_from(stack);
        }
        let cur = *stack.last().unwrap();
        for &(next, _) in g.neighbors(cur) {
            if !on_path[next] {
                on_path[next] = true;
                stack.push(next);
                walk(g, stack, on_path, best);
                stack.pop();
                on_path[next] = false;
            }
        }
    }

    for start in 0..n {
        on_path[start] = true;
        stack.push(start);
        walk(g, &mut stack, &mut on_path, &mut best);
        stack.pop();
        on_path[start] = false;
    }
    Ok(HeteroPath::new(g, best).expect("filtered by is_heterochromatic"))
}

/// Every longest heterochromatic path, each direction listed separately, in
/// lexicographic order.
pub fn all_longest_paths(g: &EdgeColoredGraph) -> Result<Vec<HeteroPath>, OracleError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(OracleError::Empty);
    }
    if n > EXHAUSTIVE_MAX_N {
        return Err(OracleError::TooLarge {
            n,
            max: EXHAUSTIVE_MAX_N,
        });
    }

    struct Collect<'g> {
        g: &'g EdgeColoredGraph,
        on_path: Vec<bool>,
        used: Vec<bool>,
        trail: Vec<Vertex>,
        found: Vec<Vec<Vertex>>,
    }

    impl Collect<'_> {
        fn walk(&mut self) {
            let better = self
                .found
                .first()
                .is_none_or(|f| self.trail.len() >= f.len());
            if better {
                if self
                    .found
                    .first()
                    .is_some_and(|f| self.trail.len() > f.len())
                {
                    self.found.clear();
                }
                self.found.push(self.trail.clone());
            }
            let cur = *self.trail.last().unwrap();
            for &(next, color) in self.g.neighbors(cur) {
                if self.on_path[next] || self.used[color] {
                    continue;
                }
                self.on_path[next] = true;
                self.used[color] = true;
                self.trail.push(next);
                self.walk();
                self.trail.pop();
                self.used[color] = false;
                self.on_path[next] = false;
            }
        }
    }

    let mut c = Collect {
        g,
        on_path: vec![false; n],
        used: vec![false; g.color_count()],
        trail: Vec::with_capacity(n),
        found: Vec::new(),
    };
    for start in 0..n {
        c.on_path[start] = true;
        c.trail.push(start);
        c.walk();
        c.trail.pop();
        c.on_path[start] = false;
    }
    Ok(c.found
        .into_iter()
        .map(|seq| HeteroPath::new(g, seq).expect("rainbow by construction"))
        .collect())
}
