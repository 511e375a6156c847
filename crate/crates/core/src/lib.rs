//! Heterochromatic (rainbow) paths in edge-colored graphs.
//!
//! - [`graph`]: the immutable graph model, color neighborhoods, `.ecg` I/O.
//! - [`path`]: heterochromatic paths, rearrangement moves, local search.
//! - [`oracle`]: exact longest-path search and a brute-force cross-check.
//! - [`bounds`]: lower bounds from color degree and neighborhood unions.
//! - [`generators`]: rainbow complete graphs, the extremal family, random
//!   colorings.
//! - [`harness`]: instance runs and reproducible randomized sweeps.

pub mod bounds;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod path;

pub use bounds::{check_instance, degree_bound, union_bound, BoundReport};
pub use generators::{extremal_union, rainbow_complete, random_colored, GenSpec};
pub use graph::{
    parse_ecg, serialize_ecg, ColorId, ColorSet, EdgeColoredGraph, GraphError, GraphStats,
    ParseError, Vertex,
};
pub use harness::{run_instance, sweep, SweepConfig, SweepRecord, SweepSummary};
pub use oracle::{exhaustive_longest, longest_hetero_path, OracleConfig, OracleResult};
pub use path::{
    apply_move, candidate_sequence, enumerate_moves, is_heterochromatic, local_search,
    local_search_all, HeteroPath, Move, MoveKind,
};
