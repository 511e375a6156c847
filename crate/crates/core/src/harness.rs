//! Randomized bound-checking sweeps.
//!
//! Each trial generates (or loads) a graph, runs the exact oracle and the
//! local search from every vertex, and assembles a [`BoundReport`]. Records
//! go to a JSON Lines file, one object per trial, in trial order. Trials can
//! run on a worker pool; results are buffered per chunk and written by a
//! single writer, so the file is identical for any worker count.
//!
//! A bound violation is re-checked with a pruning-free solver before it is
//! reported. If it survives, the graph is written next to the records file
//! and the sweep stops.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bounds::{check_instance, BoundReport};
use crate::generators::{unit_interval, GenError, GenSpec};
use crate::graph::{parse_ecg, serialize_ecg, EdgeColoredGraph, GraphError, ParseError};
use crate::oracle::{
    exhaustive_longest, longest_hetero_path, OracleConfig, OracleError, EXHAUSTIVE_MAX_N,
};
use crate::path::{local_search_all, HeteroPath};

/// Default cap on the vertex count of random sweep instances.
pub const DEFAULT_N_CAP: usize = 12;

const CHUNK: usize = 64;
const MIN_GAP_WITNESSES: usize = 10;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid sweep config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("trial {trial}: oracle length {oracle} disagrees with reference length {reference}")]
    OracleDisagreement {
        trial: u64,
        oracle: usize,
        reference: usize,
    },
    #[error("worker pool: {0}")]
    Pool(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Lowercase hex SHA-256 of the canonical `.ecg` text.
pub fn graph_digest(g: &EdgeColoredGraph) -> String {
    hex::encode(Sha256::digest(serialize_ecg(g).as_bytes()))
}

/// Reads and parses a `.ecg` file.
pub fn load_graph(path: &Path) -> Result<EdgeColoredGraph, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_ecg(&text).map_err(|source| HarnessError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// `.ecg` text with a comment line per entry of `header`.
pub fn annotated_ecg(g: &EdgeColoredGraph, header: &[String]) -> String {
    let mut out: String = header.iter().map(|h| format!("# {h}\n")).collect();
    out.push_str(&serialize_ecg(g));
    out
}

/// Where a record's graph came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceSource {
    Gen(GenSpec),
    File(PathBuf),
}

impl InstanceSource {
    pub fn load(&self) -> Result<EdgeColoredGraph, HarnessError> {
        match self {
            InstanceSource::Gen(spec) => Ok(spec.generate()?),
            InstanceSource::File(path) => load_graph(path),
        }
    }
}

/// Outcome of running the oracle and the heuristic on one graph.
#[derive(Debug, Clone)]
pub struct InstanceRun {
    pub report: BoundReport,
    pub exact: bool,
    pub nodes: u64,
    pub elapsed: Duration,
    pub exact_path: HeteroPath,
    pub heuristic_path: HeteroPath,
}

impl InstanceRun {
    /// Counts toward verdict statistics only when the oracle finished.
    pub fn is_violation(&self) -> bool {
        self.exact && self.report.violated()
    }
}

pub fn run_instance(g: &EdgeColoredGraph, budget: u64) -> Result<InstanceRun, HarnessError> {
    let started = Instant::now();
    let heuristic_path = local_search_all(g)?;
    let oracle = longest_hetero_path(g, &OracleConfig::with_budget(budget))?;
    let report = check_instance(g, &oracle.path, &heuristic_path)?;
    Ok(InstanceRun {
        report,
        exact: oracle.exact,
        nodes: oracle.stats.nodes,
        elapsed: started.elapsed(),
        exact_path: oracle.path,
        heuristic_path,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub trial: u64,
    pub spec: InstanceSource,
    pub digest: String,
    pub report: BoundReport,
    pub exact: bool,
    pub nodes: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl SweepRecord {
    pub fn from_run(
        trial: u64,
        spec: InstanceSource,
        g: &EdgeColoredGraph,
        run: &InstanceRun,
        timed: bool,
    ) -> Self {
        SweepRecord {
            trial,
            spec,
            digest: graph_digest(g),
            report: run.report.clone(),
            exact: run.exact,
            nodes: run.nodes,
            runtime_ms: timed.then_some(run.elapsed.as_millis() as u64),
        }
    }

    /// Rebuilds the graph, checks the digest and re-runs the instance.
    /// Returns whether the fresh report matches the stored one.
    pub fn replay(&self, budget: u64) -> Result<bool, HarnessError> {
        let g = self.spec.load()?;
        if graph_digest(&g) != self.digest {
            return Ok(false);
        }
        Ok(run_instance(&g, budget)?.report == self.report)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub trials: u64,
    pub n_range: RangeInclusive<usize>,
    pub p_range: RangeInclusive<f64>,
    pub c_range: RangeInclusive<u64>,
    pub seed: u64,
    /// Worker count; 1 runs everything on the calling thread.
    pub threads: usize,
    pub output: PathBuf,
    pub budget: u64,
    /// Largest `n` random sampling may request.
    pub n_cap: usize,
    /// Fixed instance list replacing random sampling (`trials` is ignored).
    pub instances: Option<Vec<GenSpec>>,
    /// Store per-record wall time. Off keeps record files reproducible.
    pub timings: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            trials: 1000,
            n_range: 2..=DEFAULT_N_CAP,
            p_range: 0.2..=1.0,
            c_range: 1..=40,
            seed: 0,
            threads: 1,
            output: PathBuf::from("sweep.jsonl"),
            budget: crate::oracle::DEFAULT_BUDGET,
            n_cap: DEFAULT_N_CAP,
            instances: None,
            timings: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: &str| Err(HarnessError::Config(msg.to_string()));
        if self.threads == 0 {
            return bad("threads must be at least 1");
        }
        if self.budget == 0 {
            return bad("oracle budget must be positive");
        }
        if let Some(list) = &self.instances {
            if list.is_empty() {
                return bad("instance list is empty");
            }
            for spec in list {
                spec.validate()?;
            }
            return Ok(());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.n_range.is_empty() || *self.n_range.start() == 0 {
            return bad("n range must be non-empty and start at 1 or more");
        }
        if *self.n_range.end() > self.n_cap {
            return Err(HarnessError::Config(format!(
                "n max {} exceeds the exact-oracle cap {}",
                self.n_range.end(),
                self.n_cap
            )));
        }
        let (p0, p1) = (*self.p_range.start(), *self.p_range.end());
        if !(0.0..=1.0).contains(&p0) || !(0.0..=1.0).contains(&p1) || p0 > p1 {
            return bad("p range must be a non-empty sub-interval of [0, 1]");
        }
        if self.c_range.is_empty() || *self.c_range.start() == 0 {
            return bad("c range must be non-empty and start at 1 or more");
        }
        Ok(())
    }

    /// The instance stream: the fixed list, or `trials` random specs drawn
    /// from a xoshiro256++ stream seeded with `seed`. Per trial, in order:
    /// `n`, `p` (rounded to two decimals), `c`, graph seed.
    pub fn instance_specs(&self) -> Vec<GenSpec> {
        if let Some(list) = &self.instances {
            return list.clone();
        }
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(self.seed);
        let mut pick = |lo: u64, hi: u64| -> u64 {
            let span = hi - lo + 1;
            lo + ((rng.next_u64() as u128 * span as u128) >> 64) as u64
        };
        (0..self.trials)
            .map(|_| {
                let n = pick(*self.n_range.start() as u64, *self.n_range.end() as u64) as usize;
                let (p0, p1) = (*self.p_range.start(), *self.p_range.end());
                let u = unit_interval(pick(0, u64::MAX - 1));
                let p = ((p0 + u * (p1 - p0)) * 100.0).round() / 100.0;
                let p = p.clamp(p0, p1);
                let c = pick(*self.c_range.start(), *self.c_range.end());
                let seed = pick(0, u64::MAX - 1);
                GenSpec::Random { n, p, c, seed }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapWitness {
    pub gap: i64,
    /// Up to ten trials attaining `gap`, in trial order.
    pub trials: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: u64,
    pub graph_file: PathBuf,
    pub exact_length: usize,
    /// Name of the independent solver that confirmed the optimum.
    pub confirmed_by: String,
    pub report: BoundReport,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub trials: u64,
    pub exact: u64,
    pub inexact: u64,
    pub degree_ok: u64,
    pub degree_violations: u64,
    pub union_checked: u64,
    pub union_ok: u64,
    pub union_violations: u64,
    pub tight: u64,
    /// `exact_length - degree_bound` over exact records.
    pub degree_gap_histogram: BTreeMap<i64, u64>,
    /// `exact_length - union_bound` over exact records with `s` defined.
    pub union_gap_histogram: BTreeMap<i64, u64>,
    pub min_degree_gap: Option<GapWitness>,
    pub min_union_gap: Option<GapWitness>,
    pub heuristic_attained: u64,
    /// Fraction of exact records where the heuristic found an optimum.
    pub attainment_rate: f64,
    pub counterexample: Option<Counterexample>,
}

fn note_gap(slot: &mut Option<GapWitness>, gap: i64, trial: u64) {
    match slot {
        Some(w) if gap > w.gap => {}
        Some(w) if gap == w.gap => {
            if w.trials.len() < MIN_GAP_WITNESSES {
                w.trials.push(trial);
            }
        }
        _ => {
            *slot = Some(GapWitness {
                gap,
                trials: vec![trial],
            })
        }
    }
}

impl SweepSummary {
    pub fn observe(&mut self, rec: &SweepRecord) {
        self.trials += 1;
        if !rec.exact {
            self.inexact += 1;
            return;
        }
        self.exact += 1;
        let r = &rec.report;
        if r.degree_ok {
            self.degree_ok += 1;
        } else {
            self.degree_violations += 1;
        }
        let gap = r.exact_length as i64 - r.degree_bound as i64;
        *self.degree_gap_histogram.entry(gap).or_default() += 1;
        note_gap(&mut self.min_degree_gap, gap, rec.trial);
        if let Some(ub) = r.union_bound {
            self.union_checked += 1;
            if r.union_ok {
                self.union_ok += 1;
            } else {
                self.union_violations += 1;
            }
            let gap = r.exact_length as i64 - ub as i64;
            *self.union_gap_histogram.entry(gap).or_default() += 1;
            note_gap(&mut self.min_union_gap, gap, rec.trial);
        }
        if r.tight {
            self.tight += 1;
        }
        if r.heuristic_length == r.exact_length {
            self.heuristic_attained += 1;
        }
        self.attainment_rate = self.heuristic_attained as f64 / self.exact as f64;
    }

    pub fn violations(&self) -> u64 {
        self.degree_violations + self.union_violations
    }
}

/// Re-solves `g` without the pruned search. Small graphs use plain
/// enumeration of simple paths; larger ones the search with cuts disabled.
pub fn reference_length(
    g: &EdgeColoredGraph,
    budget: u64,
) -> Result<(usize, &'static str), HarnessError> {
    if g.vertex_count() <= EXHAUSTIVE_MAX_N {
        return Ok((exhaustive_longest(g)?.length(), "exhaustive_longest"));
    }
    let cfg = OracleConfig {
        budget,
        pruning: false,
        ..Default::default()
    };
    let r = longest_hetero_path(g, &cfg)?;
    if !r.exact {
        return Err(HarnessError::Config(
            "budget too small to confirm counterexample".into(),
        ));
    }
    Ok((r.path.length(), "unpruned_search"))
}

/// Confirms a violating record with [`reference_length`] and writes the
/// graph to `dir`. Disagreement with the stored optimum is a solver bug.
pub fn confirm_counterexample(
    g: &EdgeColoredGraph,
    rec: &SweepRecord,
    dir: &Path,
    budget: u64,
) -> Result<Counterexample, HarnessError> {
    let (reference, solver) = reference_length(g, budget)?;
    if reference != rec.report.exact_length {
        return Err(HarnessError::OracleDisagreement {
            trial: rec.trial,
            oracle: rec.report.exact_length,
            reference,
        });
    }
    let graph_file = dir.join(format!("counterexample-trial-{}.ecg", rec.trial));
    let mut header = vec![format!("counterexample from trial {}", rec.trial)];
    if let InstanceSource::Gen(spec) = &rec.spec {
        header.push(spec.to_string());
    }
    header.push(serde_json::to_string(&rec.report).expect("report serializes"));
    std::fs::write(&graph_file, annotated_ecg(g, &header)).map_err(io_err(&graph_file))?;
    Ok(Counterexample {
        trial: rec.trial,
        graph_file,
        exact_length: reference,
        confirmed_by: solver.to_string(),
        report: rec.report.clone(),
    })
}

fn run_trial(
    trial: u64,
    spec: &GenSpec,
    cfg: &SweepConfig,
) -> Result<(SweepRecord, EdgeColoredGraph), HarnessError> {
    let g = spec.generate()?;
    let run = run_instance(&g, cfg.budget)?;
    let rec = SweepRecord::from_run(
        trial,
        InstanceSource::Gen(spec.clone()),
        &g,
        &run,
        cfg.timings,
    );
    Ok((rec, g))
}

/// Runs the configured sweep, writing one JSON line per trial to
/// `cfg.output`. Stops at the first confirmed bound violation.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepSummary, HarnessError> {
    cfg.validate()?;
    let file = File::create(&cfg.output).map_err(io_err(&cfg.output))?;
    let mut out = BufWriter::new(file);
    let dir = cfg
        .output
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."))
        .to_path_buf();

    let pool = if cfg.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .map_err(|e| HarnessError::Pool(e.to_string()))?,
        )
    } else {
        None
    };

    let specs = cfg.instance_specs();
    let mut summary = SweepSummary::default();
    for (chunk_no, chunk) in specs.chunks(CHUNK).enumerate() {
        let base = (chunk_no * CHUNK) as u64;
        let work = |(i, spec): (usize, &GenSpec)| run_trial(base + i as u64, spec, cfg);
        let results: Vec<_> = match &pool {
            Some(pool) => pool.install(|| chunk.par_iter().enumerate().map(work).collect()),
            None => chunk.iter().enumerate().map(work).collect(),
        };
        for result in results {
            let (rec, g) = result?;
            let line = serde_json::to_string(&rec).expect("record serializes");
            writeln!(out, "{line}").map_err(io_err(&cfg.output))?;
            summary.observe(&rec);
            if rec.exact && rec.report.violated() {
                out.flush().map_err(io_err(&cfg.output))?;
                summary.counterexample = Some(confirm_counterexample(&g, &rec, &dir, cfg.budget)?);
                return Ok(summary);
            }
        }
    }
    out.flush().map_err(io_err(&cfg.output))?;
    Ok(summary)
}
