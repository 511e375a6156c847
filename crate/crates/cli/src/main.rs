use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rainbow_core::harness::{
    annotated_ecg, load_graph, reference_length, run_instance, HarnessError,
};
use rainbow_core::oracle::DEFAULT_BUDGET;
use rainbow_core::{
    local_search, local_search_all, longest_hetero_path, sweep, EdgeColoredGraph, GenSpec,
    HeteroPath, OracleConfig, SweepConfig,
};

const THREADS_ENV: &str = "RAINBOW_PATH_THREADS";

/// Longest heterochromatic paths in edge-colored graphs.
#[derive(Parser, Debug)]
#[command(name = "rainbow-path", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph and write it as `.ecg`.
    Gen {
        #[command(subcommand)]
        family: Family,
        /// Output file (stdout when omitted).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Compute a longest heterochromatic path exactly.
    Solve {
        file: PathBuf,
        /// Search node budget.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Split the search over start vertices on all cores.
        #[arg(long)]
        parallel: bool,
    },
    /// Grow a path with the local-search heuristic.
    Extend {
        file: PathBuf,
        /// Start vertex (default: best over all starts).
        #[arg(long)]
        start: Option<usize>,
    },
    /// Check the lower bounds on one graph and print the report as JSON.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Randomized bound-checking sweep; writes one JSON record per trial.
    Sweep(SweepArgs),
    /// Print n, m, k, s and c as JSON.
    Stats { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Complete graph with every edge a distinct color.
    RainbowK {
        #[arg(long)]
        n: usize,
    },
    /// Extremal graph for the neighborhood-union bound with parameter s.
    Extremal {
        #[arg(long)]
        s: usize,
    },
    /// G(n, p) with colors drawn uniformly from c labels.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        c: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 0.2)]
    p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    p_max: f64,
    #[arg(long, default_value_t = 1)]
    c_min: u64,
    #[arg(long, default_value_t = 40)]
    c_max: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: $RAINBOW_PATH_THREADS, else all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(short, long, default_value = "sweep.jsonl")]
    output: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Largest n the random stream may use.
    #[arg(long, default_value_t = rainbow_core::harness::DEFAULT_N_CAP)]
    n_cap: usize,
    /// Run the extremal family for s in MIN..=MAX instead of random graphs.
    #[arg(long, value_name = "MIN", requires = "extremal_max")]
    extremal_min: Option<usize>,
    #[arg(long, value_name = "MAX", requires = "extremal_min")]
    extremal_max: Option<usize>,
    /// Record per-instance wall time (makes the output non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) | HarnessError::Gen(_) => Failure::Usage(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn io_failure(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, Failure> {
    match cmd {
        Command::Gen { family, output } => gen(family, output.as_deref()),
        Command::Solve {
            file,
            budget,
            parallel,
        } => solve(&file, budget, parallel),
        Command::Extend { file, start } => extend(&file, start),
        Command::Verify { file, budget } => verify(&file, budget),
        Command::Sweep(args) => run_sweep(args),
        Command::Stats { file } => stats(&file),
    }
}

fn gen(family: Family, output: Option<&Path>) -> Result<ExitCode, Failure> {
    let spec = match family {
        Family::RainbowK { n } => GenSpec::RainbowComplete { n },
        Family::Extremal { s } => GenSpec::ExtremalUnion { s },
        Family::Random { n, p, c, seed } => GenSpec::Random { n, p, c, seed },
    };
    let g = spec.generate().map_err(|e| Failure::Usage(e.to_string()))?;
    let text = annotated_ecg(&g, &[spec.to_string()]);
    match output {
        Some(path) => std::fs::write(path, text).map_err(io_failure(path))?,
        None => emit(&text),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_path(g: &EdgeColoredGraph, p: &HeteroPath) {
    emit(&format!("{}\n", p.render()));
    let colors: Vec<String> = p
        .edge_colors(g)
        .into_iter()
        .map(|c| g.color_label(c).0.to_string())
        .collect();
    emit(&format!("colors: {}\n", colors.join(" ")));
}

fn solve(file: &Path, budget: u64, parallel: bool) -> Result<ExitCode, Failure> {
    let g = load_graph(file)?;
    let cfg = OracleConfig {
        budget,
        parallel,
        ..Default::default()
    };
    let r = longest_hetero_path(&g, &cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    print_path(&g, &r.path);
    if r.exact {
        emit(&format!("exact: true ({} nodes)\n", r.stats.nodes));
    } else {
        emit(&format!(
            "exact: false (budget of {budget} nodes exhausted; best found)\n"
        ));
    }
    Ok(ExitCode::SUCCESS)
}

fn extend(file: &Path, start: Option<usize>) -> Result<ExitCode, Failure> {
    let g = load_graph(file)?;
    let p = match start {
        Some(v) => local_search(&g, v),
        None => local_search_all(&g),
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    print_path(&g, &p);
    Ok(ExitCode::SUCCESS)
}

fn verify(file: &Path, budget: u64) -> Result<ExitCode, Failure> {
    let g = load_graph(file)?;
    let run = run_instance(&g, budget)?;
    emit(&(serde_json::to_string_pretty(&run.report).expect("report serializes") + "\n"));
    if !run.exact {
        eprintln!("warning: oracle budget exhausted; lengths are lower estimates");
        return Ok(ExitCode::SUCCESS);
    }
    if run.report.violated() {
        let (reference, solver) = reference_length(&g, budget)?;
        if reference != run.report.exact_length {
            return Err(Failure::Io(format!(
                "oracle length {} disagrees with {solver} length {reference}",
                run.report.exact_length
            )));
        }
        eprintln!("bound violated (confirmed by {solver})");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn run_sweep(a: SweepArgs) -> Result<ExitCode, Failure> {
    let instances = match (a.extremal_min, a.extremal_max) {
        (Some(lo), Some(hi)) => {
            if lo > hi {
                return Err(Failure::Usage(format!("empty extremal range {lo}..={hi}")));
            }
            Some((lo..=hi).map(|s| GenSpec::ExtremalUnion { s }).collect())
        }
        _ => None,
    };
    let cfg = SweepConfig {
        trials: a.trials,
        n_range: a.n_min..=a.n_max,
        p_range: a.p_min..=a.p_max,
        c_range: a.c_min..=a.c_max,
        seed: a.seed,
        threads: resolve_threads(a.threads)?,
        output: a.output,
        budget: a.budget,
        n_cap: a.n_cap,
        instances,
        timings: a.timings,
    };
    let summary = sweep(&cfg)?;
    emit(&(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"));
    if let Some(cx) = &summary.counterexample {
        eprintln!(
            "counterexample at trial {} written to {}",
            cx.trial,
            cx.graph_file.display()
        );
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn stats(file: &Path) -> Result<ExitCode, Failure> {
    let g = load_graph(file)?;
    let st = g.stats().map_err(|e| Failure::Usage(e.to_string()))?;
    let s = st.s.map_or_else(|| "null".to_string(), |s| s.to_string());
    emit(&format!(
        "{{\n  \"n\": {},\n  \"m\": {},\n  \"k\": {},\n  \"s\": {s},\n  \"c\": {}\n}}\n",
        g.vertex_count(),
        g.edge_count(),
        st.k,
        st.c
    ));
    Ok(ExitCode::SUCCESS)
}
