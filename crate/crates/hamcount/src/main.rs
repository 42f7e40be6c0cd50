//! Command-line front end: counting, sampling, exact oracles, generators
//! and the validation experiments, with script-friendly output.
//!
//! stdout carries data, stderr carries diagnostics. Every command echoes a
//! manifest (command, version, seed, data-affecting flags, input digests)
//! as `#`-prefixed lines at the top of its output; two runs with equal
//! manifests produce equal data output. `--threads` only changes trial
//! scheduling, never results, and is therefore reported on stderr instead
//! of in the manifest.
//!
//! Exit codes: 0 success, 1 other errors, 2 usage, 3 input parse error,
//! 4 scaling failure, 5 sampling budget exhausted (or zero acceptances),
//! 6 exact-oracle cap exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use hamcount::estimator::{
    estimate, suggest_budget, BudgetMode, EstimatorConfig, EstimatorError,
};
use hamcount::exact::{
    hamilton_dp_capped, permanent_ryser_capped, ExactValue, OracleError,
    DEFAULT_HAMILTON_CAP, DEFAULT_PERMANENT_CAP,
};
use hamcount::experiments::{
    ratio_csv, ratio_experiment, reduction_check, sweep_csv, validation_sweep, ExperimentError,
};
use hamcount::graph::{gen_dense_digraph, WeightedDigraph};
use hamcount::io::{read_digraph, read_matrix, read_undirected, write_digraph, FormatError};
use hamcount::matrix::LogMatrix;
use hamcount::sampler::{is_valid_cycle, TrialOptions, TrialStream};
use hamcount::scaling::{pad_zeros, scale, ScaleError};

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_SCALING: u8 = 4;
const EXIT_EXHAUSTED: u8 = 5;
const EXIT_CAP: u8 = 6;

#[derive(Parser)]
#[command(
    name = "hamcount",
    version,
    about = "Approximate counting and perfect sampling of Hamiltonian cycles in dense digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ModeArg {
    Fixed,
    Adaptive,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum WhatArg {
    Ham,
    Per,
    Both,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FormatArg {
    Graph,
    Matrix,
}

/// Inclusive order range, written `8..12`, `8..=12` or a single `8`.
#[derive(Clone, Copy, Debug)]
struct OrderRange {
    lo: u32,
    hi: u32,
}

impl OrderRange {
    fn values(&self) -> Vec<u32> {
        (self.lo..=self.hi).collect()
    }
}

impl FromStr for OrderRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_end = |t: &str| t.parse::<u32>().map_err(|_| format!("bad order `{t}`"));
        if let Some((a, b)) = s.split_once("..") {
            let lo = parse_end(a)?;
            let hi = parse_end(b.strip_prefix('=').unwrap_or(b))?;
            if lo > hi {
                return Err(format!("empty range `{s}`"));
            }
            Ok(Self { lo, hi })
        } else {
            let v = parse_end(s)?;
            Ok(Self { lo: v, hi: v })
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the total Hamiltonian cycle weight of a digraph
    Count {
        /// Digraph file (`n m` header, then `tail head [weight]` lines)
        graph: PathBuf,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Adaptive)]
        mode: ModeArg,
        /// Budget multiplier for --mode fixed; defaults to the density
        /// heuristic when omitted
        #[arg(long = "N")]
        n_budget: Option<f64>,
        /// Acceptance target for --mode adaptive; defaults to the Chernoff
        /// target for (epsilon, delta)
        #[arg(long)]
        target_acceptances: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Trial parallelism (scheduling only; results are identical for
        /// any value)
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_trials: u64,
    },
    /// Draw Hamiltonian cycles with probability proportional to weight
    Sample {
        graph: PathBuf,
        /// Number of cycles to emit
        #[arg(long = "count", default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_trials: u64,
    },
    /// Exact Hamilton and/or permanent at desk scale
    Exact {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = WhatArg::Both)]
        what: WhatArg,
        /// Input format: a digraph file or a raw matrix
        #[arg(long, value_enum, default_value_t = FormatArg::Graph)]
        format: FormatArg,
    },
    /// Generate a random digraph with a minimum density guarantee
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact permanent-to-Hamilton ratio study over a range of orders
    Ratio {
        #[arg(long)]
        alpha: f64,
        /// Orders to test, e.g. `8..12` (inclusive)
        #[arg(long)]
        n: OrderRange,
        #[arg(long, default_value_t = 3)]
        trials_per_n: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Verify the undirected/symmetric-digraph cycle-count identity
    Reduce {
        /// Undirected graph file (`n m` header, then unordered pairs)
        graph: PathBuf,
    },
    /// Estimator-versus-oracle validation sweep
    Sweep {
        #[arg(long)]
        n: OrderRange,
        #[arg(long, default_value_t = 0.8)]
        alpha: f64,
        #[arg(long, default_value_t = 50)]
        runs: u32,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("hamcount: {msg}");
    ExitCode::from(code)
}

fn format_code(err: &FormatError) -> u8 {
    match err {
        FormatError::Io { .. } => EXIT_OTHER,
        _ => EXIT_PARSE,
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

struct Manifest {
    command: &'static str,
    seed: Option<u64>,
    flags: Vec<(String, String)>,
    inputs: Vec<(String, String)>,
    notes: Vec<String>,
}

impl Manifest {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            seed: None,
            flags: Vec::new(),
            inputs: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn flag(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.flags.push((key.to_string(), value.to_string()));
        self
    }

    fn input(mut self, path: &Path, bytes: &[u8]) -> Self {
        self.inputs
            .push((path.display().to_string(), sha256_hex(bytes)));
        self
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    fn print(&self) {
        println!("# command {}", self.command);
        println!("# version hamcount {}", env!("CARGO_PKG_VERSION"));
        if let Some(seed) = self.seed {
            println!("# seed {seed}");
        }
        if !self.flags.is_empty() {
            let rendered: Vec<String> = self
                .flags
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            println!("# flags {}", rendered.join(" "));
        }
        for (path, digest) in &self.inputs {
            println!("# input {path} sha256 {digest}");
        }
        for note in &self.notes {
            println!("# note {note}");
        }
    }
}

fn read_graph_with_digest(path: &Path) -> Result<(WeightedDigraph, Vec<u8>), FormatError> {
    let bytes = std::fs::read(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);
    let g = hamcount::io::parse_digraph(&text)?;
    Ok((g, bytes))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Count {
            graph,
            epsilon,
            delta,
            mode,
            n_budget,
            target_acceptances,
            seed,
            threads,
            max_trials,
        } => cmd_count(
            &graph,
            epsilon,
            delta,
            mode,
            n_budget,
            target_acceptances,
            seed,
            threads,
            max_trials,
        ),
        Command::Sample {
            graph,
            count,
            epsilon,
            seed,
            threads,
            max_trials,
        } => cmd_sample(&graph, count, epsilon, seed, threads, max_trials),
        Command::Exact {
            graph,
            what,
            format,
        } => cmd_exact(&graph, what, format),
        Command::Gen {
            n,
            alpha,
            seed,
            out,
        } => cmd_gen(n, alpha, seed, out.as_deref()),
        Command::Ratio {
            alpha,
            n,
            trials_per_n,
            seed,
        } => cmd_ratio(alpha, n, trials_per_n, seed),
        Command::Reduce { graph } => cmd_reduce(&graph),
        Command::Sweep {
            n,
            alpha,
            runs,
            epsilon,
            delta,
            seed,
            threads,
        } => cmd_sweep(n, alpha, runs, epsilon, delta, seed, threads),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_count(
    graph: &Path,
    epsilon: f64,
    delta: f64,
    mode: ModeArg,
    n_budget: Option<f64>,
    target_acceptances: Option<u64>,
    seed: u64,
    threads: usize,
    max_trials: u64,
) -> ExitCode {
    let (g, bytes) = match read_graph_with_digest(graph) {
        Ok(x) => x,
        Err(e) => return fail(format_code(&e), e),
    };

    let mut manifest = Manifest::new("count")
        .seed(seed)
        .flag("epsilon", epsilon)
        .flag("delta", delta)
        .flag("max_trials", max_trials);

    let budget_mode = match mode {
        ModeArg::Fixed => {
            let budget = match n_budget {
                Some(v) => v,
                None => {
                    let alpha = g.density().alpha;
                    match suggest_budget(&g, alpha) {
                        Ok(v) => {
                            manifest = manifest
                                .note(format!("N defaulted from density heuristic: {v}"));
                            v
                        }
                        Err(e) => {
                            return fail(
                                EXIT_OTHER,
                                format!("{e}; pass --N explicitly for this instance"),
                            )
                        }
                    }
                }
            };
            manifest = manifest.flag("mode", "fixed").flag("N", budget);
            BudgetMode::Fixed { budget }
        }
        ModeArg::Adaptive => {
            let target = match target_acceptances {
                Some(t) => t,
                None => match hamcount::estimator::default_adaptive_target(epsilon, delta) {
                    Ok(t) => t,
                    Err(e) => return fail(EXIT_OTHER, e),
                },
            };
            manifest = manifest
                .flag("mode", "adaptive")
                .flag("target_acceptances", target);
            BudgetMode::Adaptive {
                target_acceptances: target,
            }
        }
    };
    manifest = manifest.input(graph, &bytes);

    let cfg = match EstimatorConfig::new(epsilon, delta, budget_mode, seed) {
        Ok(mut c) => {
            c.max_trials = max_trials;
            c.threads = threads;
            c
        }
        Err(e) => return fail(EXIT_OTHER, e),
    };

    eprintln!("hamcount: count: threads={threads} (scheduling only)");
    let report = match estimate(&g, &cfg) {
        Ok(r) => r,
        Err(e @ EstimatorError::Scaling(_)) => return fail(EXIT_SCALING, e),
        Err(e) => return fail(EXIT_OTHER, e),
    };

    manifest.print();
    print!("{}", report.to_text());
    if report.acceptances == 0 {
        eprintln!(
            "hamcount: no acceptance in {} trials; estimate lower-bounded by 0, \
             log upper bound Br(C)/l = {}",
            report.trials,
            report.log_upper_bound()
        );
        return ExitCode::from(EXIT_EXHAUSTED);
    }
    ExitCode::SUCCESS
}

fn cmd_sample(
    graph: &Path,
    count: u64,
    epsilon: f64,
    seed: u64,
    threads: usize,
    max_trials: u64,
) -> ExitCode {
    let (g, bytes) = match read_graph_with_digest(graph) {
        Ok(x) => x,
        Err(e) => return fail(format_code(&e), e),
    };
    let manifest = Manifest::new("sample")
        .seed(seed)
        .flag("count", count)
        .flag("epsilon", epsilon)
        .flag("max_trials", max_trials)
        .input(graph, &bytes);

    let padded = match pad_zeros(&g.adjacency_matrix(), epsilon) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_OTHER, e),
    };
    let inst = match scale(&padded) {
        Ok(i) => i,
        Err(e @ ScaleError::IterationBudget { .. }) => return fail(EXIT_SCALING, e),
        Err(e) => return fail(EXIT_SCALING, e),
    };

    eprintln!("hamcount: sample: threads={threads} (scheduling only)");
    manifest.print();

    let mut stream = match TrialStream::new(&inst, seed, threads, TrialOptions::default()) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_OTHER, e),
    };
    let mut trials = 0u64;
    let mut accepted = 0u64;
    let mut phantom = 0u64;
    let mut emitted = 0u64;
    while emitted < count && trials < max_trials {
        let outcome = match stream.next().expect("trial stream is endless") {
            Ok(o) => o,
            Err(e) => return fail(EXIT_OTHER, e),
        };
        trials += 1;
        if !outcome.accepted {
            continue;
        }
        accepted += 1;
        let cycle = outcome.cycle.expect("accepted trials carry a cycle");
        // Padding can manufacture cycles through non-edges; they are not
        // cycles of the input and are filtered out here.
        if !is_valid_cycle(&cycle.vertices, &g) {
            phantom += 1;
            continue;
        }
        let line: Vec<String> = cycle.vertices.iter().map(u32::to_string).collect();
        println!("{}", line.join(" "));
        emitted += 1;
    }
    eprintln!(
        "hamcount: sample: trials={trials} accepted={accepted} phantom={phantom} emitted={emitted}"
    );
    if emitted < count {
        eprintln!(
            "hamcount: budget of {max_trials} trials exhausted before {count} cycles were found"
        );
        return ExitCode::from(EXIT_EXHAUSTED);
    }
    ExitCode::SUCCESS
}

fn oracle_cap(env_name: &str, default: usize) -> usize {
    match std::env::var(env_name) {
        Ok(v) => v.parse().unwrap_or(default),
        Err(_) => default,
    }
}

fn print_exact(label: &str, value: &ExactValue) {
    println!("log_{label}={}", value.log_value());
    match value.count() {
        Some(c) => println!("{label}={c}"),
        None => {
            let v = value.value();
            if v.is_finite() {
                println!("{label}={v}");
            } else {
                println!("{label}=overflow");
            }
        }
    }
}

fn cmd_exact(graph: &Path, what: WhatArg, format: FormatArg) -> ExitCode {
    let bytes = match std::fs::read(graph) {
        Ok(b) => b,
        Err(e) => return fail(EXIT_OTHER, format!("{}: {e}", graph.display())),
    };
    let matrix: LogMatrix = match format {
        FormatArg::Graph => match read_digraph(graph) {
            Ok(g) => g.adjacency_matrix(),
            Err(e) => return fail(format_code(&e), e),
        },
        FormatArg::Matrix => match read_matrix(graph) {
            Ok(m) => m,
            Err(e) => return fail(format_code(&e), e),
        },
    };
    let manifest = Manifest::new("exact")
        .flag(
            "what",
            match what {
                WhatArg::Ham => "ham",
                WhatArg::Per => "per",
                WhatArg::Both => "both",
            },
        )
        .flag(
            "format",
            match format {
                FormatArg::Graph => "graph",
                FormatArg::Matrix => "matrix",
            },
        )
        .input(graph, &bytes);
    manifest.print();

    if what != WhatArg::Per {
        let cap = oracle_cap("HAM_ORACLE_CAP", DEFAULT_HAMILTON_CAP);
        match hamilton_dp_capped(&matrix, cap) {
            Ok(v) => print_exact("ham", &v),
            Err(e @ OracleError::CapExceeded { .. }) => return fail(EXIT_CAP, e),
            Err(e) => return fail(EXIT_OTHER, e),
        }
    }
    if what != WhatArg::Ham {
        let cap = oracle_cap("PER_ORACLE_CAP", DEFAULT_PERMANENT_CAP);
        match permanent_ryser_capped(&matrix, cap) {
            Ok(v) => print_exact("per", &v),
            Err(e @ OracleError::CapExceeded { .. }) => return fail(EXIT_CAP, e),
            Err(e) => return fail(EXIT_OTHER, e),
        }
    }
    ExitCode::SUCCESS
}

fn cmd_gen(n: u32, alpha: f64, seed: u64, out: Option<&Path>) -> ExitCode {
    let g = match gen_dense_digraph(n, alpha, seed) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_OTHER, e),
    };
    let manifest = Manifest::new("gen")
        .seed(seed)
        .flag("n", n)
        .flag("alpha", alpha);
    let text = write_digraph(&g);
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(EXIT_OTHER, format!("{}: {e}", path.display()));
            }
            manifest.print();
            println!("# wrote {}", path.display());
        }
        None => {
            manifest.print();
            print!("{text}");
        }
    }
    ExitCode::SUCCESS
}

fn cmd_ratio(alpha: f64, n: OrderRange, trials_per_n: u32, seed: u64) -> ExitCode {
    let manifest = Manifest::new("ratio")
        .seed(seed)
        .flag("alpha", alpha)
        .flag("n", format!("{}..{}", n.lo, n.hi))
        .flag("trials_per_n", trials_per_n);
    match ratio_experiment(&n.values(), alpha, trials_per_n, seed) {
        Ok((records, summary)) => {
            manifest.print();
            print!("{}", ratio_csv(&records, &summary));
            ExitCode::SUCCESS
        }
        Err(e @ ExperimentError::Oracle(OracleError::CapExceeded { .. })) => fail(EXIT_CAP, e),
        Err(e) => fail(EXIT_OTHER, e),
    }
}

fn cmd_reduce(graph: &Path) -> ExitCode {
    let bytes = match std::fs::read(graph) {
        Ok(b) => b,
        Err(e) => return fail(EXIT_OTHER, format!("{}: {e}", graph.display())),
    };
    let g = match read_undirected(graph) {
        Ok(g) => g,
        Err(e) => return fail(format_code(&e), e),
    };
    let manifest = Manifest::new("reduce").input(graph, &bytes);
    match reduction_check(&g) {
        Ok(r) => {
            manifest.print();
            println!(
                "hc={} dhc={} {}",
                r.hc_undirected,
                r.dhc_directed,
                if r.consistent {
                    "consistent"
                } else {
                    "inconsistent"
                }
            );
            ExitCode::SUCCESS
        }
        Err(e @ ExperimentError::Oracle(OracleError::CapExceeded { .. })) => fail(EXIT_CAP, e),
        Err(e @ ExperimentError::Graph(_)) => fail(EXIT_PARSE, e),
        Err(e) => fail(EXIT_OTHER, e),
    }
}

fn cmd_sweep(
    n: OrderRange,
    alpha: f64,
    runs: u32,
    epsilon: f64,
    delta: f64,
    seed: u64,
    threads: usize,
) -> ExitCode {
    let manifest = Manifest::new("sweep")
        .seed(seed)
        .flag("n", format!("{}..{}", n.lo, n.hi))
        .flag("alpha", alpha)
        .flag("runs", runs)
        .flag("epsilon", epsilon)
        .flag("delta", delta);
    eprintln!("hamcount: sweep: threads={threads} (scheduling only)");
    match validation_sweep(&n.values(), alpha, runs, epsilon, delta, seed, threads) {
        Ok((rows, summary)) => {
            manifest.print();
            print!("{}", sweep_csv(&rows, &summary));
            ExitCode::SUCCESS
        }
        Err(e @ ExperimentError::Estimator(EstimatorError::Scaling(_))) => fail(EXIT_SCALING, e),
        Err(e) => fail(EXIT_OTHER, e),
    }
}
