mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{Format, EXIT_INVALID};
use std::process::ExitCode;
use std::time::Instant;

/// Anti-directed Hamiltonian cycles: generators, solvers, lemma engines.
///
/// Exit codes: 0 found or verified, 1 proven negative, 2 invalid input,
/// 3 inconclusive or budget exceeded.
#[derive(Parser, Debug)]
#[command(name = "adhc", version)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel subcommands; defaults to all cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a digraph.
    Gen(GenArgs),
    /// Decide an anti-directed or directed spanning structure exactly.
    Solve(SolveArgs),
    /// Check a certificate against a digraph.
    Verify {
        file: String,
        cert: String,
    },
    /// Count absorbers or connectors per ordered pair.
    Census {
        file: String,
        #[arg(long, value_enum)]
        what: CensusWhat,
        /// Restrict to these pairs; repeatable.
        #[arg(long, value_parser = report::parse_pair)]
        pair: Vec<(usize, usize)>,
    },
    /// Search for an extremal pair of sets.
    Extremal {
        file: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = ExtremalMode::Exact)]
        mode: ExtremalMode,
    },
    /// Pack disjoint 2-in-stars next to two independent arcs.
    Stars { file: String },
    /// Split a dense pair and extract a proper anti-directed path.
    Maxcut {
        file: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        c: f64,
    },
    /// Run the heuristic pipeline with exact fallback.
    Pipeline(PipelineArgs),
    /// Look for ADHC-free digraphs above a degree floor.
    Search {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        floor: usize,
    },
    /// Run a timing suite: route1-2000 or exact-12.
    Bench {
        suite: String,
        /// Instances for suites that sample.
        #[arg(long, default_value_t = 3)]
        runs: usize,
    },
    /// Graphviz export, highlighting a certificate's arcs.
    Dot {
        file: String,
        #[arg(long)]
        cert: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    F,
    F1,
    F2,
    Ladder,
    Aladder,
    Cycle,
    Complete,
    Random,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Orientation bits for `cycle`, as 1/0 or +/-.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Minimum semi-degree for `random`.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub density: Option<f64>,
    /// Output file; standard output when omitted or `-`.
    #[arg(short, long)]
    pub output: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Adhc,
    Adhp,
    #[value(name = "2factor")]
    TwoFactor,
    Dhc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    Exact,
    Naive,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub file: String,
    #[arg(long, value_enum)]
    pub what: What,
    #[arg(long, default_value_t = 2)]
    pub max_cycles: usize,
    #[arg(long, value_enum, default_value_t = SolveMode::Exact)]
    pub mode: SolveMode,
    /// Search node limit.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub cert: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CensusWhat {
    Absorbers,
    Connectors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExtremalMode {
    Exact,
    Search,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    pub file: String,
    /// Random bipartitions before the extremal route.
    #[arg(long)]
    pub retries: Option<usize>,
    #[arg(long)]
    pub cert: Option<String>,
    /// Overrides --format for this report.
    #[arg(long, value_enum)]
    pub report: Option<Format>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub budget: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(EXIT_INVALID);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    }
    match commands::run(&cli) {
        Ok(Some(report)) => {
            let format = match &cli.command {
                Command::Pipeline(p) => p.report.unwrap_or(cli.format),
                _ => cli.format,
            };
            print!("{}", report.render(format, started));
            ExitCode::from(report.status as u8)
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
