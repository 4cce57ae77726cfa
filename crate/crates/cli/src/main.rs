//! `reldisc`: exact relative-discrepancy computations from the command line.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when a job is refused
//! because its estimated cost exceeds the work limit.

mod commands;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "reldisc",
    version,
    about = "Exact relative discrepancy of k-uniform hypergraphs"
)]
pub struct Cli {
    /// Table format; structures (functions, hypergraphs) are always JSON.
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    pub format: Format,

    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Refuse jobs whose estimated number of elementary steps exceeds this.
    #[arg(long, default_value_t = commands::DEFAULT_MAX_WORK, global = true)]
    pub max_work: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Hypergraph or slice-function JSON file.
    #[arg(short, long)]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Squared L2 and L1 level weights of a hypergraph or slice function.
    Wvec {
        #[command(flatten)]
        input: InputArg,
        /// Inclusive level range `a..b` (default `1..k`).
        #[arg(long)]
        levels: Option<String>,
    },
    /// Whether `f(R) = sum_{S ⊂ R, |S| = l-1} h(S)` has a solution `h`.
    Criterion {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        ell: usize,
        /// Write `h` (when it exists) to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Squared norms of the orthogonal components `f^{=r}`.
    Decompose {
        #[command(flatten)]
        input: InputArg,
    },
    /// Prints `sum_{r < l} f^{=r}` as a slice function.
    Truncate {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        ell: usize,
    },
    /// Table of Γ(k) and g(k) with certificate labels.
    Gk {
        #[arg(long, default_value_t = 13)]
        max: usize,
        /// Largest k computed by exhaustive scan; prime bounds beyond.
        #[arg(long, default_value_t = 28)]
        exact_limit: usize,
    },
    /// Table of the prime-gap bounds `prime_upper(k)` and `G(k)`.
    PrimeBound {
        #[arg(long, default_value_t = 128)]
        max: usize,
    },
    /// W levels `k-g..k` of every bipartite pattern on `2k` vertices.
    PatternScan {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        g: usize,
    },
    /// Exact disc(G, H) by scanning all relabellings of H.
    Disc {
        #[arg(long = "g")]
        g_file: PathBuf,
        #[arg(long = "h")]
        h_file: PathBuf,
    },
    /// Exact single-hypergraph discrepancy by scanning all vertex subsets.
    DiscSingle {
        #[arg(long = "g")]
        g_file: PathBuf,
    },
    /// Whether every t-set lies in the same number of edges.
    DesignCheck {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Required degree; when omitted any common degree is accepted.
        #[arg(long)]
        lambda: Option<u64>,
    },
    /// Fano plane against the complete 2-partite host on 7 vertices.
    DemoFano,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = || commands::run(&cli);
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(commands::Failure::Invalid(format!("thread pool: {e}"))),
        },
        None => run(),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
