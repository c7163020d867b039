//! `gossip`: batch driver for the greedy gossiping tools.
//!
//! Every command prints one report document, either as an aligned table or
//! as a single JSON object whose field order is fixed:
//! `command`, `parameters`, `status`, `results`.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 violation, 3 inconclusive.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gossip_core::search::DEFAULT_BUDGET;

#[derive(Parser, Debug)]
#[command(name = "gossip", version, about = "Greedy gossiping simulator and verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for searches and property runs; never changes results.
    #[arg(long, default_value_t = 1, global = true)]
    pub workers: usize,

    /// Node budget for exhaustive searches.
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    pub budget: u64,

    /// Print elapsed wall time to standard error.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate a sequence file and report N and per-don statistics.
    Simulate {
        file: PathBuf,
        /// Include the knowledge matrix after every call.
        #[arg(long)]
        trajectory: bool,
    },
    /// Star schedule and its closed-form value.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Exact maximum of N for `m` calls of size `k`.
    MaxKnowledge {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Search every m in 0..=2n-5 and compare with the star optimum.
    VerifyTheorem {
        #[arg(long)]
        n: usize,
    },
    /// Least number of calls after which everyone knows everything.
    MinCalls {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Compare greedy-only sequences with the global maximum.
    ProbeConjecture {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Smallest m to probe.
        #[arg(long, default_value_t = 0)]
        m_min: usize,
        /// Largest m to probe; defaults to one below the least number of
        /// calls informing everyone.
        #[arg(long)]
        m_max: Option<usize>,
    },
    /// Run the seeded property suite.
    CheckLemmas {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Remove a don who hears her own gossip, saving two calls.
    Eliminate {
        file: PathBuf,
        /// 1-based don to remove.
        #[arg(long)]
        don: usize,
    },
    /// Reorder by disjoint swaps into one of the two tail shapes.
    NormalizeTail { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let started = std::time::Instant::now();
    let result = commands::run(cli.command, &cli.global);
    if cli.global.timing {
        eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    }
    match result {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
