//! `lll`: criteria checks, Ramsey and hypergraph tables, resampling runs and
//! directed-cycle certificates from the command line.
//!
//! Exit codes: 0 pass, 1 fail or no certificate, 2 undecided at the
//! precision cap, 64 usage, 65 unparseable input.

mod cmd_criteria;
mod cmd_digraph;
mod cmd_hypergraph;
mod cmd_mt;
mod cmd_ramsey;
mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lll::numeric::{Decision, Precision};

use error::{CliError, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_PASS, EXIT_USAGE};
use output::{Doc, Format, Sink};

#[derive(Parser, Debug)]
#[command(name = "lll", version, about = "Local lemma criteria and constructive applications")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Starting precision in bits for rigorous comparisons; doubled up to 4x when undecided.
    #[arg(long, env = "LLL_PRECISION", default_value_t = 128, global = true,
          value_parser = clap::value_parser!(u32).range(32..=1024))]
    precision: u32,

    /// Seed for every randomized step (default 0, or the instance's own seed).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for grid rows and Monte-Carlo trials.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symmetric, abstract and cluster-expansion criteria.
    Criteria(cmd_criteria::Args),
    /// Diagonal Ramsey lower bounds and the k0(eps) curve.
    Ramsey(cmd_ramsey::Args),
    /// Hypergraph colouring thresholds, checks and solver.
    #[command(subcommand)]
    Hypergraph(cmd_hypergraph::Cmd),
    /// Run the resampling algorithm on an instance file.
    Mt(cmd_mt::Args),
    /// Cycles of length divisible by k in digraphs.
    #[command(subcommand)]
    Digraph(cmd_digraph::Cmd),
}

pub struct Ctx {
    pub precision: Precision,
    pub seed: Option<u64>,
}

impl Ctx {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// How a command ended, before output errors are considered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Indeterminate,
}

impl Outcome {
    pub fn from_decision(d: Decision) -> Self {
        match d {
            Decision::Holds => Outcome::Pass,
            Decision::Fails => Outcome::Fail,
            Decision::Indeterminate => Outcome::Indeterminate,
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    fn code(self) -> i32 {
        match self {
            Outcome::Pass => EXIT_PASS,
            Outcome::Fail => EXIT_FAIL,
            Outcome::Indeterminate => EXIT_INDETERMINATE,
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    }
    let ctx = Ctx {
        precision: Precision::new(cli.precision).with_cap((cli.precision * 4).max(lll::numeric::DEFAULT_PRECISION_CAP)),
        seed: cli.seed,
    };
    let (doc, outcome): (Doc, Outcome) = match cli.command {
        Command::Criteria(a) => cmd_criteria::run(a, &ctx)?,
        Command::Ramsey(a) => cmd_ramsey::run(a, &ctx)?,
        Command::Hypergraph(c) => cmd_hypergraph::run(c, &ctx)?,
        Command::Mt(a) => cmd_mt::run(a, &ctx)?,
        Command::Digraph(c) => cmd_digraph::run(c, &ctx)?,
    };
    match (Sink { format: cli.format, path: cli.output }).emit(&doc) {
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        Err(CliError::Core(lll::Error::Json(e))) if e.io_error_kind() == Some(std::io::ErrorKind::BrokenPipe) => {}
        other => other?,
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(o) => ExitCode::from(o.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
