//! `spanlink`: constrained structured inference over scored candidates.
//!
//! Four subcommands form a pipeline: `prompts` renders templates,
//! `score` fills instances with backend scores, `infer` produces
//! structurally consistent outputs, `eval` measures performance and
//! inconsistency. Exit codes: 0 success, 2 validation/parse, 3 I/O,
//! 4 solver budget, 5 remote backend.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CommonArgs, ConfigFile, RunConfig};
use spanlink_core::Error;

#[derive(Parser)]
#[command(name = "spanlink", version, about)]
struct Cli {
    /// JSON config file mirroring the flags; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render one prompt per question or mention pair.
    Prompts {
        #[command(flatten)]
        common: CommonArgs,
        /// Instances JSONL (candidates may be absent).
        #[arg(long)]
        input: PathBuf,
        /// Prompt JSONL to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Score instances with a backend, producing scored instances.
    Score {
        #[command(flatten)]
        common: CommonArgs,
        /// Instances JSONL (candidates may be absent).
        #[arg(long)]
        input: PathBuf,
        /// Scored instances JSONL to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Run inference over scored instances.
    Infer {
        #[command(flatten)]
        common: CommonArgs,
        /// Scored instances JSONL.
        #[arg(long)]
        input: PathBuf,
        /// Structures/clusterings JSONL to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Evaluate predictions against gold annotations.
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        /// Predictions JSONL (structures, clusterings, or decisions).
        #[arg(long)]
        pred: PathBuf,
        /// Gold JSONL.
        #[arg(long)]
        gold: PathBuf,
        /// Machine-readable JSON report to write.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::Validation(_) | Error::Parse { .. } => 2,
        Error::Io { .. } => 3,
        Error::SolverBudget { .. } => 4,
        Error::RemoteTimeout { .. } | Error::RemoteProtocol { .. } => 5,
    }
}

fn run() -> spanlink_core::Result<()> {
    let cli = Cli::parse();
    let file_config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Prompts {
            common,
            input,
            output,
        } => {
            let config = RunConfig::resolve(common, &file_config)?;
            commands::prompts::run(&config, input, output)
        }
        Command::Score {
            common,
            input,
            output,
        } => {
            let config = RunConfig::resolve(common, &file_config)?;
            commands::score::run(&config, input, output)
        }
        Command::Infer {
            common,
            input,
            output,
        } => {
            let config = RunConfig::resolve(common, &file_config)?;
            commands::infer::run(&config, input, output)
        }
        Command::Eval {
            common,
            pred,
            gold,
            report,
        } => {
            let config = RunConfig::resolve(common, &file_config)?;
            commands::eval::run(&config, pred, gold, report.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code_for(&error))
        }
    }
}
