use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use neofuzzy::data::Column;
use neofuzzy_cli::{commands, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "neofuzzy", version, about = "Evolving neo-fuzzy cascade forecaster")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the synthetic nonlinear series as a one-column CSV.
    Generate {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train in a single online pass and evaluate on the held-out tail.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// `key=value`, dotted keys for nested tables (e.g. growth.warmup=200).
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        out_model: PathBuf,
        #[arg(long)]
        out_report: PathBuf,
    },
    /// Predict every lag window of a CSV series with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Column index or header name.
        #[arg(long, default_value = "0")]
        column: Column,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report train/test accuracy of a saved model on a CSV series.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        train_count: usize,
        #[arg(long, default_value = "0")]
        column: Column,
        /// Also write the report as JSON.
        #[arg(long)]
        out_report: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { length, out } => commands::generate(length, &out),
        Command::Train { config, overrides, out_model, out_report } => {
            let cfg = RunConfig::load(&config, &overrides)?;
            let outcome = commands::train(&cfg)?;
            commands::save_snapshot(&outcome.snapshot, &out_model)?;
            commands::save_report(&outcome.report, &out_report)?;
            println!("{}", outcome.report);
            Ok(())
        }
        Command::Predict { model, data, column, out } => {
            let rows = commands::predict(&model, &data, &column, &out)?;
            eprintln!("wrote {rows} predictions to {}", out.display());
            Ok(())
        }
        Command::Eval { model, data, train_count, column, out_report } => {
            let report = commands::eval(&model, &data, &column, train_count)?;
            if let Some(path) = out_report {
                commands::save_report(&report, &path)?;
            }
            println!("{report}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
