//! Batch verification tool: `exoring <command> --config <path>`.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on
//! config or i/o errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use exoring_cli::{parse_config, run, CliError, COMMANDS};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "exoring", version, about = "Verification toolkit for Laurent-ring subalgebra families")]
struct Cli {
    /// One of: verify-domain, verify-lnd, grading, contraction, chain,
    /// fingerprint, compare, oracle-audit
    command: String,

    /// JSON config with specs, bounds, and seed
    #[arg(long)]
    config: PathBuf,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("exoring: {e}");
            if !COMMANDS.contains(&cli.command.as_str()) {
                eprintln!("commands: {}", COMMANDS.join(", "));
            }
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| CliError::Io(format!("{}: {e}", cli.config.display())))?;
    let config = parse_config(&text)?;
    let report = run(&cli.command, &config, cli.seed)?;
    let rendered = match cli.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Text => report.to_text(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(report.all_passed)
}
