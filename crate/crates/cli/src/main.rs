use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nuclear_levy_cli::{cmd_cf, cmd_simulate, cmd_validate, cmd_verify, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "nlevy", version, about = "Construct, simulate and verify Lévy processes on nuclear sequence spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Lévy measure of the configured triplet.
    Validate(Args),
    /// Tabulate the characteristic function over the configured grid.
    Cf(Args),
    /// Simulate replica paths and export them.
    Simulate(Args),
    /// Run the configured verification tests.
    Verify(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON run configuration.
    config: PathBuf,
    /// Output directory (overrides the configuration and NUCLEAR_LEVY_OUT).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(&a.config, a.out.as_deref()),
        Command::Cf(a) => cmd_cf(&a.config, a.out.as_deref()),
        Command::Simulate(a) => cmd_simulate(&a.config, a.out.as_deref()),
        Command::Verify(a) => cmd_verify(&a.config, a.out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("nlevy: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
