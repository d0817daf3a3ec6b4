use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use unruh_cli::{execute, Command, Invocation, Source};

/// Entanglement dynamics of accelerated atoms versus a thermal bath.
#[derive(Parser)]
#[command(name = "unruh", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Print the dissipator coefficients for both baths and atom orders.
    Coeffs(Common),
    /// Write concurrence curves and an events table.
    Evolve(Common),
    /// Write maximum concurrence and events over the grid.
    Sweep(Common),
    /// Classify the (a/omega, omega*L) grid by which bath shows the event.
    Region(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled figure preset, e.g. fig1 or fig7-left.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Sub::Coeffs(c) => (Command::Coeffs, c),
        Sub::Evolve(c) => (Command::Evolve, c),
        Sub::Sweep(c) => (Command::Sweep, c),
        Sub::Region(c) => (Command::Region, c),
    };
    let source = match (common.config, common.preset) {
        (Some(path), None) => Source::Config(path),
        (None, Some(name)) => Source::Preset(name),
        _ => unreachable!("clap enforces exactly one source"),
    };
    let invocation = Invocation {
        command,
        source,
        out: common.out,
        threads: common.threads,
    };
    match execute(&invocation) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
