use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cheshire::commands::{self, DEFAULT_MC_G, DEFAULT_MC_N, DEFAULT_SEED, DEFAULT_SIGMA, DEFAULT_SWEEP};
use cheshire::{CliError, Format};

#[derive(Parser)]
#[command(name = "cheshire", version, about = "Weak values of pre- and post-selected photons in Cheshire-cat interferometers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Weak values of every probe in the scenario.
    Table {
        scenario: String,
        #[command(flatten)]
        output: Output,
    },
    /// Exact pointer readouts at several couplings, extrapolated to g -> 0.
    PointerSweep {
        scenario: String,
        observable: String,
        /// Coupling strength; repeat for each point (at least three).
        #[arg(long = "g")]
        g: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo estimate of the real part from sampled pointer clicks.
    Montecarlo {
        scenario: String,
        observable: String,
        #[arg(long = "g", default_value_t = DEFAULT_MC_G)]
        g: f64,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        /// Number of trials before post-selection.
        #[arg(long, default_value_t = DEFAULT_MC_N)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Parse and cross-check a scenario file.
    Validate { scenario: String },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Table { scenario, output } => {
            let report = commands::cmd_table(&scenario)?;
            emit(&report.render(output.format), output.out.as_ref())
        }
        Command::PointerSweep { scenario, observable, g, sigma, output } => {
            let gs = if g.is_empty() { DEFAULT_SWEEP.to_vec() } else { g };
            let report = commands::cmd_pointer_sweep(&scenario, &observable, &gs, sigma)?;
            emit(&report.render(output.format), output.out.as_ref())
        }
        Command::Montecarlo { scenario, observable, g, sigma, n, seed, output } => {
            let report = commands::cmd_montecarlo(&scenario, &observable, g, sigma, n, seed)?;
            emit(&report.render(output.format), output.out.as_ref())
        }
        Command::Validate { scenario } => emit(&commands::cmd_validate(&scenario)?, None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
