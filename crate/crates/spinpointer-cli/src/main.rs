use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinpointer_cli::commands::{execute, resolve, Command};
use spinpointer_cli::config::{CommonArgs, Format, RunConfig};
use spinpointer_cli::{validate, CliError};

/// Simultaneous three-axis pointer measurement of N parallel spins.
#[derive(Parser)]
#[command(name = "spinpointer", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Average guessing fidelity over a range of pointer spreads
    Sweep(CommonArgs),
    /// Spread maximizing the average fidelity (golden-section search)
    Optimize(CommonArgs),
    /// Disturbance of the measured state over a range of spreads
    Disturbance(CommonArgs),
    /// Post-measurement Bloch vector, closed form against quadrature
    Bloch(CommonArgs),
    /// Large-N fidelity lower bound and its scaling factor
    Asympt(CommonArgs),
    /// Closed-form reference constants
    Reference(CommonArgs),
    /// Run the invariant suite
    Validate(CommonArgs),
}

fn run(command: Command, args: &CommonArgs) -> Result<(), CliError> {
    let cfg = resolve(command, RunConfig::from_args(command.name(), args)?);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    let outcome = pool.install(|| execute(command, &cfg))?;
    let text = outcome.table.render(cfg.format.unwrap_or(Format::Csv), &cfg.to_json());
    match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    if !outcome.failures.is_empty() {
        return Err(CliError::Numerical(outcome.failures.join("; ")));
    }
    if command == Command::Validate {
        let failed = validate::failing(&outcome.table);
        if !failed.is_empty() {
            return Err(CliError::Validation(failed.join(", ")));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Sub::Sweep(a) => (Command::Sweep, a),
        Sub::Optimize(a) => (Command::Optimize, a),
        Sub::Disturbance(a) => (Command::Disturbance, a),
        Sub::Bloch(a) => (Command::Bloch, a),
        Sub::Asympt(a) => (Command::Asympt, a),
        Sub::Reference(a) => (Command::Reference, a),
        Sub::Validate(a) => (Command::Validate, a),
    };
    match run(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinpointer: {e}");
            e.exit_code()
        }
    }
}
