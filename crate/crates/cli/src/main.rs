use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use morita_cli::emit::{render, Format};
use morita_cli::runner::{run, select, Options};
use morita_cli::scenario::{load, MAX_DEGREE};

/// Exact checks of trace identities for finite-dimensional algebras.
///
/// Exit status: 0 when every check passes or is skipped, 1 when a check
/// fails, 2 for unreadable scenarios and usage errors.
#[derive(Parser)]
#[command(name = "morita", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    /// Base seed, replacing the one in the scenario.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Degree bound for Hochschild computations, replacing each `n_max`.
    #[arg(long, global = true)]
    degree_bound: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 uses all cores).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check in the scenario.
    Check { scenario: PathBuf },
    /// Print the two-character tables of the scenario's group actions.
    Char { scenario: PathBuf },
    /// Print Hochschild homology dimensions.
    Hh { scenario: PathBuf },
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("morita: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (name, path) = match &cli.command {
        Command::Check { scenario } => ("check", scenario),
        Command::Char { scenario } => ("char", scenario),
        Command::Hh { scenario } => ("hh", scenario),
    };
    if let Some(d) = cli.degree_bound {
        if d == 0 || d > MAX_DEGREE {
            return usage_error(format!("--degree-bound must be between 1 and {MAX_DEGREE}"));
        }
    }
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("{}: {e}", path.display())),
    };
    let resolved = match load(&text) {
        Ok(r) => r,
        Err(e) => return usage_error(format!("{}: {e}", path.display())),
    };
    let checks = select(&resolved, name);
    let opts = Options { seed: cli.seed, degree_bound: cli.degree_bound, threads: cli.threads };
    let report = run(&resolved, name, &checks, opts);
    let text = render(&report, cli.format);
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                return usage_error(format!("{}: {e}", p.display()));
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
