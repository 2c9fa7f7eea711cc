use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polyspan::{check, commands};

/// Polynomials over finite sets, relations and finite categories.
#[derive(Parser)]
#[command(name = "polyspan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose two polynomials: LHS ∘ RHS.
    Compose {
        #[arg(long, value_parser = ["set", "rel", "mod"])]
        kind: String,
        lhs: PathBuf,
        rhs: PathBuf,
        /// Write the result here instead of standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a polynomial on a family, span, relation or module.
    Eval { poly: PathBuf, family: PathBuf },
    /// Run a property suite.
    Check {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of cases; defaults to the suite's own count.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Print a random document.
    Random {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Input(String),
    Property(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn input(e: polyspan::Error) -> Failure {
    Failure::Input(e.to_string())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compose {
            kind,
            lhs,
            rhs,
            out,
        } => {
            let doc = commands::compose(&kind, &read(&lhs)?, &read(&rhs)?).map_err(input)?;
            match out {
                Some(path) => std::fs::write(&path, doc)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                None => print!("{doc}"),
            }
        }
        Command::Eval { poly, family } => {
            print!(
                "{}",
                commands::eval(&read(&poly)?, &read(&family)?).map_err(input)?
            );
        }
        Command::Check { suite, seed, count } => {
            let count = count
                .or_else(|| check::suite(&suite).map(|s| s.default_count))
                .unwrap_or(0);
            let report = check::run_suite(&suite, seed, count).map_err(input)?;
            if !report.passed() {
                return Err(Failure::Property(report.render()));
            }
            print!("{}", report.render());
        }
        Command::Random { kind, seed } => {
            print!("{}", commands::random(&kind, seed).map_err(input)?)
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(report)) => {
            print!("{report}");
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
