mod bench;
mod gen;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qptas::{Constants, Error};

#[derive(Parser)]
#[command(
    name = "qptas",
    version,
    about = "Query-efficient k-CC and MFAST solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted instance and its ground-truth sidecar.
    Gen(gen::GenArgs),
    /// Solve an instance file and print a JSON report.
    Solve(solve::SolveArgs),
    /// Sweep over sizes and seeds and write one CSV row per run.
    Bench(bench::BenchArgs),
    /// Print a constants profile as name=value lines.
    Consts {
        #[arg(long, value_enum, default_value = "desk")]
        profile: Profile,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Profile {
    Desk,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Kcc,
    Mfast,
}

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Unsupported(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Unsupported(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::UnknownConstant(_)
            | Error::Parse(_)
            | Error::Io(_)
            | Error::DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            Error::BudgetExceeded { .. }
            | Error::CapExceeded { .. }
            | Error::PlanBudget { .. }
            | Error::NoFeasibleCandidate => Failure::Unsupported(e.to_string()),
            Error::SelfPair(_) | Error::Lp(_) => Failure::Invariant(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Desk constants with `name=value` overrides applied in order.
pub fn constants(overrides: &[String]) -> Result<Constants, Failure> {
    let mut c = Constants::desk();
    for o in overrides {
        c.apply(o)?;
    }
    Ok(c)
}

pub fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => gen::run(&args),
        Command::Solve(args) => solve::run(&args),
        Command::Bench(args) => bench::run(&args),
        Command::Consts { profile } => {
            let c = match profile {
                Profile::Desk => Constants::desk(),
                Profile::Asymptotic => Constants::asymptotic(),
            };
            for name in Constants::names() {
                println!("{name}={}", c.get(name).expect("listed name"));
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Unsupported(msg) | Failure::Invariant(msg)) = &f;
            eprintln!("qptas: {msg}");
            ExitCode::from(f.code())
        }
    }
}
