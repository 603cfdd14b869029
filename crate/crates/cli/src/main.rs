//! `fso`: compute and export fractional Schrödinger spectra, gap statistics
//! and fits as CSV with JSON sidecars.

mod commands;
mod format;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CompareArgs, EigenfunctionArgs, FitArgs, GapsArgs, HistArgs, OutputArgs, ProblemArgs, Solve2dArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unusable input files; exit code 2.
    Usage(String),
    /// The computation itself failed; exit code 1.
    Numeric(String),
    Io(String),
}

impl From<fso_core::Error> for CliError {
    fn from(e: fso_core::Error) -> Self {
        match e {
            fso_core::Error::InvalidParameter(_) => Self::Usage(e.to_string()),
            other => Self::Numeric(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "fso", version, about = "Spectra of the fractional Schrödinger operator on intervals and boxes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jacobi spectral Galerkin eigenvalues on an interval
    Solve1d {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eigenvalues of a box as tensor sums of the free 1D spectrum
    Solve2d {
        #[command(flatten)]
        args: Solve2dArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Finite-difference eigenvalues on M intervals
    Fdm {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Nearest-neighbour, minimum, average and normalized gaps of a spectrum file
    Gaps {
        #[command(flatten)]
        args: GapsArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Histogram of normalized gaps
    Hist {
        #[command(flatten)]
        args: HistArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit asymptotic constants to a spectrum file
    Fit {
        #[command(flatten)]
        args: FitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Error of JSM and FDM eigenvalues against a larger JSM reference
    Compare {
        #[command(flatten)]
        args: CompareArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample eigenfunctions and fit their boundary exponent
    Eigenfunction {
        #[command(flatten)]
        args: EigenfunctionArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve1d { problem, output } => commands::solve1d(&problem, &output),
        Command::Solve2d { args, output } => commands::solve2d(&args, &output),
        Command::Fdm { problem, output } => commands::fdm(&problem, &output),
        Command::Gaps { args, output } => commands::gaps(&args, &output),
        Command::Hist { args, output } => commands::hist(&args, &output),
        Command::Fit { args, output } => commands::fit(&args, &output),
        Command::Compare { args, output } => commands::compare(&args, &output),
        Command::Eigenfunction { args, output } => commands::eigenfunction(&args, &output),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on its own for malformed flags.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg) | CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
