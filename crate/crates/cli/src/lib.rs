//! File formats, reports and commands behind the `fiedler` binary.

pub mod commands;
mod error;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::CliError;

/// Exit code when every verification passed.
pub const EXIT_PASS: u8 = 0;
/// Exit code when a verification failed.
pub const EXIT_FAIL: u8 = 1;
/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fiedler",
    version,
    about = "Build and verify Fiedler pencils of Rosenbrock system matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the Fiedler pencil of an RSMP for one decision sequence.
    Pencil {
        file: PathBuf,
        /// Decision string such as `CCICI`, or a permutation such as `1,2,4,3,6,5`.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the pencil reduces to the padded RSMP at random points.
    Verify {
        file: PathBuf,
        #[arg(long, conflicts_with = "all")]
        sigma: Option<String>,
        /// Verify every decision sequence.
        #[arg(long)]
        all: bool,
        /// Number of sample points.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the eigenvalues of S(λ), its transfer function and the cleared form.
    Eig {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print sizes and basic properties of a document.
    Info { file: PathBuf },
    /// Verify random integer instances over a grid of shapes.
    Fuzz {
        /// Largest of n, p and m.
        #[arg(default_value_t = 3)]
        max_size: usize,
        /// Largest of d_A and d_D.
        #[arg(default_value_t = 5)]
        max_degree: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn execute(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Pencil { file, sigma, out } => {
            commands::pencil(&file, sigma.as_deref(), out.as_deref())
        }
        Command::Verify {
            file,
            sigma,
            all,
            trials,
            tol,
            seed,
            out,
        } => {
            let opts = commands::VerifyOptions {
                sigma: sigma.as_deref(),
                all,
                trials,
                tol,
                seed,
            };
            commands::verify(&file, &opts, out.as_deref())
        }
        Command::Eig { file, out } => commands::eig(&file, out.as_deref()),
        Command::Info { file } => commands::info(&file),
        Command::Fuzz {
            max_size,
            max_degree,
            trials,
            tol,
            seed,
            out,
        } => commands::fuzz(
            &commands::FuzzOptions {
                max_size,
                max_degree,
                trials,
                tol,
                seed,
            },
            out,
        ),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
