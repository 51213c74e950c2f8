//! `rounding-forge`: validate jets, build canonical roundings, lift them to
//! sphere maps, and generate normed pairings, Hopf maps and tables.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 mathematically invalid
//! input.

mod commands;
mod doc;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {location}: {message}")]
    Parse {
        path: String,
        location: String,
        message: String,
    },
    #[error("{0}")]
    Math(#[from] rounding_core::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser, Debug)]
#[command(name = "rounding-forge", version, about = "Exact toolkit for roundings, sphere maps and normed pairings")]
pub struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    /// Number of random lines.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// RNG seed for line sampling.
    #[arg(long, env = "ROUNDING_FORGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Relative residual tolerance.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

impl OracleArgs {
    fn params(&self) -> String {
        format!("trials={};seed={};tol={:e}", self.trials, self.seed, self.tol)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a 2-jet (jet or fracquad document) and decide degeneracy.
    Check { file: PathBuf },
    /// Build the canonical fractional quadratic rounding of a jet.
    Canon {
        file: PathBuf,
        /// Write the fracquad document here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run the numerical line-to-circle oracle on the result.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Degeneracy verdict with kernel and witness.
    Degen { file: PathBuf },
    /// Factor a degenerate jet through a projection.
    Factor {
        file: PathBuf,
        /// Write the reduced jet document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two jets are equivalent.
    Equiv { first: PathBuf, second: PathBuf },
    /// Lift a nondegenerate jet to a quadratic map between spheres.
    Sphere {
        file: PathBuf,
        /// Write the spheremap document here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Evaluate the factored chart at a point, e.g. `--at 0.5,0`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Option<Vec<f64>>,
    },
    /// Hurwitz-Radon normed pairing of size [r, n, n].
    Pairing {
        r: usize,
        n: usize,
        /// Write the pairing document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hopf map of a normed pairing, given as a file or by size.
    Hopf {
        /// Pairing document.
        file: Option<PathBuf>,
        /// Size [r, n, n] of a constructed pairing instead of a file.
        #[arg(long, num_args = 2, value_names = ["R", "N"], conflicts_with = "file")]
        size: Option<Vec<usize>>,
        /// Write the spheremap document here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run the oracle on the associated line-to-circle map f / <x,x>.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Tables of rho, kappa, or a Stiefel-Hopf verdict.
    Tables {
        /// rho(1..=N).
        #[arg(long, group = "table")]
        rho: Option<u64>,
        /// kappa(M), or kappa(1..=M) with --range.
        #[arg(long, group = "table")]
        kappa: Option<usize>,
        /// Stiefel-Hopf parity test for size [r, s, n].
        #[arg(long, group = "table", num_args = 3, value_names = ["R", "S", "N"])]
        stiefel: Option<Vec<usize>>,
        /// With --kappa, print the whole range 1..=M.
        #[arg(long)]
        range: bool,
        /// Print the JSON report instead of the text table.
        #[arg(long)]
        json: bool,
    },
    /// Numerical line-to-circle check of a jet (its canonical rounding),
    /// a fracquad map, or a pairing (f / <x,x>).
    Verify {
        file: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(output) => {
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, output.report.render()) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(report::EXIT_OPERATIONAL as u8);
                }
            }
            print!("{}", output.stdout);
            ExitCode::from(output.report.exit_status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(report::EXIT_OPERATIONAL as u8)
        }
    }
}
