use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::Command;

/// Sparse identification of nonlinear dynamics.
///
/// Exit codes: 0 success, 2 parse or configuration error, 3 rank-deficient
/// matrix, 4 empty initial support, 5 reproduction mismatch.
#[derive(Debug, Parser)]
#[command(name = "sindy", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Solve one sparse regression A x ≈ b and write the solution and trace.
    Solve {
        /// Matrix A as headerless CSV.
        #[arg(long = "A", alias = "a", value_name = "CSV")]
        a: PathBuf,
        /// Right-hand side b, one value per line.
        #[arg(long = "b", value_name = "CSV")]
        b: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        /// Ridge weight; switches to the augmented [A; γI] system.
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Simulate, perturb and identify a benchmark system from a JSON config.
    Identify {
        #[arg(long, value_name = "JSON")]
        config: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Re-run a reference example and compare against embedded values.
    Reproduce {
        /// example1_onestep, example1_fullpath, example2, table1, lorenz or thomas
        #[arg(long)]
        case: String,
    },
}

impl From<Sub> for Command {
    fn from(sub: Sub) -> Self {
        match sub {
            Sub::Solve { a, b, lambda, gamma, out } => Command::Solve { a, b, lambda, gamma, out },
            Sub::Identify { config, out } => Command::Identify { config, out },
            Sub::Reproduce { case } => Command::Reproduce { case },
        }
    }
}
