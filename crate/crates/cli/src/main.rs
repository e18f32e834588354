mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fpres::wzw::DEFAULT_WEIGHT_CAP;

/// Simple-current extensions of modular data with fixed-point resolution.
#[derive(Debug, Parser)]
#[command(name = "fpres", version)]
pub struct Cli {
    /// Cache directory for generated SU(N)_k data.
    #[arg(long, global = true, env = "FPRES_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Tolerance of the consistency conditions on fixed-point data.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// Convention seed: bit 0 picks the largest orbit representative,
    /// bit 1 the largest coset member, higher bits offset character roots.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed_conventions: u64,
    /// Output file, or output directory for `extend`. Writes a run
    /// manifest next to the outputs. Without it the result goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest number of fields a command may materialize.
    #[arg(long, global = true, default_value_t = DEFAULT_WEIGHT_CAP)]
    pub max_fields: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write built-in modular data.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Tensor product of modular data files.
    Tensor {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
    },
    /// List the simple currents of a theory.
    Currents {
        /// Modular data files; several are combined as a tensor product.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Directory for the fixed-point bundles solved from S alone.
        #[arg(long)]
        bundle_dir: Option<PathBuf>,
    },
    /// Extend a theory by a group of integer-spin currents.
    Extend {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Generator of the extension group, by field id or label.
        #[arg(long = "current", required = true)]
        currents: Vec<String>,
        /// Fixed-point bundle files of the base theory.
        #[arg(long = "bundle")]
        bundles: Vec<PathBuf>,
    },
    /// Check fixed-point bundles against the consistency conditions.
    Validate {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long = "bundle")]
        bundles: Vec<PathBuf>,
    },
    /// Fusion coefficients from the Verlinde formula.
    Fusion { input: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    Su2 {
        #[arg(long)]
        k: u32,
    },
    #[command(name = "suN")]
    SuN {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    Ising,
}

/// How a command ended when it did not fail with an error.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use fpres::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::ResourceLimit(_)) => 3,
        Some(
            E::InvalidInput(_)
            | E::InvalidExtension(_)
            | E::IncompleteInput(_)
            | E::NotApplicable(_)
            | E::Schema(_)
            | E::Json(_)
            | E::Io(_),
        ) => 2,
        Some(_) => 1,
        None if err.downcast_ref::<std::io::Error>().is_some() => 2,
        None if err.downcast_ref::<serde_json::Error>().is_some() => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
