//! The `qlock` command line.
//!
//! [`run`] parses an argument vector and returns the exit code with the
//! text meant for stdout and stderr, so it can be driven in-process.
//! Exit codes: 0 success, 1 usage or validation error, 2 numerical failure.

mod commands;
mod output;
pub mod range;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use output::CommandResult;

#[derive(Debug, Parser)]
#[command(
    name = "qlock",
    version,
    about = "Quantum data locking with Clifford circuits"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Emit CSV with a header row instead of human-readable text.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Master seed, 1 to 32 hex digits. Without it a fresh seed is drawn
    /// and reported on stderr.
    #[arg(long, global = true, value_name = "HEX")]
    pub seed: Option<String>,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads for Monte-Carlo commands. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args, Clone)]
pub struct SamplerOpts {
    /// Ensemble: approx, uniform or single.
    #[arg(long, default_value = "approx")]
    pub mode: String,
    /// Design accuracy.
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Constant c in the circuit length c n (n + log2(1/delta)).
    #[arg(long, default_value_t = 1.0)]
    pub depth_factor: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a uniform key in 0..K.
    Keygen {
        #[arg(long = "K")]
        k: u64,
    },
    /// Build a codebook of K design circuits.
    Codebook {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        k: usize,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
    },
    /// Encrypt a bit string with codebook circuit `key`.
    Encrypt {
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long)]
        key: u64,
        #[arg(long)]
        x: String,
    },
    /// Decrypt a cipher file.
    Decrypt {
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long)]
        key: u64,
        /// Cipher file; `-` reads stdin.
        #[arg(long)]
        cipher: PathBuf,
    },
    /// Estimate design moments and check the (1 +- delta) band.
    Moments(MomentOpts),
    /// Estimate the spread coefficient gamma and compare with its bounds.
    Gamma(MomentOpts),
    /// Key threshold, failure bounds and key lengths.
    Keylen {
        #[arg(long)]
        n: usize,
        #[arg(long = "eps")]
        epsilon: f64,
        /// Min-entropy of the prior in bits (default n).
        #[arg(long)]
        hmin: Option<f64>,
        /// Number of code words (default 2^n).
        #[arg(long = "M")]
        m: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Spread coefficient (default from delta).
        #[arg(long)]
        gamma: Option<f64>,
        /// Also evaluate the bounds at this K.
        #[arg(long = "K")]
        k: Option<f64>,
    },
    /// Key length against register size.
    Fig2 {
        #[arg(long = "eps", default_value_t = 1e-8)]
        epsilon: f64,
        /// Comma-separated H_min / n values.
        #[arg(long, default_value = "1.0")]
        hmin_frac: String,
        /// Register sizes as start:stop:step.
        #[arg(long, default_value = "10:130:10")]
        n: String,
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
    },
    /// Largest eigenvalue of Eve's state over sampled codebooks.
    VerifyChernoff {
        #[arg(long)]
        n: usize,
        /// Codebook size (default: ceil of the Chernoff threshold).
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long = "eps", default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Prior file of `<bits> <probability>` lines (default uniform).
        #[arg(long)]
        prior_file: Option<PathBuf>,
        #[command(flatten)]
        sampler: SamplerOpts,
    },
    /// Lower tail of <phi|rho_x|phi> over sampled codebooks.
    VerifyMaurer {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        k: usize,
        /// Plaintext (default all zeros).
        #[arg(long)]
        x: Option<String>,
        /// Basis state phi (default all zeros).
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        tau: f64,
        /// Spread coefficient (default: estimated from the ensemble).
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 20_000)]
        gamma_samples: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[command(flatten)]
        sampler: SamplerOpts,
    },
    /// Holevo quantity versus measured mutual information.
    LockProbe {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        k: usize,
        #[arg(long = "eps", default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 20)]
        haar_bases: usize,
        #[arg(long, default_value_t = 0)]
        clifford_bases: usize,
        #[arg(long)]
        prior_file: Option<PathBuf>,
        #[command(flatten)]
        sampler: SamplerOpts,
    },
}

#[derive(Debug, Args, Clone)]
pub struct MomentOpts {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// basis or haar.
    #[arg(long, default_value = "basis")]
    pub probe: String,
    /// Basis state alpha (default all zeros).
    #[arg(long)]
    pub alpha: Option<String>,
    /// Basis state beta (default all zeros).
    #[arg(long)]
    pub beta: Option<String>,
    /// Confidence multiplier for the design band.
    #[arg(long, default_value_t = qlock::design::DEFAULT_Z)]
    pub z: f64,
    #[command(flatten)]
    pub sampler: SamplerOpts,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult::ok(text),
                _ => CommandResult::usage(text),
            };
        }
    };
    commands::execute(cli)
}
