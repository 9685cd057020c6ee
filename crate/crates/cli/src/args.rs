// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qpt_core::nogo::parse_amplitude;
use qpt_core::{Tolerance, C64};

use crate::output::CliError;

/// Largest tolerance accepted from the command line or `QPT_EPS`.
pub const MAX_EPS: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "qpt", version, about = "Determinate sublattices, no-go checks and quantum-logic scenarios")]
pub struct Cli {
    /// Numerical tolerance, 0 < eps <= 1e-3. Falls back to QPT_EPS, then 1e-9.
    #[arg(long, global = true)]
    pub eps: Option<f64>,

    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObservableKind {
    /// R = I: every basis ray is its own eigenspace.
    Identity,
    /// Nondegenerate observable with a seeded random eigenbasis.
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// EPR premeasurement: membership flip and no-signalling.
    Epr,
    /// Teleportation of c+|+> + c-|->.
    Teleport {
        #[arg(long, value_parser = amplitude, allow_hyphen_values = true, default_value = "0.6")]
        c_plus: C64,
        #[arg(long, value_parser = amplitude, allow_hyphen_values = true, default_value = "0.8")]
        c_minus: C64,
        /// Monte Carlo runs for the outcome histogram.
        #[arg(long, default_value_t = 10_000)]
        runs: usize,
    },
    /// Pointer decoherence by N environment qubits.
    Decohere {
        #[arg(long, default_value_t = 10)]
        n_env: usize,
        #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Hydrogen frequency ratios against the classical orbital frequency.
    Correspond {
        #[arg(long, default_value_t = 500)]
        n_max: usize,
    },
    /// Exhaustive Kochen-Specker search on a ray-set file.
    Ks {
        #[arg(long)]
        rays: PathBuf,
    },
    /// CHSH on the singlet: quantum value, LHV bound, local-model search.
    Chsh {
        /// Alice's two analyzer angles (radians); defaults to 0, pi/2.
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        alice: Option<Vec<f64>>,
        /// Bob's two analyzer angles (radians); defaults to pi/4, 3pi/4.
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        bob: Option<Vec<f64>>,
    },
    /// Rabi oscillation with the stochastic property-state process.
    Dynamics {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 3.0)]
        duration: f64,
        #[arg(long, default_value_t = 10_000)]
        trajectories: usize,
        /// Also write one sampled trajectory as CSV rows.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Determinate sublattice of a seeded random state.
    Determinate {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = ObservableKind::Identity)]
        observable: ObservableKind,
        /// Random members used for the Born-measure check.
        #[arg(long, default_value_t = 50)]
        members: usize,
        /// Extend by a random non-member ray and look for a contradiction.
        #[arg(long)]
        extend: bool,
    },
}

fn amplitude(s: &str) -> Result<C64, String> {
    parse_amplitude(s).map_err(|e| e.to_string())
}

/// Resolved global options.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub tol: Tolerance,
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Cli {
    pub fn config(&self) -> Result<CliConfig, CliError> {
        let tol = match self.eps {
            Some(eps) => checked_eps(eps, "--eps")?,
            None => {
                let env = Tolerance::from_env().map_err(|e| CliError::Usage(e.to_string()))?;
                checked_eps(env.eps, qpt_core::linalg::EPS_ENV_VAR)?
            }
        };
        Ok(CliConfig { tol, seed: self.seed, format: self.format, output: self.output.clone() })
    }
}

fn checked_eps(eps: f64, source: &str) -> Result<Tolerance, CliError> {
    if !(eps > 0.0 && eps <= MAX_EPS) {
        return Err(CliError::Usage(format!("{source}: tolerance must satisfy 0 < eps <= {MAX_EPS:e}, got {eps}")));
    }
    Tolerance::new(eps).map_err(|e| CliError::Usage(e.to_string()))
}
