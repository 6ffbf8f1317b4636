mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{ConfigError, Format, MeasureArg, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "basilica",
    version,
    about = "Spectral analysis on the Basilica Julia set"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// JSON run configuration; flags take precedence over its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `dyadic`, `conformal`, or a path to a custom rule file.
    #[arg(long, global = true)]
    scheme: Option<String>,
    #[arg(long, global = true)]
    p: Option<f64>,
    #[arg(long, global = true)]
    q: Option<f64>,
    #[arg(long, global = true)]
    level: Option<usize>,
    #[arg(long, global = true, value_enum)]
    measure: Option<MeasureArg>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

impl GlobalArgs {
    fn into_config(self) -> Result<RunConfig, ConfigError> {
        let flags = RunConfig {
            scheme: self.scheme,
            p: self.p,
            q: self.q,
            level: self.level,
            measure: self.measure,
            output: self.output,
            format: self.format,
            seed: self.seed,
        };
        match self.config {
            Some(path) => Ok(RunConfig::load(&path)?.overlay(flags)),
            None => Ok(flags),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphMode {
    Cells,
    GraphDirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumMode {
    Decimation,
    GraphDirected,
    Fractal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DimensionMode {
    SelfSimilar,
    GraphDirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BirthArg {
    Exceptional,
    Initial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OriginArg {
    Zero,
    TwoQ,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit `G_n` or `G′_n` as a JSON document, or a vertex layout as CSV.
    Graph {
        #[arg(long, value_enum, default_value = "cells")]
        mode: GraphMode,
    },
    /// Eigenvalues with multiplicities.
    Spectrum {
        #[arg(long, value_enum, default_value = "decimation")]
        mode: SpectrumMode,
        /// Include the Neumann candidates in the fractal spectrum.
        #[arg(long)]
        neumann: bool,
    },
    /// Vertex values of an eigenfunction of the level-`n` walk.
    Eigenfunction {
        /// Position in the atom list printed by `spectrum`.
        #[arg(long, conflicts_with_all = ["birth", "lineage"])]
        index: Option<usize>,
        #[arg(long, value_enum, requires = "lineage")]
        birth: Option<BirthArg>,
        /// Branch word, e.g. `-+-`; empty for the seed itself.
        #[arg(long, requires = "birth", allow_hyphen_values = true)]
        lineage: Option<String>,
        /// Seed of an initial atom.
        #[arg(long, value_enum)]
        origin: Option<OriginArg>,
        /// Which basis vector of the eigenspace.
        #[arg(long, default_value_t = 0)]
        component: usize,
    },
    /// Effective resistance `R` and geodesic metric `S` for vertex pairs.
    Resistance {
        /// Sample this many pairs with `--seed` instead of listing all of them.
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// Per-cell measure table.
    Measure,
    /// Weyl fit of the counting function and the exact spectral exponents.
    Dimension {
        #[arg(long, value_enum, default_value = "self-similar")]
        mode: DimensionMode,
    },
    /// Backward orbit of the fixed point `a` as a scatter table.
    Julia,
    /// Run every registered invariant; fails if any does.
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = cli
        .global
        .into_config()
        .map_err(anyhow::Error::from)
        .and_then(|cfg| commands::run(&cli.command, &cfg));
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
