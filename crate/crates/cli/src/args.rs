use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modent::states::StateParams;

#[derive(Debug, Parser)]
#[command(name = "modent", version, about = "Mode entanglement, spin squeezing and super-selection analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named state and summarise it.
    State {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bloch vector, covariance matrix and principal axes.
    Analyze {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the entanglement test battery on a named state.
    Witness {
        #[command(flatten)]
        state: StateArgs,
        /// Also list inapplicable tests and non-witness diagnostics.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Uncertainty-allowed variance bands against |<Jz>|.
    Region {
        #[arg(long = "J")]
        j: f64,
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Simulate one of the physical processes.
    Process {
        #[arg(long, value_enum, default_value_t = ProcessKind::DowlingFock)]
        kind: ProcessKind,
        /// Relative phase (detuning times free-evolution time).
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Boson number (Fock process) or mean condensate number (full process).
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Interferometer input mixing angle: alpha = cos(theta), beta = sin(theta) e^{i chi}.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        chi: f64,
        /// Interferometer input as a number mixture instead of a superposition.
        #[arg(long)]
        mixed: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Catalogue battery, seeded separable soundness sweep and region summary.
    Suite {
        /// Separable samples per family.
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ProcessKind {
    DowlingFock,
    DowlingFull,
    Interferometer,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// State label.
    #[arg(long)]
    pub state: String,
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub chi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<i64>,
    #[arg(long = "abs-alpha")]
    pub abs_alpha: Option<f64>,
    /// Occupancy for `fock`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Variant index for the Bell families.
    #[arg(long)]
    pub variant: Option<usize>,
    /// Per-mode cutoff for coherent and Fock states.
    #[arg(long)]
    pub cutoff: Option<usize>,
}

impl StateArgs {
    pub fn params(&self) -> StateParams {
        StateParams {
            n: self.big_n,
            theta: self.theta,
            chi: self.chi,
            p: self.p,
            abs_alpha: self.abs_alpha,
            occupancy: self.variant.or(self.n),
            cutoff: self.cutoff,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
