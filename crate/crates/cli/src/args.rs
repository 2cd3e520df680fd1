use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monkey_zipf::FigureKind;

pub const SEED_ENV: &str = "MONKEY_ZIPF_SEED";
/// Words of length <= 4 on a 26-letter keyboard.
pub const DEFAULT_N: usize = 475_255;

#[derive(Debug, Parser)]
#[command(
    name = "monkey-zipf",
    version,
    about = "Ranked word probabilities from random typing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw spacings of [0,1] and scale them into letter probabilities.
    Sample {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve for the exponent and the rank-bound constants.
    Exponent {
        #[command(flatten)]
        keyboard: KeyboardArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Top-N words in rank order.
    Enumerate {
        #[command(flatten)]
        keyboard: KeyboardArgs,
        #[arg(long = "N", default_value_t = DEFAULT_N)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact N(t) and cumulative counts on a grid of t.
    Counts {
        #[command(flatten)]
        keyboard: KeyboardArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check one of the proven inequalities; exits 3 on a violation.
    Verify {
        #[command(flatten)]
        check: CheckArgs,
        #[command(flatten)]
        keyboard: KeyboardArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long = "N", default_value_t = DEFAULT_N)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Log-log rank series for one panel.
    Figure {
        #[arg(long, default_value = "equal")]
        kind: FigureKind,
        #[arg(long = "K", default_value_t = 26)]
        k: usize,
        #[command(flatten)]
        mass: MassArgs,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long = "N", default_value_t = DEFAULT_N)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// |β - 1| over many seeds at each K.
    Sweep {
        #[arg(long = "Ks", value_delimiter = ',', default_value = "10,100,1000")]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        #[arg(long, default_value = "uniform")]
        spec: String,
        #[command(flatten)]
        mass: MassArgs,
        /// First seed; replicate i uses seed + i.
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct MassArgs {
    /// Total letter probability.
    #[arg(long, conflicts_with = "s")]
    pub c: Option<f64>,
    /// Space probability, 1 - c.
    #[arg(long)]
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    #[arg(long = "K", default_value_t = 26)]
    pub k: usize,
    #[command(flatten)]
    pub mass: MassArgs,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// uniform, beta32, or table:PATH (CSV of p,x quantile knots).
    #[arg(long, default_value = "uniform")]
    pub spec: String,
}

#[derive(Debug, Clone, Args)]
pub struct KeyboardArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Equal letter probabilities c/K instead of sampled spacings.
    #[arg(long, conflicts_with = "keyboard")]
    pub miller: bool,
    /// Keyboard JSON document with `q` and `s`.
    #[arg(long, value_name = "FILE")]
    pub keyboard: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
#[group(required = true, multiple = false)]
pub struct CheckArgs {
    #[arg(long)]
    pub csiszar: bool,
    #[arg(long)]
    pub rankbounds: bool,
    #[arg(long)]
    pub prop1: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 0.5)]
    pub tstep: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file, written atomically; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
