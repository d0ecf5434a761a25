use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "magfib", version, about = "Magnitude homology of finite metric spaces and metric fibrations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the metric axioms of a space.
    Validate(SpaceCmd),
    /// Magnitude homology for every achievable length up to --lmax.
    Mh(SpaceLevelCmd),
    /// Verify that a projection is a metric fibration.
    Fibcheck(FibrationCmd),
    /// Compare MC(E), MC(E)/D(E) and the tensor side in homology.
    Kunneth(FibrationLevelCmd),
    /// Validate the hv-matching on D(E) and reduce to critical cells.
    Morse(FibrationLevelCmd),
    /// Check the cellwise isomorphism of quotient Δ-sets against F×B.
    Deltaiso(FibrationLevelCmd),
    /// Compare causal-poset relative homology with magnitude homology.
    Cau(SpaceLevelCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Structured,
}

#[derive(Debug, Args)]
pub struct SpaceInput {
    /// Built-in fixture or space name (paper-E1, paper-E2, I3, K4, C5, …).
    #[arg(long, conflicts_with_all = ["space", "total"])]
    pub fixture: Option<String>,
    /// Space document (JSON).
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Use the total space of a fibration given by files.
    #[arg(long, conflicts_with = "space")]
    pub total: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FibrationInput {
    /// Built-in fibration (paper-E1, paper-E2, product-I2-I3, product-I2-K3).
    #[arg(long, conflicts_with_all = ["fibration", "total", "base", "proj"])]
    pub fixture: Option<String>,
    /// Fibration document with total, base and projection.
    #[arg(long, conflicts_with_all = ["total", "base", "proj"])]
    pub fibration: Option<PathBuf>,
    /// Total space document.
    #[arg(long, requires_all = ["base", "proj"])]
    pub total: Option<PathBuf>,
    /// Base space document.
    #[arg(long, requires_all = ["total", "proj"])]
    pub base: Option<PathBuf>,
    /// Projection document mapping total labels to base labels.
    #[arg(long, requires_all = ["total", "base"])]
    pub proj: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Worker threads for per-length jobs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct Levels {
    /// Largest length, as an integer or p/q.
    #[arg(long)]
    pub lmax: String,
    /// Largest degree to report; complexes are built one degree higher.
    #[arg(long)]
    pub nmax: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpaceCmd {
    #[command(flatten)]
    pub input: SpaceInput,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SpaceLevelCmd {
    #[command(flatten)]
    pub input: SpaceInput,
    #[command(flatten)]
    pub levels: Levels,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FibrationCmd {
    #[command(flatten)]
    pub input: FibrationInput,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FibrationLevelCmd {
    #[command(flatten)]
    pub input: FibrationInput,
    #[command(flatten)]
    pub levels: Levels,
    /// Base point whose fiber is used; defaults to the first base point.
    #[arg(long)]
    pub basepoint: Option<String>,
    #[command(flatten)]
    pub output: Output,
}
