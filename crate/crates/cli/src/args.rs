use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "geonoether", version, about = "Lie and Noether point symmetries from the collineations of a metric")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for the sample points; defaults to $GEONOETHER_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the cataloged collineations of a space.
    Catalog(CatalogArgs),
    /// Solve the collineation equations of a constant metric exactly.
    SolveKilling(SolveArgs),
    /// Check claimed collineations against their defining equations.
    VerifyCollineation(VerifyArgs),
    /// Evaluate the Lie symmetry conditions of a scenario.
    LieCheck(CheckArgs),
    /// Evaluate the Noether symmetry conditions of a scenario.
    NoetherCheck(CheckArgs),
    /// Search the homothetic algebra for Noether symmetries.
    NoetherFind(FindArgs),
    /// Integrate the equations of motion and write a CSV trajectory.
    Simulate(SimulateArgs),
    /// Integrate and check that the Noether integrals stay constant.
    ConserveCheck(ConserveArgs),
    /// Reproduce the symmetry tables as a pass/fail document.
    Report(ReportArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Markdown,
    Json,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    /// Built-in scenario, e.g. `sphere:K=1` or `bianchi:IX:constant`.
    #[arg(long, conflicts_with = "file")]
    pub scenario: Option<String>,
    /// Scenario file (TOML).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Replace the scenario's potential.
    #[arg(long, allow_hyphen_values = true)]
    pub potential: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Sampling {
    /// Number of sample points.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Largest accepted residual.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    /// `flat:<signature>`, `euclidean:<n>`, `sphere:K=<1|-1>`, `bianchi`, `bianchi-vacuum` or a scenario name.
    #[arg(long, required_unless_present = "file")]
    pub space: Option<String>,
    /// Take the catalog of a scenario file.
    #[arg(long, conflicts_with = "space")]
    pub file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Dimension of a flat metric.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Signs of a flat metric, e.g. `+++` or `+-`.
    #[arg(long, allow_hyphen_values = true)]
    pub signature: Option<String>,
    /// Scenario file whose metric is solved.
    #[arg(long, conflicts_with_all = ["dim", "signature"])]
    pub metric: Option<PathBuf>,
    /// KV, HV, AC or SPC.
    #[arg(long, default_value = "KV")]
    pub kind: String,
    /// Largest polynomial degree of the ansatz.
    #[arg(long, default_value_t = geonoether::collineation::DEFAULT_MAX_DEGREE)]
    pub degree: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, Default)]
pub struct VectorArgs {
    /// Name of a cataloged or expected vector.
    #[arg(long)]
    pub vector: Option<String>,
    /// Time component of a custom vector.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    /// Spatial components of a custom vector, one flag per component.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Vec<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Space as accepted by `catalog`.
    #[arg(long, conflicts_with_all = ["scenario", "file"])]
    pub space: Option<String>,
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub vector: VectorArgs,
    /// Kind of a custom vector: KV, HV, AC or SPC.
    #[arg(long, default_value = "KV")]
    pub kind: String,
    /// Homothetic factor of a custom HV.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<f64>,
    /// Projective function of a custom SPC.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub vector: VectorArgs,
    /// Gauge function of a custom Noether vector.
    #[arg(long, allow_hyphen_values = true)]
    pub gauge: Option<String>,
    /// Also run the scenario's negative controls, which pass by failing.
    #[arg(long)]
    pub controls: bool,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct FindArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: Source,
    /// Initial position, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
    /// Initial velocity, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v0: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    /// rk4 or rk45.
    #[arg(long)]
    pub method: Option<String>,
    /// RK4 step.
    #[arg(long)]
    pub step: Option<f64>,
    /// RK45 absolute and relative tolerance.
    #[arg(long)]
    pub rk_tolerance: Option<f64>,
    /// Add the integrals of the symmetries the finder returns.
    #[arg(long)]
    pub find: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConserveArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Largest accepted relative drift.
    #[arg(long, default_value_t = 1e-7)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableChoice {
    All,
    #[value(name = "2", alias = "flat")]
    Flat,
    Newtonian,
    #[value(name = "7", alias = "sphere")]
    Sphere,
    #[value(name = "8")]
    Eight,
    #[value(name = "9")]
    Nine,
    #[value(name = "10")]
    Ten,
    #[value(name = "11")]
    Eleven,
    Bianchi,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Which tables to reproduce.
    #[arg(long, value_enum, default_value = "all", alias = "tables")]
    pub table: TableChoice,
    #[command(flatten)]
    pub sampling: Sampling,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}
