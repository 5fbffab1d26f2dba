use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plqi_core::certify::ConvexityMode;
use plqi_core::distortion::BOUND_SLACK;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "plqi", version, about = "Certify and probe piecewise-linear quasi-isometries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a complex file describes a valid geometric simplicial complex.
    Validate(ValidateArgs),
    /// Emit a bi-Lipschitz certificate for a simplicial homeomorphism.
    Certify(CertifyArgs),
    /// Sample distortion ratios of a map file or an analytic map spec.
    Distort(DistortArgs),
    /// Write complexes, maps and specs for the explicit constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Evaluate d(f(g(x)), g(f(x))) along a list of points.
    Commutator(CommutatorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convexity {
    Auto,
    Assume,
    None,
}

impl From<Convexity> for ConvexityMode {
    fn from(c: Convexity) -> Self {
        match c {
            Convexity::Auto => ConvexityMode::Auto,
            Convexity::Assume => ConvexityMode::Assume,
            Convexity::None => ConvexityMode::None,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    pub complex: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    /// Map file (source, target, vertex_images).
    pub map: PathBuf,
    #[arg(long, value_enum, default_value_t = Convexity::Auto)]
    pub convexity: Convexity,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DistortArgs {
    /// Map file or analytic map spec.
    pub input: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub pairs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Share of within-simplex pairs (map files) or local pairs (specs).
    #[arg(long, default_value_t = 0.5)]
    pub stratification: f64,
    /// Sampling ball radius for specs.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Sampling ball center for specs, comma separated; the origin by default.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,
    /// Certificate to check the sampled ratios against.
    #[arg(long)]
    pub check_against: Option<PathBuf>,
    /// Explicit constant to check against.
    #[arg(long, conflicts_with = "check_against")]
    pub bound: Option<f64>,
    /// Additive slack of the bound check.
    #[arg(long, default_value_t = BOUND_SLACK)]
    pub tolerance: f64,
    /// Also estimate the quasi-isometry constant.
    #[arg(long)]
    pub qi: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructKind {
    /// Complexes K, K′, the map h′ between them, and the spec of its extension h.
    DiscSwap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Cone map spec.
    Cone {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        axis: Vec<f64>,
        #[arg(long, default_value_t = 0.25)]
        inner: f64,
        #[arg(long, default_value_t = 0.5)]
        outer: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Witness discs for `f` and the rescaled disc map over them.
    Case1 {
        #[arg(long)]
        n: usize,
        /// Spec of f; doubling when omitted.
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct CommutatorArgs {
    pub f: PathBuf,
    pub g: PathBuf,
    /// JSON array of points.
    #[arg(long, conflicts_with = "ray")]
    pub points: Option<PathBuf>,
    /// Use the points m·v, m = 1..count.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ray: Option<Vec<f64>>,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
