//! `tropml` command-line interface.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use tropml::ErrorKind;

#[derive(Error, Debug)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tropml::Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 0 success, 2 parse, 3 dimension, 4 solver, 5 geometry, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Parse => 2,
                ErrorKind::Dimension => 3,
                ErrorKind::Solver => 4,
                ErrorKind::Geometry => 5,
                ErrorKind::Other => 1,
            },
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tropml", version, about = "Tropical geometry for statistical learning and phylogenetics")]
pub struct Cli {
    /// Seed of the random streams.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance for membership, chain bisection and ultrametric checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// The first non-comment line of CSV input is a header.
    #[arg(long, global = true)]
    pub header: bool,
    /// Write the primary output here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for independent chains and scoring.
    #[arg(long, global = true, default_value_t = 1)]
    pub parallel: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tropical distance between the first two rows, or all pairwise distances.
    Dist { input: String },
    /// Rows shifted so that their first coordinate is 0.
    Normalize { input: String },
    /// Tropical determinant and the rows reordered onto the optimal diagonal.
    Det { input: String },
    /// Bend points of the tropical segment from the first row to the second.
    Segment { input: String },
    /// Projects points onto the tropical hull of a polytope.
    Project {
        polytope: String,
        /// Points file; one projection per row.
        points: Option<String>,
        /// A single inline point such as "0,6,2".
        #[arg(long, conflicts_with = "points")]
        point: Option<String>,
    },
    /// Distance from each row to a tropical hyperplane.
    Hyperdist {
        input: String,
        /// Normal vector, e.g. "0,-1,-1".
        #[arg(long, allow_hyphen_values = true)]
        normal: String,
        #[arg(long, value_enum, default_value_t = AlgebraArg::Max)]
        algebra: AlgebraArg,
    },
    /// Fermat-Weber point of the rows.
    Fwpoint {
        input: String,
        #[arg(long, value_enum, default_value_t = FwMethodArg::Lp)]
        method: FwMethodArg,
        /// Ultrametric penalty rate for `--method reg`.
        #[arg(long, default_value_t = 0.0)]
        penalty: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
    },
    /// Hit-and-run samples from a tropical segment or polytope.
    Sample(SampleArgs),
    /// Minimum enclosing tropical ball, as JSON.
    Ball { polytope: String },
    /// Monte Carlo volume of a polytope through its enclosing ball, as JSON.
    Volume {
        polytope: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// Extra chain states discarded first, as a fraction of the samples.
        #[arg(long, default_value_t = 0.1)]
        burnin: f64,
    },
    /// Tropical logistic regression.
    Logistic {
        #[command(subcommand)]
        action: LogisticAction,
    },
    /// Best-fit tropical triangle and 2-D plot coordinates.
    Pca(PcaArgs),
    /// Tropical kernel density scores, lowest (most outlying) first.
    Kde {
        input: String,
        /// Bandwidth multiplier on the nearest-neighbor distance.
        #[arg(long, default_value_t = 1.0)]
        bandwidth: f64,
        /// Candidate rows, each judged on its own against the input rows.
        #[arg(long)]
        candidates: Option<String>,
    },
    /// Conversions between equidistant trees and ultrametric vectors.
    Tree {
        #[command(subcommand)]
        action: TreeAction,
    },
    /// Synthetic labeled datasets (label in the last column).
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Two-row segment file for `segment` mode, generators for `polytope` mode.
    pub polytope: String,
    #[arg(long, value_enum, default_value_t = SampleMode::Polytope)]
    pub mode: SampleMode,
    /// Chain start; defaults to the projection of the coordinatewise mean.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Location of centered sampling.
    #[arg(long, allow_hyphen_values = true, requires = "sigma")]
    pub center: Option<String>,
    #[arg(long, requires = "center")]
    pub sigma: Option<f64>,
    /// Emitted samples per chain.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Transitions between emitted samples.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Discarded leading samples, as a fraction of `n`.
    #[arg(long, default_value_t = 0.1)]
    pub burnin: f64,
    /// Independent chains on separate streams, concatenated in order.
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
}

#[derive(Args, Debug)]
pub struct PcaArgs {
    pub input: String,
    #[arg(long, value_enum, default_value_t = PcaInit::Data)]
    pub init: PcaInit,
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Also save the triangle as a model file.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum LogisticAction {
    /// Fits the model and writes it as JSON.
    Train {
        input: String,
        /// 0-based column holding 0/1 labels; defaults to the last column.
        #[arg(long)]
        label_col: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        penalty: f64,
        /// Hold out every k-th row (index divisible by k) and report its AUC.
        #[arg(long)]
        holdout_every: Option<usize>,
    },
    /// Probability of class 1 for each row.
    Predict {
        input: String,
        #[arg(long)]
        model: PathBuf,
        /// Column to drop before predicting, if the file carries labels.
        #[arg(long)]
        label_col: Option<usize>,
    },
    /// ROC curve rows `fpr,tpr` followed by an `auc` line.
    Roc {
        input: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        label_col: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TreeAction {
    /// Newick trees to ultrametric vectors with a pair-label header.
    ToVector {
        input: String,
        /// Scale each vector so that its largest entry is 1.
        #[arg(long)]
        normalize: bool,
    },
    /// Ultrametric vectors to Newick, one tree per row.
    FromVector { input: String },
    /// Prints `ultrametric` or `not ultrametric` per row.
    Check { input: String },
}

#[derive(Subcommand, Debug)]
pub enum SynthKind {
    /// Gaussian clouds around the given centers.
    Clusters {
        /// Centers separated by ';', e.g. "0,0,0;0,10,0".
        #[arg(long, allow_hyphen_values = true)]
        centers: String,
        /// Points per center, e.g. "100,100".
        #[arg(long)]
        counts: String,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Two classes of ultrametric vectors around random trees.
    Trees {
        #[arg(long)]
        leaves: usize,
        #[arg(long)]
        counts: String,
        #[arg(long, default_value_t = 2.0)]
        separation: f64,
        #[arg(long, default_value_t = 0.3)]
        sigma: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraArg {
    Max,
    Min,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FwMethodArg {
    Lp,
    Grad,
    Reg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    Segment,
    Polytope,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcaInit {
    /// The first three rows.
    Data,
    /// Three random points of the data hull.
    Random,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.parallel.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))
        .and_then(|pool| pool.install(|| commands::run(&cli)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tropml: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
