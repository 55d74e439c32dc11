//! `submodkit`: batch checks of submodularity-based inequalities.
//!
//! Exit status 0 means every asserted inequality holds, 1 means at least one is
//! violated, 2 means the input or the options were rejected.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "submodkit",
    version,
    about = "Check submodularity-based inequalities on concrete inputs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural predicates of a set function
    CheckSetfn {
        #[command(flatten)]
        common: Common,
        /// Also compute the averaged sequence t_k (needs f(∅) = 0)
        #[arg(long)]
        sequences: bool,
    },
    /// Averaged subset sequences of a set function or the information sequences of a PMF
    Sequences(Common),
    /// Generalized Shearer inequality and uncrossing of the cover family
    Shearer(Common),
    /// Han's inequality and its generalization
    Han(Common),
    /// Projection bound for an integer point set
    Projections(Common),
    /// Edge counts and bounds for the confusion graph of a code set
    Hypercube(Common),
    /// Average influence of d-subsets of coordinates on a code set
    Influence(Common),
    /// Every analysis applicable to the input, as one document
    Report(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Input file (set function, PMF, point set or code set)
    pub input: PathBuf,
    /// Graph radius
    #[arg(long)]
    pub tau: Option<usize>,
    /// Hamming distance, or cover multiplicity for Shearer checks
    #[arg(long)]
    pub d: Option<usize>,
    /// Subset size
    #[arg(long)]
    pub k: Option<usize>,
    /// Power in the generalized Han inequality
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Exponent scale for the exponential information sequences
    #[arg(long)]
    pub r: Option<f64>,
    /// Transform g for t_k: identity, power:<a>, exp2:<c>, negexp2:<c>, affine:<s>,<b>
    #[arg(long)]
    pub g: Option<String>,
    /// Relative tolerance for every inequality
    #[arg(long, default_value_t = submodkit::DEFAULT_TOL)]
    pub tol: f64,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
    /// Seed for any randomly generated data
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cross-check against the brute-force oracles
    #[arg(long)]
    pub oracle: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, outcome) = match cli.command {
        Command::CheckSetfn { common, sequences } => {
            let out = commands::check_setfn(&common, sequences);
            (common, out)
        }
        Command::Sequences(c) => (c.clone(), commands::sequences(&c)),
        Command::Shearer(c) => (c.clone(), commands::shearer(&c)),
        Command::Han(c) => (c.clone(), commands::han(&c)),
        Command::Projections(c) => (c.clone(), commands::projections(&c)),
        Command::Hypercube(c) => (c.clone(), commands::hypercube(&c)),
        Command::Influence(c) => (c.clone(), commands::influence(&c)),
        Command::Report(c) => (c.clone(), commands::report(&c)),
    };
    match outcome {
        Ok(report) => {
            let (text, ok) = report.finish(common.json);
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
