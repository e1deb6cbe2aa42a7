mod cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "treexp", version, about = "Audit explanation redundancy in decision trees")]
pub struct Cli {
    /// Cross-check every result against the brute-force oracle.
    #[arg(long, global = true)]
    pub verify: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Oracle cap on the number of feature-space points.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_points: u64,

    /// Oracle cap on the number of candidate literals.
    #[arg(long, global = true, default_value_t = 20)]
    pub max_universe: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Restricted,
    Unrestricted,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct InstanceSource {
    /// Instance as a JSON array of value names, in feature order.
    #[arg(short = 'i', long = "instance")]
    pub instance: Option<String>,

    /// CSV file of instances with a header row of feature names.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Target {
    /// Path identifier such as P2 or Q1.
    #[arg(long)]
    pub path: Option<String>,

    /// Instance as a JSON array of value names, in feature order.
    #[arg(short = 'i', long = "instance")]
    pub instance: Option<String>,

    /// CSV file of instances with a header row of feature names.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Predict the class of instances and show the path each follows.
    Classify {
        #[arg(short, long)]
        tree: PathBuf,
        #[command(flatten)]
        source: InstanceSource,
    },
    /// Decide which paths carry droppable literals.
    Redundancy {
        #[arg(short, long)]
        tree: PathBuf,
        #[arg(long, conflicts_with = "all")]
        path: Option<String>,
        /// Every path (the default).
        #[arg(long)]
        all: bool,
    },
    /// Extract one PI-explanation.
    Explain {
        #[arg(short, long)]
        tree: PathBuf,
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = ModeArg::Restricted)]
        mode: ModeArg,
    },
    /// List all PI-explanations.
    Enumerate {
        #[arg(short, long)]
        tree: PathBuf,
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = ModeArg::Restricted)]
        mode: ModeArg,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Redundancy statistics per tree.
    Stats {
        #[arg(short, long = "tree", num_args = 1..)]
        trees: Vec<PathBuf>,
    },
    /// Test whether a literal set is a PI-explanation.
    Check {
        #[arg(short, long)]
        tree: PathBuf,
        /// Literal set in the JSON form printed by `explain`.
        #[arg(short, long)]
        explanation: String,
        /// Class to explain; defaults to the class the literals force.
        #[arg(long)]
        class: Option<String>,
    },
    /// Compare fast algorithms with the oracle on seeded random trees.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trees: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cmd::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(cmd::exit_code(&e))
        }
    }
}
