//! `stratakit`: command-line access to dual graph strata, their posets, and
//! the Charney–Lee / twisted arrow category checks.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "stratakit", version, about = "Boundary strata of moduli of stable curves and their category calculus")]
pub struct Cli {
    /// Overrides every search and size budget (also read from STRATAKIT_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct StratumType {
    #[arg(long)]
    genus: u64,
    /// Comma-separated leg labels.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    legs: Vec<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the isomorphism classes of stable graphs of a given type.
    Enum {
        #[command(flatten)]
        ty: StratumType,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Include the covering relation.
        #[arg(long)]
        hasse: bool,
    },
    /// The specialisation poset, optionally with order complex homology.
    Poset {
        #[command(flatten)]
        ty: StratumType,
        #[arg(long)]
        homology: bool,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Contract a set of edges of a graph.
    Contract {
        #[arg(long = "in")]
        input: PathBuf,
        /// `all`, `loop`, `none`, or comma-separated half-edge ids.
        #[arg(long)]
        edges: String,
    },
    /// Glue one graph into each vertex of a template.
    Clutch {
        #[arg(long = "in")]
        input: PathBuf,
        /// One graph per template vertex, legs labelled by half-edge id.
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<PathBuf>,
    },
    /// Automorphism group of a graph.
    Aut {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decide isomorphism of two graphs.
    Iso { first: PathBuf, second: PathBuf },
    /// Charney–Lee categories.
    Clcat {
        #[command(subcommand)]
        action: ClcatAction,
    },
    /// Twisted arrow categories.
    Tw {
        #[command(subcommand)]
        action: TwAction,
    },
    /// Homology of the order complex of a poset file.
    Homology {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ClcatAction {
    Build {
        spec: PathBuf,
        /// Run the structural checks and include them.
        #[arg(long)]
        report: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum TwAction {
    Report {
        spec: PathBuf,
        /// Poset element name.
        #[arg(long)]
        theta: String,
        #[arg(long)]
        certificates: bool,
        /// Check limit decompositions on functors drawn from this seed.
        #[arg(long)]
        limits: Option<u64>,
        #[arg(long, default_value_t = 5)]
        functors: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(outcome) => ExitCode::from(outcome),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
