use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Supertrees by ultrametric constraint propagation.
///
/// Exit codes: 0 success or compatible, 1 incompatible, 2 parse or usage
/// error, 3 failed precondition.
#[derive(Parser, Debug)]
#[command(name = "umtree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Newick files; each may hold several `;`-terminated trees.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Treat polytomies as missing evidence (triples only).
    #[arg(long)]
    soft: bool,
    /// Side constraints file (`predates a b c d`, `bounds a b LO HI`).
    #[arg(long, value_name = "FILE")]
    constraints: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a supertree by propagation alone.
    Build {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build while skipping atoms that conflict with earlier ones.
    Greedy {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Does the atom hold in every supertree of the inputs?
    Necessity {
        #[command(flatten)]
        model: ModelArgs,
        /// `(a,b)c` or `(a,b,c)`.
        #[arg(long)]
        atom: String,
    },
    /// Print a minimal set of conflicting atoms.
    Explain {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Print the triples and fans of each input tree.
    Breakup {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        soft: bool,
    },
    /// Exit 0 iff the first tree displays every tree in the input files.
    Check {
        supertree: PathBuf,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// List distinct supertree topologies.
    Enumerate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Generate a compatible random forest.
    Gen {
        #[arg(long)]
        leaves: usize,
        #[arg(long, default_value_t = 3)]
        trees: usize,
        /// Probability of dropping each leaf from each tree.
        #[arg(long, default_value_t = 0.3)]
        prune: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Time builds over a ladder of sizes and print a JSON table.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [20, 40, 80])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trees: usize,
        #[arg(long, default_value_t = 3)]
        repeats: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("umtree: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
