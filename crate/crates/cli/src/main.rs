//! `critset`: defining and critical sets of (0,1)-matrices from the shell.
//!
//! Exit status is 0 when the checked claim holds, 1 when it is verified
//! false, and 2 on usage, input or guard errors.

mod commands;
mod io;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "critset", version, about = "Defining and critical sets of (0,1)-matrices with fixed margins")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for randomised modes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for parallel scans (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// More logging on standard error (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

/// A complete matrix and a subset of it, from files or a named fixture.
#[derive(Args, Debug, Clone)]
pub struct PairInput {
    /// Complete matrix (text or JSON); `-` reads standard input.
    #[arg(long, required_unless_present = "fixture")]
    pub matrix: Option<String>,

    /// Partial matrix inside it (text or JSON); a headerless text grid takes
    /// its margins from the matrix.
    #[arg(long, required_unless_present = "fixture")]
    pub set: Option<String>,

    /// Shipped example, e.g. `fig1`; supplies both matrix and set.
    #[arg(long, conflicts_with_all = ["matrix", "set"])]
    pub fixture: Option<String>,
}

/// A complete matrix from a file or a named fixture.
#[derive(Args, Debug, Clone)]
pub struct MatrixInput {
    /// Complete matrix (text or JSON); `-` reads standard input.
    #[arg(long, required_unless_present = "fixture")]
    pub matrix: Option<String>,

    /// Shipped example, e.g. `fig1`.
    #[arg(long, conflicts_with = "matrix")]
    pub fixture: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    X,
    Y,
    Mk,
    B,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a set has the matrix as its only completion.
    VerifyDefining(PairInput),
    /// Check that a set is defining and minimal.
    VerifyCritical {
        #[command(flatten)]
        input: PairInput,
        /// Check via a walk certificate and per-cell cycles instead of counting.
        #[arg(long)]
        certificates: bool,
    },
    /// Complete a partial matrix (its file needs a margin header).
    Complete {
        #[arg(long)]
        set: String,
        /// List up to this many completions instead of requiring a unique one.
        #[arg(long)]
        all: Option<u64>,
    },
    /// Count completions of a partial matrix.
    Count {
        #[arg(long)]
        set: String,
        /// Stop counting here.
        #[arg(long)]
        limit: Option<u64>,
        /// Abort after this many search nodes.
        #[arg(long)]
        node_cap: Option<u64>,
        /// Disable the pruning and propagation rules.
        #[arg(long)]
        plain: bool,
    },
    /// Shrink a defining set (default: the whole matrix) to a critical set.
    Minimize {
        #[command(flatten)]
        input: MatrixInput,
        /// Starting defining set; defaults to every cell.
        #[arg(long)]
        set: Option<String>,
        /// Try removals in a seeded random order instead of row-major.
        #[arg(long)]
        shuffle: bool,
    },
    /// Split the difference of two members into cycles.
    Decompose {
        #[command(flatten)]
        input: MatrixInput,
        /// The other member of the same class.
        #[arg(long)]
        other: String,
    },
    /// Find a cycle of the matrix meeting the set only in one cell.
    CycleThrough {
        #[command(flatten)]
        input: PairInput,
        #[arg(long)]
        row: usize,
        #[arg(long)]
        col: usize,
    },
    /// Build a member of a named family.
    Construct {
        family: Family,
        #[arg(long)]
        m: usize,
        /// Target size for `mk`.
        #[arg(long)]
        k: Option<usize>,
        /// Also print the family's certified critical set.
        #[arg(long)]
        with_critical: bool,
    },
    /// A certified critical set of every size from m² to 3m²-4m+2.
    Spectrum {
        #[arg(long)]
        m: usize,
        /// Re-verify every set (by counting for m ≤ 3, by certificates above).
        #[arg(long)]
        verify: bool,
    },
    /// Largest critical set of B_2m over run compositions.
    BAnalysis {
        #[arg(long)]
        m: usize,
        /// Also report the relaxed bound (s_L = 0, t_1 = 0 allowed).
        #[arg(long)]
        relaxed: bool,
    },
    /// Two disjoint critical sets of a member of Λ_2m^m.
    SupPair {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Exact scs, inf, lcs and sup of Λ_n^x.
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: usize,
        /// Scan one member per symmetry orbit (allows n up to 6).
        #[arg(long)]
        reduced: bool,
    },
    /// Find rearrangements and a walk whose induced set lies in (or equals) the set.
    CertifyWalk {
        #[command(flatten)]
        input: PairInput,
        /// Require the induced set to equal the set.
        #[arg(long)]
        exact: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).target(env_logger::Target::Stderr).init();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
