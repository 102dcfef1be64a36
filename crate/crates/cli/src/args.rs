use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "unitgraph", version, about = "Exact matrix-ring Cayley graph toolkit over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write reports to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `--q` picks the default polynomial; `--p`, `--k` and `--poly` override.
#[derive(Debug, Clone, Default, Args)]
pub struct FieldArgs {
    /// Field order, a prime power up to 256.
    #[arg(long)]
    pub q: Option<u32>,
    /// Characteristic.
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree.
    #[arg(long)]
    pub k: Option<u32>,
    /// Defining polynomial, little-endian coefficients `c0,c1,...,ck`.
    #[arg(long)]
    pub poly: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Units,
    Sl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group orders |GL_n|, |SL_n| and the unit density.
    Counts {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Eigenvalues of a Cayley digraph on Mat_n(F_q), one per class.
    Spectrum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// `gl`, `sl` or `det:<alpha>`.
        #[arg(long, default_value = "gl")]
        connection: String,
        /// Also run the dense eigensolver and report the largest deviation.
        #[arg(long)]
        dense: bool,
    },
    /// Strong regularity by common-neighbour counting.
    Srg {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "gl")]
        connection: String,
    },
    /// Kloosterman sums K(delta) for every nonzero delta.
    Kloosterman {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// SL normal form of a matrix with its witnesses.
    NormalForm {
        #[command(flatten)]
        field: FieldArgs,
        /// Matrix literal `n;q;e0,e1,...` (row-major element codes).
        #[arg(long)]
        matrix: String,
    },
    /// Write a matrix as a sum of two units or of SL matrices.
    Decompose {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        matrix: String,
    },
    /// Connectivity and diameter by breadth-first search.
    Diameter {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "gl")]
        connection: String,
    },
    /// Look for M in X, N in Y with det(M - N) = alpha, or run seeded
    /// random trials when no sets are given.
    GapCheck {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        alpha: u16,
        /// File of matrix codes in Mat_2(F_q).
        #[arg(long = "X", requires = "y")]
        x: Option<PathBuf>,
        #[arg(long = "Y", requires = "x")]
        y: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = unitgraph::verify::SEED)]
        seed: u64,
    },
    /// The product-difference set (A - B)(C - D), or seeded random trials
    /// when no sets are given.
    Sumprod {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "A")]
        a: Option<PathBuf>,
        #[arg(long = "B", requires = "a")]
        b: Option<PathBuf>,
        #[arg(long = "C", requires = "a")]
        c: Option<PathBuf>,
        #[arg(long = "D", requires = "a")]
        d: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = unitgraph::verify::SEED)]
        seed: u64,
    },
    /// Run the acceptance checks, all of them or those at one size.
    Verify {
        #[arg(long, requires = "n")]
        q: Option<u32>,
        #[arg(long, requires = "q")]
        n: Option<usize>,
        /// Run a single criterion (1-11).
        #[arg(long, conflicts_with_all = ["q", "n"], value_parser = clap::value_parser!(u8).range(1..=11))]
        criterion: Option<u8>,
    },
}
