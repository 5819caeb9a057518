//! `epw`: generate, convert and check Lagrangian and GM data from the shell.
//!
//! Every command prints a plain-text summary on stdout. JSON results go to
//! `--out` when given and otherwise follow the summary on stdout. Exit status
//! is 0 on success, 1 when a check fails and 2 on invalid input; in the
//! nonzero cases a one-line JSON diagnostic is written to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "epw", version, about = "Lagrangian subspaces of Λ³V₆, GM data, EPW sextics and lattice tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Io {
    /// Input JSON file.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Graph Lagrangian of a seeded random symmetric integer matrix.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Entries are drawn from [−height, height].
        #[arg(long, default_value_t = 9)]
        height: i64,
        #[command(flatten)]
        io: Io,
    },
    /// Scan P(A)(F_p) for decomposable trivectors (per-prime heuristic).
    Check {
        /// Comma separated; defaults to 2,3 for data over Q.
        #[arg(long, value_delimiter = ',')]
        prime: Option<Vec<u64>>,
        #[arg(long, default_value_t = epw_core::projective::DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        io: Io,
    },
    /// GM data set of a Lagrangian and a hyperplane.
    Gm {
        /// Covector cutting out V₅, comma separated; defaults to e₀∨.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<String>>,
        #[command(flatten)]
        io: Io,
    },
    /// Lagrangian → GM data → Lagrangian, compared exactly.
    Roundtrip {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<String>>,
        #[command(flatten)]
        io: Io,
    },
    /// Equation of the EPW sextic on the chart v_c = 1.
    Sextic {
        #[arg(long, default_value_t = 0)]
        chart: usize,
        #[command(flatten)]
        io: Io,
    },
    /// det 𝐪(v) / λ^{n−1} compared with the EPW sextic.
    Dis {
        #[command(flatten)]
        io: Io,
    },
    /// EPW multiplicity at every point of P⁵(F_p), by two independent routes.
    Scan {
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = epw_core::projective::DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        io: Io,
    },
    /// The dual Lagrangian A^⊥ ⊆ Λ³V₆∨.
    Dual {
        #[command(flatten)]
        io: Io,
    },
    /// The locus Σ₁ of a GM data set.
    Sigma1 {
        #[command(flatten)]
        io: Io,
    },
    /// Lattice and Hodge-number tables.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
        #[arg(long, value_name = "FILE", global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Clone)]
enum LatticeCommand {
    /// Determinant of a Gram matrix given as JSON, e.g. '[[2,2,0],[2,4,1],[0,1,3]]'.
    Disc { gram: String },
    /// Signature (positive, negative, zero) of a Gram matrix.
    Signature { gram: String },
    /// The lattice E₈²⊕U²⊕⟨2⟩².
    Lambda,
    /// Number of components of 𝒟_d.
    Dd { d: i64 },
    /// Whether d is K3-associated.
    K3 { d: i64 },
    /// Hodge diamond of an ordinary GM variety of dimension n.
    Hodge { n: usize },
    /// Dimension of the moduli space of GM varieties of dimension n.
    Moduli { n: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    commands::finish(commands::run(cli.command))
}
