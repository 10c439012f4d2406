use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hecke",
    version,
    about = "Check m+ - m- = h(-q) for primes q = 3 mod 4 and export the data behind it"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run both dimension counts for one prime and compare with h(-q)
    Verify {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify every prime q = 3 mod 4 in [min, max]
    Sweep {
        #[arg(long, default_value_t = 7)]
        min: u64,
        #[arg(long)]
        max: u64,
        /// Worker threads [default: available parallelism]
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        workers: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Character table of PSL2(F_q), exact when the conductor allows it
    Table {
        #[arg(long)]
        q: u64,
        /// Largest cyclotomic conductor for exact arithmetic; above it the table is numeric
        #[arg(long, default_value_t = hecke_core::cyclotomic::DEFAULT_CONDUCTOR_CEILING)]
        exact_ceiling: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Conjugacy classes of PSL2(F_q)
    Classes {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cusps of Gamma1(q) with widths and parameters
    Cusps {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalue multiplicities of the unipotent element in each irreducible
    Ptable {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Include per-prime elapsed time (breaks byte-for-byte reproducibility)
    #[arg(long)]
    pub timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}
