//! `tors3`: verification of infinitesimal Torelli for the Z/3 (3,3) family.
//!
//! Exit codes: 0 success (for `verify`: injective), 1 negative verification
//! result, 2 usage or input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "tors3", version, about = "Exact infinitesimal Torelli checks for Z/3 quotients of (3,3) complete intersections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    /// JSON parameter file (normalized14 or general26 model).
    #[arg(long, value_name = "PATH", conflicts_with = "random")]
    pub params: Option<PathBuf>,
    /// Sample a point of the normalized family.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 9)]
    pub bound: i64,
    /// `rational` or `fp:P`.
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full pipeline at one point.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Also scan for singular points over these primes.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify many seeded samples and write CSV.
    Scan {
        #[arg(long, default_value_t = 100)]
        samples: u64,
        /// First seed; sample `k` uses `seed + k`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        bound: i64,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Census of the certificate monomial in the symbolic det L5.
    Certificate {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump L1..L5.
    Matrices {
        #[command(flatten)]
        source: Source,
        /// Matrices over the parameter polynomials instead of at a point.
        #[arg(long)]
        symbolic: bool,
        /// l1, l2, l3, l4, l5 or all.
        #[arg(long, default_value = "all")]
        emit: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimensions of the graded pieces.
    Dims {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The three free-action conditions.
    CheckAction {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for singular points over small prime fields.
    SmoothScan {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { source, primes, out } => commands::verify(&source, primes, out),
        Command::Scan {
            samples,
            seed,
            bound,
            field,
            out,
        } => commands::scan(samples, seed, bound, field, out),
        Command::Certificate { out } => commands::certificate(out),
        Command::Matrices {
            source,
            symbolic,
            emit,
            out,
        } => commands::matrices(&source, symbolic, &emit, out),
        Command::Dims { source, out } => commands::dims(&source, out),
        Command::CheckAction { source, out } => commands::check_action(&source, out),
        Command::SmoothScan {
            source,
            primes,
            out,
        } => commands::smooth(&source, primes, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
