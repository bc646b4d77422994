//! `rts`: deal, repair, verify and audit repairable threshold schemes.
//!
//! Exit status is 0 on success, 1 on a domain error and 2 on a usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "rts",
    version,
    about = "Repairable threshold secret sharing toolkit"
)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format; JSON by default, except `bounds` and `compare` print text.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct SchemeArgs {
    /// Reconstruction threshold (k2 for ramp schemes).
    #[arg(long)]
    pub k: usize,
    /// Privacy threshold; defaults to k - 1 (Shamir).
    #[arg(long)]
    pub k1: Option<usize>,
    /// Number of players.
    #[arg(long)]
    pub n: usize,
    /// Field modulus; defaults to the smallest prime above n.
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct SecretArgs {
    /// Secret as comma-separated decimal field elements.
    #[arg(long, value_delimiter = ',', conflicts_with = "random_secret")]
    pub secret: Option<Vec<u64>>,
    /// Derive the secret from the seed.
    #[arg(long)]
    pub random_secret: bool,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct DesignSource {
    /// Built-in design: sts9, sts9-n:N, sts:M, pg2:Q, fano, fano-complement, dualk:N.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Design file ("m n" header, one block per line).
    #[arg(long)]
    pub design: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Enrollment,
    Rts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    I,
    Ii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    LowestIndex,
    Spread,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Deal shares of a secret.
    Deal {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        secret: SecretArgs,
    },
    /// Recover a secret from the JSON written by `deal`.
    Reconstruct {
        /// Output of `deal`.
        #[arg(long)]
        input: PathBuf,
        /// Player ids (x values) to use; defaults to all shares in the file.
        #[arg(long, value_delimiter = ',')]
        players: Option<Vec<u64>>,
    },
    /// Repair one share with the enrollment protocol.
    RepairEnroll {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        secret: SecretArgs,
        /// Player whose share is repaired; defaults to n.
        #[arg(long)]
        target: Option<usize>,
        /// Helper ids; defaults to the first k players other than the target.
        #[arg(long, value_delimiter = ',')]
        helpers: Option<Vec<usize>>,
        /// Also write the transcript to this file.
        #[arg(long)]
        transcript_out: Option<PathBuf>,
    },
    /// Build an expanded scheme from a design, repair a share, check reconstruction.
    RtsDemo {
        #[command(flatten)]
        source: DesignSource,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: Option<u64>,
        #[command(flatten)]
        secret: SecretArgs,
        /// Player (0-based block index) to repair.
        #[arg(long, default_value_t = 0)]
        target: usize,
        #[arg(long, value_enum, default_value_t = Strategy::LowestIndex)]
        strategy: Strategy,
    },
    /// Print the distribution profile of a design.
    VerifyDesign {
        #[command(flatten)]
        source: DesignSource,
        #[arg(long)]
        k: usize,
        /// Bound on the number of block subsets scanned.
        #[arg(long)]
        guard: Option<u128>,
    },
    /// Write a built-in design in the design file format.
    GenDesign {
        #[arg(long)]
        builtin: String,
    },
    /// Exhaustive secrecy audit, or re-count a saved transcript.
    Audit {
        #[arg(long, value_enum, default_value_t = Protocol::Enrollment)]
        protocol: Protocol,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        k1: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Case::I)]
        case: Case,
        /// Explicit coalition; 1-based for enrollment, 0-based blocks for rts.
        #[arg(long, value_delimiter = ',')]
        coalition: Option<Vec<usize>>,
        /// Audit every coalition of every size up to the privacy threshold.
        #[arg(long)]
        sweep: bool,
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long)]
        guard: Option<u128>,
        /// Saved transcript to re-count instead of running an audit.
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Secret length in field elements, for transcript re-counting.
        #[arg(long, default_value_t = 1)]
        lambda: usize,
    },
    /// Information-rate bound for regenerating-code repairable schemes.
    Bounds {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
    },
    /// Compare built-in schemes against the regenerating-code bound.
    Compare,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
