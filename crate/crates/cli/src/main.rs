mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Failure, Outcome};

/// Exact solvers for balanced fractional bin packing.
///
/// Exit status: 0 success or feasible, 1 infeasible or no witness,
/// 2 input error, 3 instance too large for an exhaustive search.
#[derive(Debug, Parser)]
#[command(name = "balpack", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-stage plan on ⌈S/C⌉ bins.
    SolveBmbp {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive split-bounded decision search.
    SolveExact {
        #[arg(short, long)]
        input: PathBuf,
        /// Defaults to the instance's `bins`.
        #[arg(long)]
        bins: Option<usize>,
        /// Defaults to the instance's `split_bound`.
        #[arg(long)]
        split: Option<usize>,
        #[arg(long)]
        no_symmetry: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Checks a plan or witness against an instance.
    Verify {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        solution: PathBuf,
        /// Stage limit for plans.
        #[arg(long, default_value_t = 2)]
        stages: usize,
        /// Split bound for witnesses; defaults to the instance's, else the bin count.
        #[arg(long)]
        split: Option<usize>,
    },
    /// Builds a hard instance from a source multiset.
    Reduce {
        #[arg(long, value_enum)]
        kind: SourceKind,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reads a certificate back out of a witness for a reduced instance.
    Extract {
        #[arg(long, value_enum)]
        kind: SourceKind,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        solution: PathBuf,
    },
    /// Writes an LP-format model.
    ExportMip {
        #[arg(long, value_enum)]
        kind: MipKind,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long)]
        split: Option<usize>,
        #[arg(long)]
        stages: Option<usize>,
        /// Adds y_j >= y_{j+1} rows.
        #[arg(long)]
        symmetry_breaking: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brute-force oracles, or an oracle-vs-solver sweep.
    Oracle {
        #[arg(long, value_enum)]
        kind: OracleKind,
        /// Set file (partition, subset-third) or instance file (binpacking).
        #[arg(short, long, required_unless_present = "sweep")]
        input: Option<PathBuf>,
        /// Bin count for binpacking; defaults to the instance's.
        #[arg(long)]
        bins: Option<usize>,
        /// Compare the oracle with the exact solver on every reduced
        /// multiset up to the given size limits.
        #[arg(long, conflicts_with = "input")]
        sweep: bool,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        max_size: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Times the two-stage solver on a seeded random instance.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smallest possible size.
        #[arg(long, default_value_t = 1)]
        base: u64,
        #[arg(long, default_value_t = 1000)]
        capacity: u64,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Also write the generated instance here.
        #[arg(long)]
        emit_instance: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Bmbp,
    Kbfbp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SourceKind {
    Partition,
    SubsetThird,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MipKind {
    ClassicBp,
    Bfbp,
    Kbfbp,
    Bmbp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleKind {
    Partition,
    SubsetThird,
    Binpacking,
}

fn dispatch(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::SolveBmbp { input, output } => commands::solve_bmbp(&input, output.as_deref()),
        Command::SolveExact { input, bins, split, no_symmetry, output } => {
            commands::solve_exact(&input, bins, split, !no_symmetry, output.as_deref())
        }
        Command::Verify { model, input, solution, stages, split } => match model {
            Model::Bmbp => commands::verify_bmbp(&input, &solution, stages),
            Model::Kbfbp => commands::verify_kbfbp(&input, &solution, split),
        },
        Command::Reduce { kind, input, output } => commands::reduce(kind, &input, output.as_deref()),
        Command::Extract { kind, input, solution } => commands::extract(kind, &input, &solution),
        Command::ExportMip { kind, input, bins, split, stages, symmetry_breaking, output } => {
            let params = commands::MipParams { bins, split, stages, symmetry_breaking };
            commands::export_mip(kind, &input, params, output.as_deref())
        }
        Command::Oracle { kind, input, bins, sweep, max_n, max_size, jobs } => {
            if sweep {
                commands::sweep(kind, max_n, max_size, jobs)
            } else {
                let input = input.expect("clap requires --input without --sweep");
                commands::oracle(kind, &input, bins)
            }
        }
        Command::Bench { n, seed, base, capacity, repeat, emit_instance } => {
            commands::bench(n, seed, base, capacity, repeat, emit_instance.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Infeasible(why)) => {
            eprintln!("balpack: {why}");
            ExitCode::from(1)
        }
        Err(failure) => {
            eprintln!("balpack: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
