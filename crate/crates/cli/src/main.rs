mod commands;
mod config;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use depmeter::Error;

/// Dependence measures, simulation sweeps and real-data analyses.
#[derive(Debug, Parser)]
#[command(name = "depmeter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one measure on a CSV file and print a JSON line.
    Measure(MeasureArgs),
    /// Run a simulation sweep and write sweep, monotonicity and cluster
    /// reports.
    Bench(BenchArgs),
    /// Run one of the real-data analyses.
    Real(RealArgs),
    /// Write one simulated sample of an experiment cell as CSV.
    Sample(SampleArgs),
    /// Print where to download the real datasets.
    Datasets,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root seed (default 20240).
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated measure names, e.g. `CE,Ktau,dCor`.
    #[arg(long, value_delimiter = ',')]
    measures: Vec<String>,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    measure: String,
    /// Columns of the first variable (indices or header names).
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Conditioning columns, required by conditional measures.
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Independence experiments 1-8.
    Indep,
    /// Conditional-independence experiments 9-10.
    Ci,
}

#[derive(Debug, Args)]
struct BenchArgs {
    family: Family,
    #[arg(long)]
    experiment: u32,
    /// Replicates per grid cell (default 10).
    #[arg(long)]
    seeds: Option<usize>,
    /// Sample size (default 800).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Record estimator failures instead of stopping at the first.
    #[arg(long)]
    allow_partial: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dataset {
    Heart,
    Wine,
    Air,
}

#[derive(Debug, Args)]
struct RealArgs {
    dataset: Dataset,
    /// Data file, or for `heart` a directory holding the four raw files.
    #[arg(long)]
    path: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    allow_partial: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    experiment: u32,
    /// Grid cell index, starting at 0.
    #[arg(long)]
    cell: usize,
    #[arg(long, default_value_t = config::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = depmeter::samplers::PAPER_N)]
    n: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numeric_degeneracy() {
        return 3;
    }
    match e {
        Error::Io(_) | Error::Schema(_) | Error::WindowMismatch(_) | Error::NonFinite { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure(a) => commands::measure(a),
        Command::Bench(a) => commands::bench(a),
        Command::Real(a) => commands::real(a),
        Command::Sample(a) => commands::sample(a),
        Command::Datasets => {
            println!("{}", depmeter::datasets::download_instructions());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("depmeter: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_classes() {
        assert_eq!(exit_code(&Error::Io("x".into())), 1);
        assert_eq!(exit_code(&Error::Schema("x".into())), 1);
        assert_eq!(exit_code(&Error::Capability("x".into())), 2);
        assert_eq!(exit_code(&Error::ParamRange("x".into())), 2);
        assert_eq!(exit_code(&Error::UnknownExperiment(12)), 2);
        assert_eq!(exit_code(&Error::SingularConditioning), 3);
        assert_eq!(exit_code(&Error::ConstantColumn { column: 0 }), 3);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
