use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::Failure;

/// Real matrix representations and spectra of PT-symmetric Hamiltonians.
#[derive(Debug, Parser)]
#[command(name = "ptreal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the complex oscillator-basis matrix of H = p² + V(x).
    Build(BuildArgs),
    /// Transform an A-symmetric matrix to a real matrix.
    Realify(RealifyArgs),
    /// Compute and classify the spectrum.
    Spectrum(SpectrumArgs),
    /// Track the lowest levels across truncation sizes (CSV).
    Sweep(SweepArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long, value_name = "PATH")]
    potential: PathBuf,
    #[arg(long = "n", value_name = "INT")]
    n_basis: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Either a potential (built at `--n`) or a stored matrix.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InputSource {
    #[arg(long, value_name = "PATH")]
    potential: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatrixInput {
    #[command(flatten)]
    source: InputSource,
    /// Truncation size; required with --potential.
    #[arg(long = "n", value_name = "INT")]
    n_basis: Option<usize>,
    /// Custom antiunitary JSON; defaults to PT in the oscillator basis.
    #[arg(long, value_name = "PATH")]
    antiunitary: Option<PathBuf>,
    #[arg(long, value_enum)]
    recipe: Option<RecipeName>,
    /// Porter coefficient as "RE,IM".
    #[arg(long, value_name = "RE,IM", default_value = "0.5,0.5")]
    porter_a: String,
    #[arg(long, value_name = "FLOAT", default_value_t = 1e-10)]
    tol_reality: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum RecipeName {
    PhaseUnitary,
    ProjectorPhase,
    PhasePower,
    Porter,
    Bender,
}

#[derive(Debug, Args)]
struct RealifyArgs {
    #[command(flatten)]
    input: MatrixInput,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    input: MatrixInput,
    #[arg(long, value_name = "FLOAT", default_value_t = 1e-8)]
    tol_classify: f64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_name = "PATH")]
    potential: PathBuf,
    #[arg(long, value_name = "CSV-INTS", value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, value_name = "INT", default_value_t = 1)]
    m_track: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Run a single invariant group.
    #[arg(long, value_name = "NAME")]
    group: Option<String>,
    /// Test hook: run the suite against a deliberately broken component.
    #[arg(long, hide = true, value_name = "FAULT")]
    inject_fault: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Build(args) => commands::build(args),
        Command::Realify(args) => commands::realify(args),
        Command::Spectrum(args) => commands::spectrum(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Verify(args) => commands::verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
