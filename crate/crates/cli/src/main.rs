use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use biphase_cli::{render, CliError, Command, Format};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "biphase", version, about = "Phases of biphoton states under linear phase plates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Phases and related quantities for one state through the plate sequence
    Run(Options),
    /// One record per point of the configured sweep grid
    Sweep(Options),
    /// Eigenvalues and eigenvectors of the composed plate matrix
    Eigen(Options),
    /// Geodesic, horizontality and harmonic residuals of the configured curves
    Geodesic(Options),
    /// Geometric phase of the polygon through the listed states
    Vertex(Options),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct Options {
    /// JSON scenario file
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Suppress the summary line on standard error
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Cmd::Run(o) => (Command::Run, o),
        Cmd::Sweep(o) => (Command::Sweep, o),
        Cmd::Eigen(o) => (Command::Eigen, o),
        Cmd::Geodesic(o) => (Command::Geodesic, o),
        Cmd::Vertex(o) => (Command::Vertex, o),
    };
    let format = match opts.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    match execute(command, &opts, format) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("biphase: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command, opts: &Options, format: Format) -> Result<(), CliError> {
    let (text, records) = render(command, &opts.config, format)?;
    match &opts.out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
            if !opts.quiet {
                eprintln!("biphase: wrote {records} record(s) to {}", path.display());
            }
        }
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Config(format!("cannot write output: {e}")))?;
        }
    }
    Ok(())
}
