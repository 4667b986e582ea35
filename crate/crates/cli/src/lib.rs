//! Batch front end for the `biphase` library.
//!
//! Every subcommand reads one JSON config (see [`config::RawConfig`]) and
//! writes a JSON or CSV report. Exit status 2 signals a configuration or I/O
//! problem, 3 a quantity that is numerically undefined for the given input.

pub mod compute;
pub mod config;
pub mod error;
pub mod report;

use std::path::Path;

pub use config::Config;
pub use error::CliError;
pub use report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Sweep,
    Eigen,
    Geodesic,
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn report(command: Command, cfg: &Config) -> Result<Report, CliError> {
    match command {
        Command::Run => compute::run(cfg),
        Command::Sweep => compute::sweep(cfg),
        Command::Eigen => compute::eigen_report(cfg),
        Command::Geodesic => compute::geodesic_report(cfg),
        Command::Vertex => compute::vertex_report(cfg),
    }
}

/// Load the config, compute, and render in the requested format.
pub fn render(command: Command, config_path: &Path, format: Format) -> Result<(String, usize), CliError> {
    let cfg = Config::load(config_path)?;
    let report = report(command, &cfg)?;
    let records = report.table.rows.len();
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    Ok((text, records))
}
