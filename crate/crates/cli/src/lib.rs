//! Convergence-study driver: argument parsing, the study command and its
//! CSV/SVG reports.

pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use holefem::{
    run_study, write_mesh, BoundaryData, CouplingMode, CutoffKind, Degree, ErrorRecord, StudyConfig, StudyError,
};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "holefem", version, about = "Small-hole corrected finite elements on the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep hole radii, mesh levels and degrees against the exact annulus solution.
    Study(StudyArgs),
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    /// Hole radii, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub delta: Vec<f64>,
    /// Mesh levels as `a:b` (inclusive) or a single level.
    #[arg(long, default_value = "2:6", value_parser = parse_levels)]
    pub levels: Levels,
    /// Polynomial degrees, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub degree: Vec<usize>,
    #[arg(long, default_value = "exp")]
    pub chi: CutoffKind,
    #[arg(long, default_value = "point")]
    pub mode: CouplingMode,
    /// Boundary data: `one`, `sin:N` or a `+` separated sum.
    #[arg(long, default_value = "one")]
    pub g: BoundaryData,
    /// Radius of the disk excluded from the error norms.
    #[arg(long, default_value_t = StudyConfig::DEFAULT_RHO)]
    pub rho: f64,
    /// Write the records here instead of standard output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Directory receiving `level<L>.mesh` for every level of the sweep.
    #[arg(long)]
    pub mesh_out: Option<PathBuf>,
    /// Write 0 for `runtime_ms`, making the CSV a function of the arguments.
    #[arg(long)]
    pub no_timing: bool,
}

/// Inclusive level range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Levels {
    pub first: usize,
    pub last: usize,
}

pub fn parse_levels(s: &str) -> Result<Levels, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid level `{t}`"));
    let (first, last) = match s.split_once(':') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let l = parse(s)?;
            (l, l)
        }
    };
    if first > last {
        return Err(format!("empty level range `{s}`"));
    }
    Ok(Levels { first, last })
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] StudyError),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("all {0} cells of the study failed")]
    AllCellsFailed(usize),
}

impl CliError {
    /// 1 for configuration and I/O problems, 2 when every cell failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::AllCellsFailed(_) => 2,
            _ => 1,
        }
    }
}

impl StudyArgs {
    pub fn config(&self) -> Result<StudyConfig, CliError> {
        let degrees = self
            .degree
            .iter()
            .map(|&d| Degree::try_from(d).map_err(|e| CliError::Argument(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let cfg = StudyConfig {
            deltas: self.delta.clone(),
            levels: (self.levels.first..=self.levels.last).collect(),
            degrees,
            cutoff: self.chi,
            mode: self.mode,
            g: self.g.clone(),
            rho: self.rho,
            record_timing: !self.no_timing,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write(path: &PathBuf, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.clone(), source })
}

/// Runs the study and writes the requested outputs. Returns the CSV bytes.
pub fn run(args: &StudyArgs) -> Result<(Vec<ErrorRecord>, Vec<u8>), CliError> {
    let cfg = args.config()?;
    if let Some(dir) = &args.mesh_out {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
        let mut mesh = holefem::generate_disk_mesh(0);
        for level in 0..=args.levels.last {
            if level >= args.levels.first {
                write(&dir.join(format!("level{level}.mesh")), &write_mesh(&mesh))?;
            }
            if level < args.levels.last {
                mesh = mesh.refine_uniform();
            }
        }
    }
    let records = run_study(&cfg)?;
    let failed = records.iter().filter(|r| !r.is_ok()).count();
    for r in records.iter().filter(|r| !r.is_ok()) {
        log::error!(
            "delta={:e} P{} h={:.4e}: {}",
            r.delta,
            r.degree.order(),
            r.h_avg,
            r.failure.as_deref().unwrap_or_default()
        );
    }
    let csv = report::emit_csv(&records);
    if let Some(path) = &args.csv {
        write(path, &csv)?;
    }
    if let Some(path) = &args.svg {
        write(path, &report::emit_svg_loglog(&records))?;
    }
    if failed == records.len() {
        return Err(CliError::AllCellsFailed(failed));
    }
    Ok((records, csv))
}
