//! Command-line front end: config ingestion, dispatch and file emission.
//!
//! Exit codes: 0 ok, 1 config or I/O error, 2 non-physical parameters,
//! 3 strict verification failure.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::{
    cmd_figures, cmd_potential, cmd_spectrum, cmd_verify, cmd_wavefunction, curve_text, effective_potential,
    spectrum_lines, verification_report, Curve, Figure,
};
pub use config::{resolve_out, GridConfig, Overrides, RunConfig, DEFAULT_K, DEFAULT_LEVELS, OUT_ENV};
pub use output::{curve_csv, num, spectrum_csv, write_atomic, SPECTRUM_HEADER};

use crate::oracle::{Fault, Grid};
use crate::spectra::PolynomialReading;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("non-physical parameters: {0}")]
    NonPhysical(String),
    #[error("strict verification failed: {0}")]
    Strict(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::NonPhysical(_) => 2,
            CliError::Strict(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dirac-sphere", version, about = "Spectra, potentials and oracle checks for the Dirac operator on the sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Override the wave number k.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Number of levels.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Half-width of the grid.
    #[arg(long = "grid-L")]
    pub grid_l: Option<f64>,
    /// Interior grid points.
    #[arg(long = "grid-N")]
    pub grid_n: Option<usize>,
    /// Exit 3 when a forced verification claim fails.
    #[arg(long)]
    pub strict: bool,
    /// Output directory; overrides the config and DIRAC_SPHERE_OUT.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            k: self.k,
            levels: self.levels,
            grid_l: self.grid_l,
            grid_n: self.grid_n,
            strict: self.strict,
            out: self.out.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    #[value(name = "A_u")]
    AU,
    #[value(name = "Veff1")]
    Veff1,
    #[value(name = "Veff2")]
    Veff2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    Fig1,
    Fig2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    Ordinary,
    X1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    CorruptPartner,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy table `spectrum.csv`.
    Spectrum {
        /// JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Curve `<which>.csv` over the grid.
    Potential {
        /// JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        which: CurveArg,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenfunction samples `wavefunction.csv`.
    Wavefunction {
        /// JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Polynomial family for model 2.
        #[arg(long, value_enum, default_value = "x1")]
        reading: ReadingArg,
        #[command(flatten)]
        common: Common,
    },
    /// Consistency report `report.json`.
    Verify {
        /// JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Data behind the two figures, under `fig1/` or `fig2/`.
    Figures {
        #[arg(long, value_enum)]
        which: FigureArg,
        /// Only R, grid, levels and out are read from it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn load(path: &PathBuf, common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(path)?;
    cfg.apply(&common.overrides())?;
    Ok(cfg)
}

pub fn execute(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    match cli.command {
        Command::Spectrum { config, common } => cmd_spectrum(&load(&config, &common)?),
        Command::Potential { config, which, common } => {
            let curve = match which {
                CurveArg::AU => Curve::AU,
                CurveArg::Veff1 => Curve::Veff1,
                CurveArg::Veff2 => Curve::Veff2,
            };
            cmd_potential(&load(&config, &common)?, curve)
        }
        Command::Wavefunction { config, reading, common } => {
            let reading = match reading {
                ReadingArg::Ordinary => PolynomialReading::Ordinary,
                ReadingArg::X1 => PolynomialReading::ExceptionalX1,
            };
            cmd_wavefunction(&load(&config, &common)?, reading)
        }
        Command::Verify { config, inject_fault, common } => {
            let fault = inject_fault.map(|FaultArg::CorruptPartner| Fault::CorruptPartner);
            cmd_verify(&load(&config, &common)?, fault)
        }
        Command::Figures { which, config, common } => {
            let (grid, radius, levels, out) = match config {
                Some(path) => {
                    let cfg = load(&path, &common)?;
                    (cfg.grid(), cfg.radius, cfg.levels(), cfg.out_dir())
                }
                None => {
                    let grid = Grid::new(common.grid_l.unwrap_or(12.0), common.grid_n.unwrap_or(4001))
                        .map_err(|e| CliError::Config(format!("grid: {e}")))?;
                    (grid, 1.0, common.levels.unwrap_or(DEFAULT_LEVELS), resolve_out(common.out.as_deref()))
                }
            };
            if levels == 0 {
                return Err(CliError::Config("levels: must be at least 1".into()));
            }
            let fig = match which {
                FigureArg::Fig1 => Figure::Fig1,
                FigureArg::Fig2 => Figure::Fig2,
            };
            cmd_figures(fig, &out, grid, radius, levels)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
