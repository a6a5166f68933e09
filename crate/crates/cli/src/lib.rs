//! Command-line front end: `analyze`, `classify` and `sweep`.

pub mod report;
pub mod sweep;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lorenz_core::lorenz_map::MapDescription;
use lorenz_core::numerics::{set_precision_cap, Scalar};
use lorenz_core::{AnalysisConfig, Error};

pub use report::{analyze, classify, AnalysisReport, ClassifyReport, Status};
pub use sweep::{run_sweep, SweepRow};

#[derive(Debug, Parser)]
#[command(name = "lorenz", version, about = "Exact analysis of expanding Lorenz maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for one map (JSON, or the sweep summary row with --format csv).
    Analyze {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, env = "LORENZ_FORMAT", value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// α-limit class of one point.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        config: ConfigArgs,
        /// Point to classify, as "p/q".
        #[arg(long, env = "LORENZ_X")]
        x: String,
    },
    /// One summary row per parameter value.
    ///
    /// CSV columns: parameter, kappa, tower_length, periodic_flags,
    /// trichotomy, terminal, status. Flags list levels as P (periodic) or
    /// C (non-periodic) separated by ';'. kappa is "undetermined" past the cap.
    Sweep {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        range: sweep::RangeArgs,
        #[arg(long, env = "LORENZ_FORMAT", value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Symmetric,
    Beta,
}

#[derive(Clone, Debug, Args)]
pub struct MapArgs {
    #[arg(long, env = "LORENZ_FAMILY", value_enum, conflicts_with = "map_file")]
    pub family: Option<Family>,
    /// Slope of the symmetric map.
    #[arg(long, env = "LORENZ_A")]
    pub a: Option<String>,
    #[arg(long, env = "LORENZ_BETA")]
    pub beta: Option<String>,
    #[arg(long, env = "LORENZ_ALPHA")]
    pub alpha: Option<String>,
    /// TOML map description.
    #[arg(long, env = "LORENZ_MAP_FILE")]
    pub map_file: Option<PathBuf>,
}

impl MapArgs {
    pub fn description(&self) -> Result<MapDescription, Error> {
        if let Some(path) = &self.map_file {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            return MapDescription::from_toml(&text);
        }
        let missing = |flag: &str| Error::Parse(format!("missing --{flag}"));
        match self.family {
            Some(Family::Symmetric) => Ok(MapDescription::symmetric(self.a.as_deref().ok_or_else(|| missing("a"))?)),
            Some(Family::Beta) => Ok(MapDescription::beta(
                self.beta.as_deref().ok_or_else(|| missing("beta"))?,
                self.alpha.as_deref().ok_or_else(|| missing("alpha"))?,
            )),
            None => Err(Error::Parse("give --family or --map-file".into())),
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct ConfigArgs {
    #[arg(long, env = "LORENZ_L_MAX", default_value_t = 64)]
    pub l_max: usize,
    #[arg(long, env = "LORENZ_LEVEL_CAP", default_value_t = 16)]
    pub level_cap: usize,
    /// Cap on hitting-index iterations and backward-chain steps.
    #[arg(long, env = "LORENZ_HIT_CAP", default_value_t = 10_000)]
    pub hit_cap: usize,
    #[arg(long, env = "LORENZ_PRECISION_BITS", default_value_t = 4096)]
    pub precision_bits: u32,
}

impl ConfigArgs {
    pub fn config(&self) -> AnalysisConfig {
        AnalysisConfig {
            l_max: self.l_max,
            level_cap: self.level_cap,
            hit_cap: self.hit_cap,
            period_cap: self.hit_cap,
            precision_bits: self.precision_bits,
            ..AnalysisConfig::default()
        }
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar, Error> {
    text.trim().parse()
}

fn emit_json<T: serde::Serialize>(value: &T) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

/// Parses arguments, runs the command, and maps the outcome to an exit code.
pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Analyze { map, config, format } => {
            let cfg = config.config();
            set_precision_cap(cfg.precision_bits);
            let report = analyze(map.description(), &cfg);
            let code = report.status.exit_code();
            let written = match format {
                Format::Json => emit_json(&report),
                Format::Csv => {
                    let row = SweepRow::from_report(report.map_parameter(), &report);
                    sweep::write_csv(io::stdout().lock(), &[row])
                }
            };
            written.map(|()| code)
        }
        Command::Classify { map, config, x } => {
            let cfg = config.config();
            set_precision_cap(cfg.precision_bits);
            let report = classify(map.description(), &x, &cfg);
            emit_json(&report).map(|()| report.status.exit_code())
        }
        Command::Sweep { map, config, range, format } => {
            let cfg = config.config();
            set_precision_cap(cfg.precision_bits);
            match run_sweep(&map, &range, &cfg) {
                Ok(rows) => match format {
                    Format::Csv => sweep::write_csv(io::stdout().lock(), &rows),
                    Format::Json => emit_json(&rows),
                }
                .map(|()| 0),
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(Status::from_error(&e).exit_code())
                }
            }
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
