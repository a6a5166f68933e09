use std::io::Write;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use lorenz_core::lorenz_map::MapDescription;
use lorenz_core::numerics::Scalar;
use lorenz_core::{AnalysisConfig, Error};

use crate::report::{analyze, AnalysisReport, Status};
use crate::{parse_scalar, Family, MapArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Param {
    A,
    Beta,
    Alpha,
}

#[derive(Clone, Debug, Args)]
pub struct RangeArgs {
    /// Swept parameter; defaults to `a` for symmetric and `beta` for beta maps.
    #[arg(long)]
    pub param: Option<Param>,
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    /// Grid spacing, as "p/q".
    #[arg(long, conflicts_with = "steps")]
    pub step: Option<String>,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    pub steps: Option<usize>,
}

/// One CSV row. Every scalar is written as "p/q".
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: String,
    pub kappa: String,
    pub tower_length: String,
    pub periodic_flags: String,
    pub trichotomy: String,
    pub terminal: String,
    pub status: Status,
}

impl SweepRow {
    pub fn from_report(parameter: String, report: &AnalysisReport) -> Self {
        let kappa = match &report.period {
            Some(p) => p.kappa.map_or("undetermined".to_string(), |k| k.to_string()),
            None => String::new(),
        };
        let (tower_length, periodic_flags, terminal) = match &report.tower {
            Some(t) => (
                t.length.to_string(),
                t.levels.iter().map(|l| if l.periodic { "P" } else { "C" }).collect::<Vec<_>>().join(";"),
                serde_json::to_value(&t.terminal)
                    .ok()
                    .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(str::to_string))
                    .unwrap_or_default(),
            ),
            None => Default::default(),
        };
        SweepRow {
            parameter,
            kappa,
            tower_length,
            periodic_flags,
            trichotomy: report.trichotomy.clone().unwrap_or_default(),
            terminal,
            status: report.status,
        }
    }
}

/// Exact grid `from, from + step, …` up to `to`.
pub fn grid(range: &RangeArgs) -> Result<Vec<Scalar>, Error> {
    let from = parse_scalar(&range.from)?;
    let to = parse_scalar(&range.to)?;
    if to.lt(&from)? {
        return Err(Error::Parse("--to is below --from".into()));
    }
    let step = match (&range.step, range.steps) {
        (Some(s), _) => parse_scalar(s)?,
        (None, Some(0)) => return Ok(Vec::new()),
        (None, Some(1)) => return Ok(vec![from]),
        (None, Some(n)) => &(&to - &from) / &Scalar::integer(n as i64 - 1),
        (None, None) => return Err(Error::Parse("give --step or --steps".into())),
    };
    if !Scalar::zero().lt(&step)? && from != to {
        return Err(Error::Parse("--step must be positive".into()));
    }
    let mut out = vec![from.clone()];
    let mut x = from;
    while out.len() < 1_000_000 {
        x = &x + &step;
        if to.lt(&x)? {
            break;
        }
        out.push(x.clone());
    }
    Ok(out)
}

fn description(map: &MapArgs, param: Param, value: &str) -> Result<MapDescription, Error> {
    let mut args = map.clone();
    match param {
        Param::A => args.a = Some(value.to_string()),
        Param::Beta => args.beta = Some(value.to_string()),
        Param::Alpha => args.alpha = Some(value.to_string()),
    }
    args.description()
}

/// Rows are computed in parallel and returned in grid order.
pub fn run_sweep(map: &MapArgs, range: &RangeArgs, cfg: &AnalysisConfig) -> Result<Vec<SweepRow>, Error> {
    if map.map_file.is_some() {
        return Err(Error::Parse("sweep takes --family, not --map-file".into()));
    }
    let param = match (range.param, map.family) {
        (Some(p), _) => p,
        (None, Some(Family::Beta)) => Param::Beta,
        (None, _) => Param::A,
    };
    let values: Vec<String> = grid(range)?.iter().map(Scalar::to_text).collect();
    Ok(values.par_iter().map(|v| SweepRow::from_report(v.clone(), &analyze(description(map, param, v), cfg))).collect())
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["parameter", "kappa", "tower_length", "periodic_flags", "trichotomy", "terminal", "status"])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range(from: &str, to: &str, step: Option<&str>, steps: Option<usize>) -> RangeArgs {
        RangeArgs { param: None, from: from.into(), to: to.into(), step: step.map(Into::into), steps }
    }

    #[test]
    fn grids_are_exact() {
        let g = grid(&range("1/10", "1/2", Some("1/10"), None)).unwrap();
        assert_eq!(g.iter().map(Scalar::to_text).collect::<Vec<_>>(), ["1/10", "1/5", "3/10", "2/5", "1/2"]);
        let g = grid(&range("1", "2", None, Some(3))).unwrap();
        assert_eq!(g.iter().map(Scalar::to_text).collect::<Vec<_>>(), ["1/1", "3/2", "2/1"]);
        assert!(grid(&range("2", "1", Some("1/10"), None)).is_err());
        assert!(grid(&range("1", "2", Some("0"), None)).is_err());
        assert!(grid(&range("1", "2", None, None)).is_err());
    }
}
