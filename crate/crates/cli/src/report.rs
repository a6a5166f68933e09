use serde::Serialize;

use lorenz_core::limits::{depth_report, omega_decomposition_with, DepthTag, LevelOrbits, OmegaDecomposition};
use lorenz_core::lorenz_map::{validate_map, LorenzMap, MapDescription, MapFamily, ReturnTimes, ValidationReport};
use lorenz_core::numerics::{Interval, Scalar};
use lorenz_core::periods::{minimal_period, minimal_periodic_orbit, MinimalPeriodResult, PeriodicOrbit};
use lorenz_core::renorm::{
    minimal_renormalization_from, period_data, renorm_tower, trichotomy_from, Tower, TowerTerminal,
};
use lorenz_core::{AnalysisConfig, Error};

use crate::parse_scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    InvalidMap,
    PrecisionExhausted,
    CapExceeded,
    Error,
}

impl Status {
    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::InvalidMap(_) | Error::Parse(_) | Error::OutOfDomain => Status::InvalidMap,
            Error::PrecisionExhausted { .. } => Status::PrecisionExhausted,
            Error::CapExceeded { .. } | Error::BranchBudgetExceeded { .. } => Status::CapExceeded,
            _ => Status::Error,
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::InvalidMap => 2,
            Status::PrecisionExhausted => 3,
            Status::CapExceeded => 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub ell: usize,
    pub r: usize,
    /// Renormalization interval in the previous level's coordinates.
    pub u: Scalar,
    pub v: Scalar,
    /// Renormalization interval in original coordinates.
    pub interval: Interval,
    pub e_minus: Scalar,
    pub e_plus: Scalar,
    pub original_times: ReturnTimes,
    pub periodic: bool,
    /// Left and right slopes of the rescaled map when both branches are affine.
    pub inner_slopes: Option<[Scalar; 2]>,
    pub inner_min_slope: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub length: usize,
    pub levels: Vec<LevelReport>,
    pub terminal: TowerTerminal,
}

impl TowerReport {
    fn new(tower: &Tower) -> Result<Self, Error> {
        let levels = tower
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let inner = &l.step.inner_map;
                Ok(LevelReport {
                    level: i + 1,
                    ell: l.step.ell,
                    r: l.step.r,
                    u: l.step.u.clone(),
                    v: l.step.v.clone(),
                    interval: l.interval.clone(),
                    e_minus: l.e_minus.clone(),
                    e_plus: l.e_plus.clone(),
                    original_times: l.times,
                    periodic: l.step.periodic,
                    inner_slopes: inner.affine_slopes().map(|(a, b)| [a.clone(), b.clone()]),
                    inner_min_slope: inner.min_slope()?,
                })
            })
            .collect::<Result<_, Error>>()?;
        Ok(TowerReport { length: tower.len(), levels, terminal: tower.terminal.clone() })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub status: Status,
    pub error: Option<String>,
    pub map: Option<MapDescription>,
    pub validation: Option<ValidationReport>,
    pub period: Option<MinimalPeriodResult>,
    pub minimal_orbit: Option<PeriodicOrbit>,
    pub trichotomy: Option<String>,
    pub tower: Option<TowerReport>,
    pub depth_tags: Option<Vec<DepthTag>>,
    pub omega: Option<OmegaDecomposition>,
    pub config: AnalysisConfig,
}

impl AnalysisReport {
    /// The family parameter shown in summary rows.
    pub fn map_parameter(&self) -> String {
        match &self.map {
            Some(d) if d.family == MapFamily::Symmetric => d.a.clone().unwrap_or_default(),
            Some(d) if d.family == MapFamily::Beta => d.beta.clone().unwrap_or_default(),
            _ => String::new(),
        }
    }

    fn fail(&mut self, e: Error) {
        self.status = Status::from_error(&e);
        if let Error::InvalidMap(v) = &e {
            self.validation = Some(v.clone());
        }
        self.error = Some(e.to_string());
    }
}

/// Builds the map, reporting validation failures in the report itself.
fn build(desc: &MapDescription) -> Result<(LorenzMap, ValidationReport), Error> {
    let map = desc.build()?;
    Ok((map.clone(), validate_map(&map)))
}

/// validate, minimal period, orbit, trichotomy, tower, Ω decomposition.
pub fn analyze(desc: Result<MapDescription, Error>, cfg: &AnalysisConfig) -> AnalysisReport {
    let mut report = AnalysisReport {
        status: Status::Ok,
        error: None,
        map: None,
        validation: None,
        period: None,
        minimal_orbit: None,
        trichotomy: None,
        tower: None,
        depth_tags: None,
        omega: None,
        config: cfg.clone(),
    };
    if let Err(e) = fill(&mut report, desc, cfg) {
        report.fail(e);
    }
    report
}

fn fill(report: &mut AnalysisReport, desc: Result<MapDescription, Error>, cfg: &AnalysisConfig) -> Result<(), Error> {
    let desc = desc?;
    report.map = Some(desc.clone());
    let (map, validation) = build(&desc)?;
    report.validation = Some(validation);
    let period = minimal_period(&map, cfg.period_cap)?;
    report.period = Some(period.clone());
    if let Some(k) = period.kappa.filter(|&k| k > 1) {
        report.minimal_orbit = Some(minimal_periodic_orbit(&map, k, cfg.branch_budget)?);
    }
    let data = period_data(&map, cfg)?;
    let minimal = minimal_renormalization_from(&map, &data, cfg)?;
    if period.kappa.is_some() {
        report.trichotomy = Some(trichotomy_from(&data, &minimal)?.to_string());
    }
    let tower = renorm_tower(&map, cfg)?;
    report.tower = Some(TowerReport::new(&tower)?);
    report.depth_tags = Some(depth_report(&tower));
    let orbits = LevelOrbits::new(&map, &tower)?;
    report.omega = Some(omega_decomposition_with(&map, &tower, &orbits)?);
    match tower.terminal {
        TowerTerminal::PeriodCapReached { period_cap } => {
            report.status = Status::CapExceeded;
            report.error = Some(format!("minimal period undetermined within {period_cap} backward steps"));
        }
        TowerTerminal::LevelCapReached { level_cap } => {
            report.status = Status::CapExceeded;
            report.error = Some(format!("tower reached the level cap {level_cap}"));
        }
        _ => {}
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub status: Status,
    pub error: Option<String>,
    pub x: String,
    /// `E_i` or `I`.
    pub class: Option<String>,
    /// Component of the deepest orbit union containing `x`.
    pub witness: Option<Interval>,
    pub tower_length: Option<usize>,
}

pub fn classify(desc: Result<MapDescription, Error>, x: &str, cfg: &AnalysisConfig) -> ClassifyReport {
    let mut report = ClassifyReport {
        status: Status::Ok,
        error: None,
        x: x.to_string(),
        class: None,
        witness: None,
        tower_length: None,
    };
    let outcome = (|| -> Result<(), Error> {
        let point = parse_scalar(x)?;
        report.x = point.to_text();
        let map = desc?.build()?;
        if !map.domain().contains(&point)? {
            return Err(Error::OutOfDomain);
        }
        let tower = renorm_tower(&map, cfg)?;
        report.tower_length = Some(tower.len());
        let got = LevelOrbits::new(&map, &tower)?.classify(&point)?;
        report.class = Some(got.class.label());
        report.witness = Some(got.witness);
        Ok(())
    })();
    if let Err(e) = outcome {
        report.status = Status::from_error(&e);
        report.error = Some(e.to_string());
    }
    report
}
