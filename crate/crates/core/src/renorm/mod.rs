//! Renormalization: the validity check for a pair of return times, the
//! periodic fast path, the minimal search, towers, and the trichotomy.

mod tower;

use std::fmt;

use serde::Serialize;

pub use tower::{renorm_tower, Chart, Tower, TowerLevel, TowerTerminal};

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::interval_dynamics::hitting_index;
use crate::lorenz_map::{Branch, LorenzMap, ReturnTimes, SidedPoint};
use crate::numerics::{Interval, Scalar};
use crate::periods::{
    fixed_point_left_of_c, fixed_point_right_of_c, locate_minimal_orbit, minimal_period, orbit_class,
    MinimalPeriodResult, PeriodicOrbit,
};

/// One renormalization `(f^ℓ, f^r)` on `[u, v]`.
#[derive(Clone, Debug, Serialize)]
pub struct RenormStep {
    pub ell: usize,
    pub r: usize,
    pub u: Scalar,
    pub v: Scalar,
    pub e_minus: Scalar,
    pub e_plus: Scalar,
    pub periodic: bool,
    /// Itineraries of `e₋` under `f^ℓ` and `e₊` under `f^r`.
    pub e_minus_word: Vec<Branch>,
    pub e_plus_word: Vec<Branch>,
    pub inner_map: LorenzMap,
}

impl RenormStep {
    pub fn interval(&self) -> Interval {
        Interval { lo: self.u.clone(), hi: self.v.clone(), lo_closed: true, hi_closed: true }
    }

    pub fn times(&self) -> ReturnTimes {
        ReturnTimes::new(self.ell, self.r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum InvalidReason {
    ReturnTimesTooSmall,
    NotStraddling,
    FullInterval,
    /// `f^n` of the left (or right) half hits `c` before the return time.
    HitsCriticalPoint {
        branch: Branch,
        n: usize,
    },
    NotSelfMapping {
        branch: Branch,
    },
    NoRepellingPoint {
        branch: Branch,
    },
    RepellingPointMisplaced {
        branch: Branch,
    },
    InnerMapInvalid {
        detail: String,
    },
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::ReturnTimesTooSmall => write!(f, "return times must exceed 1"),
            InvalidReason::NotStraddling => write!(f, "[u, v] does not straddle c"),
            InvalidReason::FullInterval => write!(f, "[u, v] is the whole domain"),
            InvalidReason::HitsCriticalPoint { branch, n } => {
                write!(f, "{branch} half reaches c after {n} steps")
            }
            InvalidReason::NotSelfMapping { branch } => write!(f, "{branch} return leaves [u, v]"),
            InvalidReason::NoRepellingPoint { branch } => write!(f, "no {branch} boundary fixed point"),
            InvalidReason::RepellingPointMisplaced { branch } => {
                write!(f, "{branch} boundary fixed point is misplaced")
            }
            InvalidReason::InnerMapInvalid { detail } => write!(f, "inner map invalid: {detail}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RenormCheck {
    Valid(Box<RenormStep>),
    Invalid(InvalidReason),
}

impl RenormCheck {
    pub fn valid(self) -> Option<RenormStep> {
        match self {
            RenormCheck::Valid(step) => Some(*step),
            RenormCheck::Invalid(_) => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinimalRenorm {
    Found(Box<RenormStep>),
    /// `κ = 1`: a fixed point exists.
    Prime,
    PrimeUpToBound {
        l_max: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trichotomy {
    Prime,
    PeriodicMinimalRenorm,
    CantorMinimalRenorm,
    /// No renormalization with return times up to the bound: prime up to it.
    #[serde(rename = "prime-up-to-bound")]
    Unknown {
        l_max: usize,
    },
}

impl fmt::Display for Trichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trichotomy::Prime => f.write_str("prime"),
            Trichotomy::PeriodicMinimalRenorm => f.write_str("periodic-minimal-renorm"),
            Trichotomy::CantorMinimalRenorm => f.write_str("cantor-minimal-renorm"),
            Trichotomy::Unknown { .. } => f.write_str("prime-up-to-bound"),
        }
    }
}

/// Checks whether `(f^ℓ, f^r)` on `[f^r(c+), f^ℓ(c-)]` is a renormalization.
pub fn is_valid_renormalization(map: &LorenzMap, ell: usize, r: usize, cfg: &AnalysisConfig) -> Result<RenormCheck> {
    use RenormCheck::Invalid;
    if ell < 2 || r < 2 {
        return Ok(Invalid(InvalidReason::ReturnTimesTooSmall));
    }
    let c = map.c();
    let u = map.iterate(&SidedPoint::plus(c.clone()), r)?.x;
    let v = map.iterate(&SidedPoint::minus(c.clone()), ell)?.x;
    if !(u.lt(c)? && c.lt(&v)?) {
        return Ok(Invalid(InvalidReason::NotStraddling));
    }
    if u.eq_certified(map.a())? && v.eq_certified(map.b())? {
        return Ok(Invalid(InvalidReason::FullInterval));
    }
    for (branch, half, time) in [
        (Branch::Left, Interval::open(u.clone(), c.clone())?, ell),
        (Branch::Right, Interval::open(c.clone(), v.clone())?, r),
    ] {
        match hitting_index(map, &half, time - 1) {
            Ok(hit) => return Ok(Invalid(InvalidReason::HitsCriticalPoint { branch, n: hit.n })),
            Err(Error::CapExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if map.iterate(&SidedPoint::plus(u.clone()), ell)?.x.lt(&u)? {
        return Ok(Invalid(InvalidReason::NotSelfMapping { branch: Branch::Left }));
    }
    if v.lt(&map.iterate(&SidedPoint::minus(v.clone()), r)?.x)? {
        return Ok(Invalid(InvalidReason::NotSelfMapping { branch: Branch::Right }));
    }
    let inside = |x: &Scalar| -> Result<bool> { Ok(u.lt(x)? && x.lt(&v)?) };

    let Some((e_minus, seg_minus)) = fixed_point_left_of_c(map, ell, cfg.branch_budget)? else {
        return Ok(Invalid(InvalidReason::NoRepellingPoint { branch: Branch::Left }));
    };
    if !e_minus.x.le(&u)? {
        return Ok(Invalid(InvalidReason::RepellingPointMisplaced { branch: Branch::Left }));
    }
    for p in map.orbit(&e_minus, ell - 1)? {
        if inside(&p.x)? {
            return Ok(Invalid(InvalidReason::RepellingPointMisplaced { branch: Branch::Left }));
        }
    }
    let Some((e_plus, seg_plus)) = fixed_point_right_of_c(map, r, cfg.branch_budget)? else {
        return Ok(Invalid(InvalidReason::NoRepellingPoint { branch: Branch::Right }));
    };
    if !v.le(&e_plus.x)? {
        return Ok(Invalid(InvalidReason::RepellingPointMisplaced { branch: Branch::Right }));
    }
    for p in map.orbit(&e_plus, r - 1)? {
        if inside(&p.x)? {
            return Ok(Invalid(InvalidReason::RepellingPointMisplaced { branch: Branch::Right }));
        }
    }
    let periodic = orbit_class(&seg_minus.word) == orbit_class(&seg_plus.word);
    let j = Interval::closed(u.clone(), v.clone())?;
    let inner_map = match map.rescale_to_unit(&j, ReturnTimes::new(ell, r)) {
        Ok(g) => g,
        Err(Error::InvalidMap(report)) => {
            return Ok(Invalid(InvalidReason::InnerMapInvalid { detail: report.to_string() }))
        }
        Err(Error::Discontinuous { step }) => {
            return Ok(Invalid(InvalidReason::InnerMapInvalid { detail: format!("discontinuous at step {step}") }))
        }
        Err(e) => return Err(e),
    };
    Ok(RenormCheck::Valid(Box::new(RenormStep {
        ell,
        r,
        u,
        v,
        e_minus: e_minus.x,
        e_plus: e_plus.x,
        periodic,
        e_minus_word: seg_minus.word,
        e_plus_word: seg_plus.word,
        inner_map,
    })))
}

/// Whether `[f^κ(c+), f^κ(c-)] ⊆ [P_L, P_R]`, in which case the periodic
/// renormalization with `ℓ = r = κ` is returned.
pub fn periodic_renorm_check(
    map: &LorenzMap,
    orbit: &PeriodicOrbit,
    cfg: &AnalysisConfig,
) -> Result<Option<RenormStep>> {
    let kappa = orbit.period;
    let c = map.c();
    let u = map.iterate(&SidedPoint::plus(c.clone()), kappa)?.x;
    let v = map.iterate(&SidedPoint::minus(c.clone()), kappa)?.x;
    if !(orbit.p_left.x.le(&u)? && v.le(&orbit.p_right.x)?) {
        return Ok(None);
    }
    match is_valid_renormalization(map, kappa, kappa, cfg)? {
        RenormCheck::Valid(step) => {
            if !(step.e_minus.eq_certified(&orbit.p_left.x)? && step.e_plus.eq_certified(&orbit.p_right.x)?) {
                return Err(Error::Inconsistent("periodic renormalization endpoints differ from P_L, P_R".into()));
            }
            Ok(Some(*step))
        }
        RenormCheck::Invalid(reason) => {
            Err(Error::Inconsistent(format!("inclusion holds but the (κ, κ) pair is invalid: {reason}")))
        }
    }
}

/// Minimal period, orbit, and the periodic check, computed once and shared.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodData {
    pub period: MinimalPeriodResult,
    pub orbit: Option<PeriodicOrbit>,
    pub inclusion_holds: Option<bool>,
    #[serde(skip)]
    periodic_step: Option<RenormStep>,
}

pub fn period_data(map: &LorenzMap, cfg: &AnalysisConfig) -> Result<PeriodData> {
    let period = minimal_period(map, cfg.period_cap)?;
    let (orbit, inclusion_holds, periodic_step) = match period.kappa {
        Some(k) if k > 1 => {
            let orbit = locate_minimal_orbit(map, k, cfg.branch_budget)?;
            let step = periodic_renorm_check(map, &orbit, cfg)?;
            (Some(orbit), Some(step.is_some()), step)
        }
        _ => (None, None, None),
    };
    Ok(PeriodData { period, orbit, inclusion_holds, periodic_step })
}

/// Pairs `(ℓ, r)` with `1 < ℓ, r ≤ l_max`, by `ℓ + r` then `ℓ`.
fn search_order(l_max: usize) -> impl Iterator<Item = (usize, usize)> {
    (4..=2 * l_max).flat_map(move |s| {
        let lo = 2.max(s.saturating_sub(l_max));
        let hi = l_max.min(s - 2);
        (lo..=hi).map(move |ell| (ell, s - ell))
    })
}

/// Exhaustive search in increasing `ℓ + r`; the first valid pair is the
/// coordinatewise-minimal one.
pub fn search_renormalization(map: &LorenzMap, cfg: &AnalysisConfig) -> Result<Option<RenormStep>> {
    let l_max = cfg.l_max;
    if l_max < 2 {
        return Ok(None);
    }
    let c = map.c();
    // u_r = f^r(c+) and v_ℓ = f^ℓ(c-), with the hitting index of the halves.
    let mut u = vec![None; l_max + 1];
    let mut v = vec![None; l_max + 1];
    let mut cur_plus = SidedPoint::plus(c.clone());
    let mut cur_minus = SidedPoint::minus(c.clone());
    for n in 1..=l_max {
        cur_plus = map.step(&cur_plus)?;
        cur_minus = map.step(&cur_minus)?;
        if n < 2 {
            continue;
        }
        if cur_plus.x.lt(c)? {
            let n_half = half_hitting(map, Interval::open(cur_plus.x.clone(), c.clone())?, l_max)?;
            u[n] = Some(n_half);
        }
        if c.lt(&cur_minus.x)? {
            let n_half = half_hitting(map, Interval::open(c.clone(), cur_minus.x.clone())?, l_max)?;
            v[n] = Some(n_half);
        }
    }
    for (ell, r) in search_order(l_max) {
        let (Some(n_left), Some(n_right)) = (u[r], v[ell]) else { continue };
        if n_left < ell || n_right < r {
            continue;
        }
        if let RenormCheck::Valid(step) = is_valid_renormalization(map, ell, r, cfg)? {
            return Ok(Some(*step));
        }
    }
    Ok(None)
}

/// Hitting index of an interval, saturated at `cap + 1`.
fn half_hitting(map: &LorenzMap, half: Interval, cap: usize) -> Result<usize> {
    match hitting_index(map, &half, cap) {
        Ok(h) => Ok(h.n),
        Err(Error::CapExceeded { .. }) => Ok(cap + 1),
        Err(e) => Err(e),
    }
}

pub fn minimal_renormalization(map: &LorenzMap, cfg: &AnalysisConfig) -> Result<MinimalRenorm> {
    minimal_renormalization_from(map, &period_data(map, cfg)?, cfg)
}

pub fn minimal_renormalization_from(map: &LorenzMap, data: &PeriodData, cfg: &AnalysisConfig) -> Result<MinimalRenorm> {
    if data.period.kappa == Some(1) {
        return Ok(MinimalRenorm::Prime);
    }
    if let Some(step) = &data.periodic_step {
        return Ok(MinimalRenorm::Found(Box::new(step.clone())));
    }
    Ok(match search_renormalization(map, cfg)? {
        Some(step) => MinimalRenorm::Found(Box::new(step)),
        None => MinimalRenorm::PrimeUpToBound { l_max: cfg.l_max },
    })
}

pub fn classify_trichotomy(map: &LorenzMap, cfg: &AnalysisConfig) -> Result<Trichotomy> {
    let data = period_data(map, cfg)?;
    let minimal = minimal_renormalization_from(map, &data, cfg)?;
    trichotomy_from(&data, &minimal)
}

pub fn trichotomy_from(data: &PeriodData, minimal: &MinimalRenorm) -> Result<Trichotomy> {
    Ok(match (minimal, data.inclusion_holds) {
        (MinimalRenorm::Prime, _) => Trichotomy::Prime,
        (MinimalRenorm::Found(_), Some(true)) => Trichotomy::PeriodicMinimalRenorm,
        (MinimalRenorm::Found(step), Some(false)) => {
            if step.periodic {
                return Err(Error::Inconsistent(
                    "periodic minimal renormalization found although the inclusion fails".into(),
                ));
            }
            Trichotomy::CantorMinimalRenorm
        }
        (MinimalRenorm::Found(step), None) => {
            if step.periodic {
                Trichotomy::PeriodicMinimalRenorm
            } else {
                Trichotomy::CantorMinimalRenorm
            }
        }
        (MinimalRenorm::PrimeUpToBound { l_max }, _) => Trichotomy::Unknown { l_max: *l_max },
    })
}
