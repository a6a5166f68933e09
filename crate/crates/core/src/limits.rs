//! α-limit classification and the nonwandering decomposition, driven by a
//! computed tower.
//!
//! Level `i` of a tower contributes the orbit union `orb([a_i, b_i])`, the
//! union of the first-return images of its two halves. These unions are
//! nested, and a point's α-limit set is decided by the deepest one containing
//! it. The sets `E_i` themselves are never built; queries use forward orbits
//! and finite preimage trees instead.

use std::collections::HashSet;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval_dynamics::{interval_orbit, IntervalUnion};
use crate::lorenz_map::{LorenzMap, SidedPoint};
use crate::numerics::{sort_scalars_by, Interval, Scalar};
use crate::renorm::Tower;

/// Depth of the preimage tree used for non-periodic levels.
pub const CANTOR_APPROX_DEPTH: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum AlphaClass {
    /// `α(x) = E_i`.
    ProperLimitSet(usize),
    /// `α(x) = [a, b]`.
    FullInterval,
}

impl AlphaClass {
    /// `E_i` or `I`.
    pub fn label(&self) -> String {
        match self {
            AlphaClass::ProperLimitSet(i) => format!("E_{i}"),
            AlphaClass::FullInterval => "I".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaClassification {
    pub class: AlphaClass,
    /// Component of the deepest orbit union containing the point.
    pub witness: Interval,
}

/// `orb([a_i, b_i])` for `i = 0..=m`, with `orb([a_0, b_0]) = [a, b]`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelOrbits {
    pub unions: Vec<IntervalUnion>,
}

impl LevelOrbits {
    pub fn new(map: &LorenzMap, tower: &Tower) -> Result<Self> {
        let mut unions = vec![IntervalUnion::from_interval(map.domain())];
        for i in 1..=tower.len() {
            unions.push(interval_orbit(map, &tower.level_interval(map, i), tower.level_times(i))?);
        }
        Ok(LevelOrbits { unions })
    }

    pub fn attractor(&self) -> &IntervalUnion {
        self.unions.last().expect("level 0 is always present")
    }

    pub fn classify(&self, x: &Scalar) -> Result<AlphaClassification> {
        let mut deepest = 0;
        for (i, u) in self.unions.iter().enumerate().skip(1) {
            if u.contains(x)? {
                deepest = i;
            } else {
                break;
            }
        }
        let witness = self.unions[deepest].component_containing(x)?.cloned().ok_or(Error::OutOfDomain)?;
        let class = if deepest + 1 == self.unions.len() {
            AlphaClass::FullInterval
        } else {
            AlphaClass::ProperLimitSet(deepest + 1)
        };
        Ok(AlphaClassification { class, witness })
    }
}

/// α-limit class of `x`.
pub fn alpha_classify(map: &LorenzMap, tower: &Tower, x: &Scalar) -> Result<AlphaClassification> {
    if !map.domain().contains(x)? {
        return Err(Error::OutOfDomain);
    }
    LevelOrbits::new(map, tower)?.classify(x)
}

/// Forward orbit of a periodic point, in order, without the repeat.
fn periodic_orbit_of(map: &LorenzMap, x: &Scalar, cap: usize) -> Result<Vec<Scalar>> {
    let mut orbit = vec![x.clone()];
    let mut p = SidedPoint::plain(x.clone());
    for _ in 0..cap {
        p = map.step(&p)?;
        if p.x.eq_certified(x)? {
            return Ok(orbit);
        }
        orbit.push(p.x.clone());
    }
    Err(Error::CapExceeded { cap })
}

fn sorted_unique(mut points: Vec<Scalar>) -> Result<Vec<Scalar>> {
    sort_scalars_by(&mut points, |p| p)?;
    points.dedup();
    Ok(points)
}

fn level_index(tower: &Tower, i: usize) -> Result<()> {
    if i == 0 || i > tower.len() {
        return Err(Error::Inconsistent(format!("level {i} outside 1..={}", tower.len())));
    }
    Ok(())
}

/// Orbits of `e₋ⁱ` and `e₊ⁱ` in original coordinates, sorted.
pub fn repelling_orbits(map: &LorenzMap, tower: &Tower, i: usize, cap: usize) -> Result<Vec<Scalar>> {
    level_index(tower, i)?;
    let level = &tower.levels[i - 1];
    let mut points = periodic_orbit_of(map, &level.e_minus, cap)?;
    points.extend(periodic_orbit_of(map, &level.e_plus, cap)?);
    sorted_unique(points)
}

/// Preimages up to `depth` of the orbits of `e₋ⁱ` and `e₊ⁱ`, keeping only
/// points outside `(a_i, b_i)`. A finite inner approximation of `E_i`.
pub fn alpha_limit_approx(map: &LorenzMap, tower: &Tower, i: usize, depth: usize) -> Result<Vec<Scalar>> {
    level_index(tower, i)?;
    let gap = tower.level_interval(map, i).interior()?;
    let mut layer = Vec::new();
    for p in repelling_orbits(map, tower, i, usize::MAX)? {
        if !gap.contains(&p)? {
            layer.push(p);
        }
    }
    let mut all = layer.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for y in &layer {
            for pre in map.inverse_images(y)? {
                if !gap.contains(&pre.x)? {
                    next.push(pre.x);
                }
            }
        }
        let next = sorted_unique(next)?;
        all.extend(next.iter().cloned());
        layer = next;
    }
    sorted_unique(all)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    /// The orbit became periodic without entering `(a_i, b_i)`.
    In,
    /// The orbit entered `(a_i, b_i)` at this step.
    Out {
        step: usize,
    },
    Undetermined {
        cap: usize,
    },
}

/// Whether `x ∈ E_i`, i.e. whether its orbit avoids `(a_i, b_i)`.
pub fn membership_e(map: &LorenzMap, tower: &Tower, i: usize, x: &Scalar, cap: usize) -> Result<Membership> {
    level_index(tower, i)?;
    let gap = tower.level_interval(map, i).interior()?;
    let mut seen: HashSet<BigRational> = HashSet::new();
    let mut p = SidedPoint::plain(x.clone());
    for step in 0..=cap {
        if gap.contains(&p.x)? {
            return Ok(Membership::Out { step });
        }
        if let Some(q) = p.x.as_exact() {
            if !seen.insert(q.clone()) {
                return Ok(Membership::In);
            }
        }
        if step < cap {
            p = map.step(&p)?;
        }
    }
    Ok(Membership::Undetermined { cap })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    Periodic,
    Cantor,
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaPart {
    pub level: usize,
    pub kind: LevelKind,
    /// Exact `Ω_i` when periodic, a finite inner approximation otherwise.
    pub points: Vec<Scalar>,
    /// Preimage depth used for the approximation.
    pub approximation_depth: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaDecomposition {
    pub omega_parts: Vec<OmegaPart>,
    pub attractor: IntervalUnion,
}

pub fn omega_decomposition(map: &LorenzMap, tower: &Tower) -> Result<OmegaDecomposition> {
    let orbits = LevelOrbits::new(map, tower)?;
    omega_decomposition_with(map, tower, &orbits)
}

pub fn omega_decomposition_with(map: &LorenzMap, tower: &Tower, orbits: &LevelOrbits) -> Result<OmegaDecomposition> {
    let mut omega_parts = Vec::with_capacity(tower.len());
    for (idx, level) in tower.levels.iter().enumerate() {
        let i = idx + 1;
        let part = if level.step.periodic {
            OmegaPart {
                level: i,
                kind: LevelKind::Periodic,
                points: repelling_orbits(map, tower, i, usize::MAX)?,
                approximation_depth: None,
            }
        } else {
            let outer = &orbits.unions[i - 1];
            let mut points = Vec::new();
            for p in alpha_limit_approx(map, tower, i, CANTOR_APPROX_DEPTH)? {
                if outer.contains(&p)? {
                    points.push(p);
                }
            }
            OmegaPart { level: i, kind: LevelKind::Cantor, points, approximation_depth: Some(CANTOR_APPROX_DEPTH) }
        };
        omega_parts.push(part);
    }
    Ok(OmegaDecomposition { omega_parts, attractor: orbits.attractor().clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DepthTag {
    /// Countable with derived-set depth `depth`.
    Countable {
        depth: usize,
    },
    Cantor,
    /// Periodic level above a non-periodic one: contains a Cantor set and
    /// isolated points.
    Uncountable,
}

/// Structure of each `E_i`, read off the periodic flags.
pub fn depth_report(tower: &Tower) -> Vec<DepthTag> {
    let mut all_periodic = true;
    tower
        .levels
        .iter()
        .enumerate()
        .map(|(idx, level)| {
            if !level.step.periodic {
                all_periodic = false;
                DepthTag::Cantor
            } else if all_periodic {
                DepthTag::Countable { depth: idx + 1 }
            } else {
                DepthTag::Uncountable
            }
        })
        .collect()
}
