use serde::Serialize;

use super::{minimal_renormalization_from, period_data, MinimalRenorm, RenormStep};
use crate::config::AnalysisConfig;
use crate::error::Result;
use crate::lorenz_map::{Branch, LorenzMap, ReturnTimes, SidedPoint};
use crate::numerics::{Interval, Scalar};

/// Affine chart `x = origin + scale·t` from a level's unit coordinates to the
/// original domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chart {
    pub origin: Scalar,
    pub scale: Scalar,
}

impl Chart {
    pub fn to_original(&self, t: &Scalar) -> Scalar {
        &self.origin + &(&self.scale * t)
    }

    pub fn to_level(&self, x: &Scalar) -> Scalar {
        &(x - &self.origin) / &self.scale
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerLevel {
    /// The step in the coordinates of the previous level's map.
    pub step: RenormStep,
    /// `[a_i, b_i]` in original coordinates.
    pub interval: Interval,
    pub e_minus: Scalar,
    pub e_plus: Scalar,
    /// Return times of the level's branches under the original map.
    pub times: ReturnTimes,
    /// Chart of this level's inner map.
    pub chart: Chart,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TowerTerminal {
    /// The last map has a fixed point.
    Prime,
    PrimeUpToBound {
        l_max: usize,
    },
    /// The minimal period of the last map exceeded the backward-chain cap and
    /// no renormalization was found up to `l_max`.
    PeriodCapReached {
        period_cap: usize,
    },
    LevelCapReached {
        level_cap: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Tower {
    pub levels: Vec<TowerLevel>,
    pub terminal: TowerTerminal,
}

impl Tower {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `[a_i, b_i]`, with `[a_0, b_0] = [a, b]`.
    pub fn level_interval(&self, map: &LorenzMap, i: usize) -> Interval {
        if i == 0 {
            map.domain()
        } else {
            self.levels[i - 1].interval.clone()
        }
    }

    /// Original return times of level `i` (`(1, 1)` at level 0).
    pub fn level_times(&self, i: usize) -> ReturnTimes {
        if i == 0 {
            ReturnTimes::new(1, 1)
        } else {
            self.levels[i - 1].times
        }
    }
}

/// Original-time cost of following `map` from `start` for `n` steps.
fn original_time(map: &LorenzMap, start: SidedPoint, n: usize, costs: ReturnTimes) -> Result<usize> {
    Ok(map
        .itinerary(&start, n)?
        .into_iter()
        .map(|b| match b {
            Branch::Left => costs.left,
            Branch::Right => costs.right,
        })
        .sum())
}

/// Consecutive minimal renormalizations until a terminal condition.
pub fn renorm_tower(map: &LorenzMap, cfg: &AnalysisConfig) -> Result<Tower> {
    let mut levels: Vec<TowerLevel> = Vec::new();
    let mut current = map.clone();
    let mut chart = Chart { origin: Scalar::zero(), scale: Scalar::one() };
    let mut costs = ReturnTimes::new(1, 1);
    loop {
        if levels.len() >= cfg.level_cap {
            return Ok(Tower { levels, terminal: TowerTerminal::LevelCapReached { level_cap: cfg.level_cap } });
        }
        let data = period_data(&current, cfg)?;
        let step = match minimal_renormalization_from(&current, &data, cfg)? {
            MinimalRenorm::Found(step) => *step,
            MinimalRenorm::Prime => return Ok(Tower { levels, terminal: TowerTerminal::Prime }),
            MinimalRenorm::PrimeUpToBound { l_max } => {
                let terminal = if data.period.kappa.is_none() {
                    TowerTerminal::PeriodCapReached { period_cap: cfg.period_cap }
                } else {
                    TowerTerminal::PrimeUpToBound { l_max }
                };
                return Ok(Tower { levels, terminal });
            }
        };
        let c = current.c().clone();
        let times = ReturnTimes::new(
            original_time(&current, SidedPoint::minus(c.clone()), step.ell, costs)?,
            original_time(&current, SidedPoint::plus(c), step.r, costs)?,
        );
        let (a_i, b_i) = (chart.to_original(&step.u), chart.to_original(&step.v));
        let next_chart = Chart { origin: a_i.clone(), scale: &chart.scale * &(&step.v - &step.u) };
        let next_map = step.inner_map.clone();
        levels.push(TowerLevel {
            interval: Interval::closed(a_i, b_i)?,
            e_minus: chart.to_original(&step.e_minus),
            e_plus: chart.to_original(&step.e_plus),
            times,
            chart: next_chart.clone(),
            step,
        });
        current = next_map;
        chart = next_chart;
        costs = times;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn tower(n: i64, d: i64) -> Tower {
        renorm_tower(&LorenzMap::symmetric(q(n, d)).unwrap(), &AnalysisConfig::default()).unwrap()
    }

    #[test]
    fn tower_lengths_follow_the_bands() {
        let t = tower(3, 2);
        assert_eq!(t.len(), 0);
        assert_eq!(t.terminal, TowerTerminal::PrimeUpToBound { l_max: 64 });
        assert_eq!(tower(6, 5).len(), 1);
        assert_eq!(tower(11, 10).len(), 2);
        assert_eq!(tower(107, 100).len(), 3);
    }

    #[test]
    fn original_coordinates_of_the_eleven_tenths_tower() {
        let t = tower(11, 10);
        assert_eq!(t.levels[0].interval, Interval::closed(q(9, 20), q(11, 20)).unwrap());
        assert_eq!(t.levels[0].times, ReturnTimes::new(2, 2));
        assert_eq!(t.levels[1].times, ReturnTimes::new(4, 4));
        let lvl2 = &t.levels[1].interval;
        assert_eq!(lvl2.lo, &q(9, 20) + &(&q(79, 200) / &q(10, 1)));
        assert_eq!(t.levels[0].e_minus, q(11, 42));
    }

    #[test]
    fn inner_slopes_square_each_level() {
        let t = tower(107, 100);
        let mut slope = q(107, 100);
        for level in &t.levels {
            slope = &slope * &slope;
            let expected = LorenzMap::symmetric(slope.clone()).unwrap();
            assert_eq!(level.step.inner_map.left(), expected.left());
            assert_eq!(level.step.inner_map.right(), expected.right());
        }
    }

    #[test]
    fn level_cap_stops_the_tower() {
        let cfg = AnalysisConfig { level_cap: 1, ..AnalysisConfig::default() };
        let t = renorm_tower(&LorenzMap::symmetric(q(11, 10)).unwrap(), &cfg).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.terminal, TowerTerminal::LevelCapReached { level_cap: 1 });
    }
}
