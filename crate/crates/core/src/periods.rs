//! Fixed points, the minimal period `κ` via the backward chain of `c`, the
//! unique `κ`-periodic orbit, and a cylinder-enumeration oracle.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lorenz_map::{compose, Branch, ComposeMode, LorenzMap, Segment, SidedPoint};
use crate::numerics::{sort_scalars_by, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimalPeriodResult {
    /// `None` when the backward chain did not enter `[f(a), f(b)]` within the cap.
    pub kappa: Option<usize>,
    pub m: Option<usize>,
    /// `c, c_1, …`, each the unique preimage of the previous one.
    pub backward_chain: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicPoint {
    pub point: SidedPoint,
    pub least_period: usize,
    /// Branch letters of the point and its first `n - 1` images.
    pub word: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicOrbit {
    /// Orbit points in increasing order.
    pub points: Vec<SidedPoint>,
    /// Orbit points in dynamical order, starting from `P_L`.
    pub cycle: Vec<SidedPoint>,
    pub period: usize,
    /// Branch letters along `cycle`.
    pub itinerary: Vec<Branch>,
    pub p_left: SidedPoint,
    pub p_right: SidedPoint,
    /// Whether full cylinder enumeration confirmed that no other orbit of
    /// this period exists (skipped when it exceeds the branch budget).
    pub uniqueness_checked: bool,
}

/// Solutions of `f(x) = x`, per affine piece.
pub fn fixed_points(map: &LorenzMap) -> Result<Vec<Scalar>> {
    let mut out: Vec<Scalar> = Vec::new();
    for branch in [Branch::Left, Branch::Right] {
        for piece in &map.branch(branch).pieces {
            let denom = &Scalar::one() - &piece.slope;
            let x = &piece.intercept / &denom;
            if !(piece.lo.le(&x)? && x.le(&piece.hi)?) || x.eq_certified(map.c())? {
                continue;
            }
            let mut seen = false;
            for y in &out {
                seen |= y.eq_certified(&x)?;
            }
            if !seen {
                out.push(x);
            }
        }
    }
    sort_scalars_by(&mut out, |x| x)?;
    Ok(out)
}

/// `κ = m + 2`, where `m` is the first index at which the backward chain of
/// `c` enters the two-preimage region `[f(a), f(b)]`; `κ = 1` when a fixed
/// point exists.
pub fn minimal_period(map: &LorenzMap, cap: usize) -> Result<MinimalPeriodResult> {
    if !fixed_points(map)?.is_empty() {
        return Ok(MinimalPeriodResult { kappa: Some(1), m: None, backward_chain: Vec::new() });
    }
    let (fa, fb) = (map.image_of_a(), map.image_of_b());
    let mut chain = vec![map.c().clone()];
    for i in 0..=cap {
        let cur = &chain[i];
        if fa.le(cur)? && cur.le(&fb)? {
            return Ok(MinimalPeriodResult { kappa: Some(i + 2), m: Some(i), backward_chain: chain });
        }
        if i == cap {
            break;
        }
        let pre = map.inverse_images(cur)?;
        match pre.as_slice() {
            [one] => {
                let next = one.x.clone();
                chain.push(next);
            }
            _ => return Err(Error::AmbiguousPreimage { index: i, count: pre.len() }),
        }
    }
    Ok(MinimalPeriodResult { kappa: None, m: None, backward_chain: chain })
}

fn cylinders(
    map: &LorenzMap,
    n: usize,
    mode_left: ComposeMode,
    mode_right: ComposeMode,
    budget: usize,
) -> Result<Vec<Segment>> {
    let mut segs =
        compose(map, SidedPoint::plus(map.a().clone()), SidedPoint::minus(map.c().clone()), n, mode_left, budget)?;
    let right =
        compose(map, SidedPoint::plus(map.c().clone()), SidedPoint::minus(map.b().clone()), n, mode_right, budget)?;
    if segs.len() + right.len() > budget {
        return Err(Error::BranchBudgetExceeded { budget });
    }
    segs.extend(right);
    Ok(segs)
}

/// Least `d | n` for which the word is `d`-periodic.
fn least_period(word: &[Branch]) -> usize {
    let n = word.len();
    (1..=n).find(|&d| n.is_multiple_of(d) && (0..n).all(|i| word[i] == word[(i + d) % n])).unwrap_or(n)
}

/// Lexicographically least rotation, identifying the orbit a word belongs to.
pub fn orbit_class(word: &[Branch]) -> Vec<Branch> {
    let p = least_period(word);
    let base = &word[..p];
    (0..p).map(|k| base[k..].iter().chain(&base[..k]).copied().collect::<Vec<_>>()).min().unwrap_or_default()
}

/// All fixed points of `f^n` with their least periods, by full cylinder
/// decomposition. Points are identified by their itineraries.
pub fn periodic_points(map: &LorenzMap, n: usize, budget: usize) -> Result<Vec<PeriodicPoint>> {
    let mut out: Vec<PeriodicPoint> = Vec::new();
    let mut seen: BTreeMap<Vec<Branch>, ()> = BTreeMap::new();
    for seg in cylinders(map, n, ComposeMode::Split, ComposeMode::Split, budget)? {
        if let Some(point) = seg.fixed_point()? {
            if seen.insert(seg.word.clone(), ()).is_none() {
                out.push(PeriodicPoint { least_period: least_period(&seg.word), word: seg.word, point });
            }
        }
    }
    sort_scalars_by(&mut out, |p| &p.point.x)?;
    Ok(out)
}

/// Distinct orbits of least period exactly `n` among the fixed points of `f^n`.
pub fn orbits_of_period(points: &[PeriodicPoint], n: usize) -> usize {
    let classes: std::collections::BTreeSet<Vec<Branch>> =
        points.iter().filter(|p| p.least_period == n).map(|p| orbit_class(&p.word)).collect();
    classes.len()
}

/// Fixed point of `f^n` on the cylinder touching `c` from the left.
pub(crate) fn fixed_point_left_of_c(map: &LorenzMap, n: usize, budget: usize) -> Result<Option<(SidedPoint, Segment)>> {
    let segs = compose(
        map,
        SidedPoint::plus(map.a().clone()),
        SidedPoint::minus(map.c().clone()),
        n,
        ComposeMode::KeepHigh,
        budget,
    )?;
    for seg in segs.into_iter().rev() {
        if let Some(p) = seg.fixed_point()? {
            return Ok(Some((p, seg)));
        }
    }
    Ok(None)
}

/// Fixed point of `f^n` on the cylinder touching `c` from the right.
pub(crate) fn fixed_point_right_of_c(
    map: &LorenzMap,
    n: usize,
    budget: usize,
) -> Result<Option<(SidedPoint, Segment)>> {
    let segs = compose(
        map,
        SidedPoint::plus(map.c().clone()),
        SidedPoint::minus(map.b().clone()),
        n,
        ComposeMode::KeepLow,
        budget,
    )?;
    for seg in segs {
        if let Some(p) = seg.fixed_point()? {
            return Ok(Some((p, seg)));
        }
    }
    Ok(None)
}

/// The unique orbit of minimal period `κ > 1`.
///
/// `P_L` is solved on the cylinder of `f^κ` adjacent to `c` from the left (the
/// interval `(P_L, c)` maps continuously for `κ` steps). Uniqueness is then
/// checked by full enumeration when it fits in `budget`.
pub fn minimal_periodic_orbit(map: &LorenzMap, kappa: usize, budget: usize) -> Result<PeriodicOrbit> {
    let mut orbit = locate_minimal_orbit(map, kappa, budget)?;
    orbit.uniqueness_checked = match periodic_points(map, kappa, budget) {
        Ok(all) => {
            let orbits = orbits_of_period(&all, kappa);
            if orbits != 1 {
                return Err(Error::UniquenessViolated { period: kappa, orbits });
            }
            true
        }
        Err(Error::BranchBudgetExceeded { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(orbit)
}

/// The `κ`-orbit through the left-adjacent cylinder, without the uniqueness
/// enumeration.
pub fn locate_minimal_orbit(map: &LorenzMap, kappa: usize, budget: usize) -> Result<PeriodicOrbit> {
    if kappa < 2 {
        return Err(Error::Inconsistent(format!("minimal periodic orbit needs κ > 1, got {kappa}")));
    }
    let (p_left, _) = fixed_point_left_of_c(map, kappa, budget)?.ok_or(Error::OrbitNotFound { period: kappa })?;
    let cycle = map.orbit(&p_left, kappa - 1)?;
    let back = map.step(&cycle[kappa - 1])?;
    if !back.x.eq_certified(&p_left.x)? {
        return Err(Error::OrbitNotFound { period: kappa });
    }
    let itinerary = map.itinerary(&p_left, kappa)?;
    if least_period(&itinerary) != kappa {
        return Err(Error::OrbitNotFound { period: kappa });
    }
    let mut points = cycle.clone();
    sort_scalars_by(&mut points, |p| &p.x)?;
    let mut p_right = None;
    for p in &points {
        if map.branch_of(p)? == Branch::Right {
            p_right = Some(p.clone());
            break;
        }
    }
    let p_right = p_right.ok_or(Error::OrbitNotFound { period: kappa })?;
    // P_L must be the largest orbit point on the left branch.
    for p in &points {
        if map.branch_of(p)? == Branch::Left && p_left.x.lt(&p.x)? {
            return Err(Error::Inconsistent("left-adjacent fixed point is not P_L".into()));
        }
    }
    Ok(PeriodicOrbit { points, cycle, period: kappa, itinerary, p_left, p_right, uniqueness_checked: false })
}
