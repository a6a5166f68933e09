//! Forward and backward dynamics of intervals: the hitting index `N(U)`,
//! orbit unions, covering, and locally-eventually-onto evidence.
//!
//! Images are taken with `c` split into `c-` and `c+`: an interval meeting `c`
//! maps to a piece ending at `b` and a piece starting at `a`, both closed at
//! those ends.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lorenz_map::{Branch, LorenzMap, ReturnTimes, SidedPoint};
use crate::numerics::{cmp_certified, sort_scalars_by, Interval, Scalar};

/// Sorted, pairwise disjoint, maximal intervals.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IntervalUnion {
    pub components: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { components: Vec::new() }
    }

    pub fn from_interval(j: Interval) -> Self {
        IntervalUnion { components: vec![j] }
    }

    /// Normalizes an arbitrary collection: sorts and merges overlapping or
    /// touching components.
    pub fn from_intervals(mut parts: Vec<Interval>) -> Result<Self> {
        sort_scalars_by(&mut parts, |j| &j.lo)?;
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for next in parts {
            if let Some(last) = out.last_mut() {
                if last.merges_with(&next)? {
                    if last.lo.eq_certified(&next.lo)? {
                        last.lo_closed |= next.lo_closed;
                    }
                    match cmp_certified(&next.hi, &last.hi)? {
                        Ordering::Greater => {
                            last.hi = next.hi;
                            last.hi_closed = next.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= next.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(next);
        }
        Ok(IntervalUnion { components: out })
    }

    pub fn union(&self, other: &IntervalUnion) -> Result<IntervalUnion> {
        let mut all = self.components.clone();
        all.extend(other.components.iter().cloned());
        IntervalUnion::from_intervals(all)
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn contains(&self, x: &Scalar) -> Result<bool> {
        Ok(self.component_containing(x)?.is_some())
    }

    pub fn component_containing(&self, x: &Scalar) -> Result<Option<&Interval>> {
        for j in &self.components {
            if j.contains(x)? {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// Each component of `self` lies in a single component of `other`, which
    /// is exact because components of a normalized union are maximal.
    pub fn is_subset_of(&self, other: &IntervalUnion) -> Result<bool> {
        'outer: for j in &self.components {
            for k in &other.components {
                if j.is_subset_of(k)? {
                    continue 'outer;
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    pub fn equals(&self, other: &IntervalUnion) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// Whether the union is exactly the closed interval `domain`.
    pub fn is_exactly(&self, domain: &Interval) -> Result<bool> {
        Ok(match self.components.as_slice() {
            [only] => {
                only.is_closed()
                    && domain.is_closed()
                    && only.lo.eq_certified(&domain.lo)?
                    && only.hi.eq_certified(&domain.hi)?
            }
            _ => false,
        })
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.components.iter().map(|j| j.to_string()).collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

/// `N(U)` and the unique `z ∈ U` with `f^n(z) = c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HittingResult {
    pub n: usize,
    pub z: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum LeoEvidence {
    Covered(usize),
    NotCoveredWithin(usize),
}

/// Image of `j` under `f`, split at `c`. A point `c` interior to `j` counts
/// as both `c-` and `c+`.
pub fn image_interval(map: &LorenzMap, j: &Interval) -> Result<Vec<Interval>> {
    let c = map.c();
    let lo_vs_c = cmp_certified(&j.lo, c)?;
    let hi_vs_c = cmp_certified(&j.hi, c)?;
    let at_c = lo_vs_c == Ordering::Equal && hi_vs_c == Ordering::Equal;
    let mut out = Vec::with_capacity(2);
    if lo_vs_c == Ordering::Less || at_c {
        let lo = map.eval(&SidedPoint::minus(j.lo.clone()))?;
        let (hi, hi_closed) = match hi_vs_c {
            Ordering::Less => (map.eval(&SidedPoint::minus(j.hi.clone()))?, j.hi_closed),
            Ordering::Equal => (map.b().clone(), j.hi_closed),
            Ordering::Greater => (map.b().clone(), true),
        };
        out.push(Interval::new(lo, hi, j.lo_closed, hi_closed)?);
    }
    if hi_vs_c == Ordering::Greater || at_c {
        let hi = map.eval(&SidedPoint::plus(j.hi.clone()))?;
        let (lo, lo_closed) = match lo_vs_c {
            Ordering::Greater => (map.eval(&SidedPoint::plus(j.lo.clone()))?, j.lo_closed),
            Ordering::Equal => (map.a().clone(), j.lo_closed),
            Ordering::Less => (map.a().clone(), true),
        };
        out.push(Interval::new(lo, hi, lo_closed, j.hi_closed)?);
    }
    Ok(out)
}

pub fn image_union(map: &LorenzMap, u: &IntervalUnion) -> Result<IntervalUnion> {
    let mut parts = Vec::with_capacity(u.len() * 2);
    for j in &u.components {
        parts.extend(image_interval(map, j)?);
    }
    IntervalUnion::from_intervals(parts)
}

/// Least `n ≤ cap` with `c ∈ f^n(U)` for the open interval with the same
/// endpoints as `u`, and the unique point of `U` that lands on `c`.
pub fn hitting_index(map: &LorenzMap, u: &Interval, cap: usize) -> Result<HittingResult> {
    if !u.lo.lt(&u.hi)? {
        return Err(Error::EmptyInterval);
    }
    let c = map.c();
    let mut lo = SidedPoint::plus(u.lo.clone());
    let mut hi = SidedPoint::minus(u.hi.clone());
    let mut word: Vec<Branch> = Vec::new();
    for n in 0..=cap {
        if lo.x.lt(c)? && c.lt(&hi.x)? {
            let mut z = c.clone();
            for &branch in word.iter().rev() {
                z = map.branch_inverse(branch, &z)?.ok_or(Error::OutOfDomain)?;
            }
            return Ok(HittingResult { n, z });
        }
        if n == cap {
            break;
        }
        word.push(map.branch_of(&lo)?);
        lo = map.step(&lo)?;
        hi = map.step(&hi)?;
    }
    Err(Error::CapExceeded { cap })
}

/// `∪_{n<ℓ} f^n([u, c-]) ∪ ∪_{n<r} f^n([c+, v])`.
pub fn interval_orbit(map: &LorenzMap, j: &Interval, times: ReturnTimes) -> Result<IntervalUnion> {
    let c = map.c();
    if !j.lo.lt(c)? || !c.lt(&j.hi)? {
        return Err(Error::IntervalDoesNotStraddleC);
    }
    let mut parts = Vec::new();
    let halves = [
        (Interval::new(j.lo.clone(), c.clone(), j.lo_closed, true)?, times.left),
        (Interval::new(c.clone(), j.hi.clone(), true, j.hi_closed)?, times.right),
    ];
    for (start, count) in halves {
        // Images of the half touching `c` stay one-sided there: a right end
        // equal to `c` is `c-`, a left end equal to `c` is `c+`.
        let mut layer = vec![start];
        for n in 0..count {
            parts.extend(layer.iter().cloned());
            if n + 1 < count {
                let mut next = Vec::with_capacity(layer.len());
                for piece in &layer {
                    next.extend(image_interval(map, piece)?);
                }
                layer = next;
            }
        }
    }
    IntervalUnion::from_intervals(parts)
}

/// Least `n ≤ cap` with `∪_{i≤n} f^i(U) = [a, b]`.
pub fn leo_evidence(map: &LorenzMap, u: &Interval, cap: usize) -> Result<LeoEvidence> {
    let domain = map.domain();
    let seed = IntervalUnion::from_interval(u.clone());
    let mut acc = seed.clone();
    for n in 0..=cap {
        if acc.is_exactly(&domain)? {
            return Ok(LeoEvidence::Covered(n));
        }
        if n == cap {
            break;
        }
        let next = seed.union(&image_union(map, &acc)?)?;
        if next == acc {
            break;
        }
        acc = next;
    }
    Ok(LeoEvidence::NotCoveredWithin(cap))
}

/// Whether `∪_{i≤steps} f^i(J) = [a, b]`.
pub fn covering_check(map: &LorenzMap, j: &Interval, steps: usize) -> Result<bool> {
    Ok(matches!(leo_evidence(map, j, steps)?, LeoEvidence::Covered(_)))
}

/// Preimage of `j` under one branch, clamped to the branch's range.
fn branch_preimage(map: &LorenzMap, branch: Branch, j: &Interval) -> Result<Option<Interval>> {
    let (dom_lo, dom_hi) = match branch {
        Branch::Left => (map.a().clone(), map.c().clone()),
        Branch::Right => (map.c().clone(), map.b().clone()),
    };
    let fun = map.branch(branch);
    let (range_lo, range_hi) = (fun.value(&dom_lo)?, fun.value(&dom_hi)?);
    let (lo, lo_closed) = match cmp_certified(&j.lo, &range_lo)? {
        Ordering::Less => (range_lo, true),
        _ => (j.lo.clone(), j.lo_closed),
    };
    let (hi, hi_closed) = match cmp_certified(&j.hi, &range_hi)? {
        Ordering::Greater => (range_hi, true),
        _ => (j.hi.clone(), j.hi_closed),
    };
    match cmp_certified(&lo, &hi)? {
        Ordering::Greater => return Ok(None),
        Ordering::Equal if !(lo_closed && hi_closed) => return Ok(None),
        _ => {}
    }
    let x_lo = fun.inverse(&lo)?.ok_or(Error::OutOfDomain)?;
    let x_hi = fun.inverse(&hi)?.ok_or(Error::OutOfDomain)?;
    Ok(Some(Interval::new(x_lo, x_hi, lo_closed, hi_closed)?))
}

/// `f^{-1}(U)`, each branch inverted separately.
pub fn preimage_of_union(map: &LorenzMap, u: &IntervalUnion) -> Result<IntervalUnion> {
    let mut parts = Vec::new();
    for j in &u.components {
        for branch in [Branch::Left, Branch::Right] {
            if let Some(p) = branch_preimage(map, branch, j)? {
                parts.push(p);
            }
        }
    }
    IntervalUnion::from_intervals(parts)
}

/// `∪_{n≤depth} f^{-n}(J)`.
pub fn preimage_union(map: &LorenzMap, j: &Interval, depth: usize) -> Result<IntervalUnion> {
    let mut layer = IntervalUnion::from_interval(j.clone());
    let mut acc = layer.clone();
    for _ in 0..depth {
        layer = preimage_of_union(map, &layer)?;
        acc = acc.union(&layer)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn sym(n: i64, d: i64) -> LorenzMap {
        LorenzMap::symmetric(q(n, d)).unwrap()
    }

    fn closed(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::closed(q(a.0, a.1), q(b.0, b.1)).unwrap()
    }

    fn open(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::open(q(a.0, a.1), q(b.0, b.1)).unwrap()
    }

    #[test]
    fn hitting_index_examples() {
        let f = sym(3, 2);
        let h = hitting_index(&f, &open((3, 10), (1, 2)), 100).unwrap();
        assert_eq!(h.n, 2);
        let h = hitting_index(&f, &open((2, 5), (9, 20)), 100).unwrap();
        assert_eq!(h.n, 4);
        let z = SidedPoint::plain(h.z.clone());
        assert_eq!(f.iterate(&z, 4).unwrap().x, q(1, 2));
        let h = hitting_index(&f, &open((1, 4), (3, 4)), 100).unwrap();
        assert_eq!(h, HittingResult { n: 0, z: q(1, 2) });
    }

    #[test]
    fn hitting_cap_is_reported() {
        let f = sym(3, 2);
        assert!(matches!(hitting_index(&f, &open((2, 5), (9, 20)), 3), Err(Error::CapExceeded { cap: 3 })));
    }

    #[test]
    fn orbit_of_renormalization_interval() {
        let f = sym(6, 5);
        let u = interval_orbit(&f, &closed((2, 5), (3, 5)), ReturnTimes::new(2, 2)).unwrap();
        let expected = IntervalUnion {
            components: vec![closed((0, 1), (3, 25)), closed((2, 5), (3, 5)), closed((22, 25), (1, 1))],
        };
        assert_eq!(u, expected);
        let g = sym(11, 10);
        let u = interval_orbit(&g, &closed((9, 20), (11, 20)), ReturnTimes::new(2, 2)).unwrap();
        let expected = IntervalUnion {
            components: vec![closed((0, 1), (11, 200)), closed((9, 20), (11, 20)), closed((189, 200), (1, 1))],
        };
        assert_eq!(u, expected);
        let whole = interval_orbit(&g, &g.domain(), ReturnTimes::new(1, 1)).unwrap();
        assert_eq!(whole.components, vec![g.domain()]);
    }

    #[test]
    fn orbit_rejects_non_straddling() {
        let f = sym(6, 5);
        let err = interval_orbit(&f, &closed((1, 5), (2, 5)), ReturnTimes::new(2, 2));
        assert!(matches!(err, Err(Error::IntervalDoesNotStraddleC)));
    }

    #[test]
    fn covering_examples() {
        let f = sym(3, 2);
        assert!(covering_check(&f, &closed((3, 10), (7, 10)), 1).unwrap());
        assert!(covering_check(&f, &f.domain(), 0).unwrap());
        let g = sym(6, 5);
        assert!(!covering_check(&g, &closed((2, 5), (3, 5)), 50).unwrap());
    }

    #[test]
    fn leo_examples() {
        let f = sym(3, 2);
        match leo_evidence(&f, &open((2, 5), (9, 20)), 1000).unwrap() {
            LeoEvidence::Covered(n) => assert!(n <= 16, "n = {n}"),
            other => panic!("{other:?}"),
        }
        let g = sym(6, 5);
        assert_eq!(leo_evidence(&g, &open((9, 20), (11, 20)), 100).unwrap(), LeoEvidence::NotCoveredWithin(100));
        assert_eq!(leo_evidence(&g, &g.domain(), 5).unwrap(), LeoEvidence::Covered(0));
    }

    #[test]
    fn union_normalization_merges_touching_closed_ends() {
        let u = IntervalUnion::from_intervals(vec![
            closed((1, 2), (1, 1)),
            Interval::new(q(0, 1), q(1, 2), true, false).unwrap(),
            open((3, 2), (2, 1)),
            open((1, 1), (3, 2)),
        ])
        .unwrap();
        assert_eq!(u.components, vec![Interval::new(q(0, 1), q(3, 2), true, false).unwrap(), open((3, 2), (2, 1))]);
    }

    #[test]
    fn image_splits_at_c() {
        let f = sym(3, 2);
        let parts = image_interval(&f, &open((3, 10), (7, 10))).unwrap();
        assert_eq!(
            parts,
            vec![
                Interval::new(q(7, 10), q(1, 1), false, true).unwrap(),
                Interval::new(q(0, 1), q(3, 10), true, false).unwrap(),
            ]
        );
        let point = image_interval(&f, &Interval::point(q(1, 2))).unwrap();
        assert_eq!(point, vec![Interval::point(q(1, 1)), Interval::point(q(0, 1))]);
    }

    #[test]
    fn preimages_of_an_interval() {
        let f = sym(3, 2);
        // f^{-1}((3/10, 7/10)) = (1/30, 3/10) ∪ (7/10, 29/30).
        let pre = preimage_union(&f, &open((3, 10), (7, 10)), 1).unwrap();
        assert_eq!(pre.components, vec![open((1, 30), (3, 10)), open((3, 10), (7, 10)), open((7, 10), (29, 30))]);
    }
}
