//! Composition of branches into affine segments of `f^n`.

use std::cmp::Ordering;

use super::{Branch, LorenzMap, Side, SidedPoint};
use crate::error::{Error, Result};
use crate::numerics::{cmp_certified, Scalar};

/// A closed sub-interval `[lo, hi]` on which `f^n` is affine,
/// `f^n(x) = slope·x + intercept`, together with the branch word followed by
/// its interior. `lo` carries side `Plus` and `hi` side `Minus`.
#[derive(Clone, Debug)]
pub struct Segment {
    pub lo: SidedPoint,
    pub hi: SidedPoint,
    pub slope: Scalar,
    pub intercept: Scalar,
    pub word: Vec<Branch>,
}

impl Segment {
    pub fn apply(&self, x: &Scalar) -> Scalar {
        &(&self.slope * x) + &self.intercept
    }

    fn preimage(&self, y: &Scalar) -> Scalar {
        &(y - &self.intercept) / &self.slope
    }

    /// Fixed point of the affine law inside the closed segment, tagged with
    /// the side it is approached from when it sits on an endpoint.
    pub fn fixed_point(&self) -> Result<Option<SidedPoint>> {
        let denom = &Scalar::one() - &self.slope;
        if denom.eq_certified(&Scalar::zero())? {
            return Ok(None);
        }
        let x = &self.intercept / &denom;
        let below = cmp_certified(&x, &self.lo.x)?;
        let above = cmp_certified(&x, &self.hi.x)?;
        Ok(match (below, above) {
            (Ordering::Less, _) | (_, Ordering::Greater) => None,
            (Ordering::Equal, _) => Some(SidedPoint::plus(x)),
            (_, Ordering::Equal) => Some(SidedPoint::minus(x)),
            _ => Some(SidedPoint::plain(x)),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ComposeMode {
    /// Fail if an intermediate image straddles `c`.
    Continuous,
    /// Split at `c` and keep every branch.
    Split,
    /// Split at `c`, keep only the part adjacent to `hi`.
    KeepHigh,
    /// Split at `c`, keep only the part adjacent to `lo`.
    KeepLow,
}

/// Affine segments of `f^steps` on `[lo, hi]` (a sub-interval of one branch
/// domain), refined at every piece breakpoint and, depending on `mode`, at
/// preimages of `c`.
pub(crate) fn compose(
    map: &LorenzMap,
    lo: SidedPoint,
    hi: SidedPoint,
    steps: usize,
    mode: ComposeMode,
    budget: usize,
) -> Result<Vec<Segment>> {
    let mut segments = vec![Segment {
        lo: SidedPoint::plus(lo.x),
        hi: SidedPoint::minus(hi.x),
        slope: Scalar::one(),
        intercept: Scalar::zero(),
        word: Vec::new(),
    }];
    for step in 0..steps {
        let mut next = Vec::with_capacity(segments.len() * 2);
        for seg in &segments {
            let (parts, was_cut) = split_at_critical(map, seg, mode, step)?;
            // Keeping one side of a cut also drops everything beyond it, so the
            // result stays a single interval adjacent to the kept end.
            if was_cut && mode == ComposeMode::KeepHigh {
                next.clear();
            }
            for (branch, part) in parts {
                refine_through_branch(map, part, branch, &mut next)?;
            }
            if was_cut && mode == ComposeMode::KeepLow {
                break;
            }
        }
        if next.len() > budget {
            return Err(Error::BranchBudgetExceeded { budget });
        }
        segments = next;
    }
    Ok(segments)
}

fn split_at_critical(
    map: &LorenzMap,
    seg: &Segment,
    mode: ComposeMode,
    step: usize,
) -> Result<(Vec<(Branch, Segment)>, bool)> {
    let c = map.c();
    let y_lo = seg.apply(&seg.lo.x);
    let y_hi = seg.apply(&seg.hi.x);
    // The image of the open segment is (y_lo, y_hi); an endpoint equal to c
    // is approached from inside.
    if y_hi.le(c)? {
        return Ok((vec![(Branch::Left, seg.clone())], false));
    }
    if c.le(&y_lo)? {
        return Ok((vec![(Branch::Right, seg.clone())], false));
    }
    let cut = seg.preimage(c);
    let low = Segment { hi: SidedPoint::minus(cut.clone()), ..seg.clone() };
    let high = Segment { lo: SidedPoint::plus(cut), ..seg.clone() };
    let parts = match mode {
        ComposeMode::Continuous => return Err(Error::Discontinuous { step }),
        ComposeMode::Split => vec![(Branch::Left, low), (Branch::Right, high)],
        ComposeMode::KeepHigh => vec![(Branch::Right, high)],
        ComposeMode::KeepLow => vec![(Branch::Left, low)],
    };
    Ok((parts, true))
}

fn refine_through_branch(map: &LorenzMap, seg: Segment, branch: Branch, out: &mut Vec<Segment>) -> Result<()> {
    let y_lo = seg.apply(&seg.lo.x);
    let y_hi = seg.apply(&seg.hi.x);
    let pieces = &map.branch(branch).pieces;
    let mut cur_lo = seg.lo.x.clone();
    for (idx, piece) in pieces.iter().enumerate() {
        // Pieces entirely below the image are skipped; the image starts in the
        // first piece whose right end exceeds y_lo (or the last piece).
        let is_last = idx + 1 == pieces.len();
        if !is_last && piece.hi.le(&y_lo)? {
            continue;
        }
        let ends_here = is_last || y_hi.le(&piece.hi)?;
        let cur_hi = if ends_here { seg.hi.x.clone() } else { seg.preimage(&piece.hi) };
        let mut word = seg.word.clone();
        word.push(branch);
        out.push(Segment {
            lo: SidedPoint::new(cur_lo.clone(), Side::Plus),
            hi: SidedPoint::new(cur_hi.clone(), Side::Minus),
            slope: &piece.slope * &seg.slope,
            intercept: &(&piece.slope * &seg.intercept) + &piece.intercept,
            word,
        });
        if ends_here {
            break;
        }
        cur_lo = cur_hi;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn second_iterate_of_symmetric_map_has_four_cylinders() {
        let f = LorenzMap::symmetric(q(3, 2)).unwrap();
        let mut all =
            compose(&f, SidedPoint::plus(q(0, 1)), SidedPoint::minus(q(1, 2)), 2, ComposeMode::Split, 100).unwrap();
        all.extend(
            compose(&f, SidedPoint::plus(q(1, 2)), SidedPoint::minus(q(1, 1)), 2, ComposeMode::Split, 100).unwrap(),
        );
        assert_eq!(all.len(), 4);
        for seg in &all {
            assert_eq!(seg.slope, q(9, 4));
            for x in [&seg.lo, &seg.hi] {
                assert_eq!(seg.apply(&x.x), f.iterate(x, 2).unwrap().x);
            }
        }
    }

    #[test]
    fn continuous_mode_rejects_crossings() {
        let f = LorenzMap::symmetric(q(3, 2)).unwrap();
        let err = compose(&f, SidedPoint::plus(q(0, 1)), SidedPoint::minus(q(1, 2)), 3, ComposeMode::Continuous, 100);
        assert!(matches!(err, Err(Error::Discontinuous { .. })));
    }

    #[test]
    fn keep_high_tracks_the_cylinder_next_to_c() {
        let f = LorenzMap::symmetric(q(3, 2)).unwrap();
        let segs =
            compose(&f, SidedPoint::plus(q(0, 1)), SidedPoint::minus(q(1, 2)), 2, ComposeMode::KeepHigh, 100).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].lo.x, q(1, 6));
        assert_eq!(segs[0].fixed_point().unwrap(), Some(SidedPoint::plain(q(3, 10))));
        let segs =
            compose(&f, SidedPoint::plus(q(1, 2)), SidedPoint::minus(q(1, 1)), 2, ComposeMode::KeepLow, 100).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].hi.x, q(5, 6));
        assert_eq!(segs[0].fixed_point().unwrap(), Some(SidedPoint::plain(q(7, 10))));
    }

    #[test]
    fn multi_piece_branches_are_refined() {
        use super::super::{AffinePiece, BranchFn};
        // Left branch with a kink at 1/4: slope 6/5 then slope 2.
        let left = BranchFn::new(vec![
            AffinePiece::new(q(0, 1), q(1, 4), q(6, 5), q(1, 5)),
            AffinePiece::new(q(1, 4), q(1, 2), q(2, 1), q(0, 1)),
        ]);
        let right = BranchFn::affine(q(1, 2), q(1, 1), q(6, 5), q(-3, 5));
        let f = LorenzMap::new(q(0, 1), q(1, 1), q(1, 2), left, right).unwrap();
        let segs =
            compose(&f, SidedPoint::plus(q(0, 1)), SidedPoint::minus(q(1, 2)), 1, ComposeMode::Split, 10).unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].hi.x, q(1, 4));
        assert_eq!(segs[1].slope, q(2, 1));
    }
}
