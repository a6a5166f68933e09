use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use super::scalar::{cmp_certified, Scalar};
use crate::error::{Error, Result};

/// Interval with independently open or closed endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: Scalar,
    pub hi: Scalar,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    /// Rejects `lo > hi` and degenerate intervals that are not closed.
    pub fn new(lo: Scalar, hi: Scalar, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        match cmp_certified(&lo, &hi)? {
            Ordering::Greater => Err(Error::EmptyInterval),
            Ordering::Equal if !(lo_closed && hi_closed) => Err(Error::EmptyInterval),
            _ => Ok(Interval { lo, hi, lo_closed, hi_closed }),
        }
    }

    pub fn closed(lo: Scalar, hi: Scalar) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: Scalar, hi: Scalar) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn point(x: Scalar) -> Self {
        Interval { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    pub fn is_degenerate(&self) -> Result<bool> {
        self.lo.eq_certified(&self.hi)
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }

    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn interior(&self) -> Result<Interval> {
        Interval::open(self.lo.clone(), self.hi.clone())
    }

    pub fn contains(&self, x: &Scalar) -> Result<bool> {
        interval_contains(self, x)
    }

    /// `self ⊆ other`, respecting endpoint flags.
    pub fn is_subset_of(&self, other: &Interval) -> Result<bool> {
        let lo_ok = match cmp_certified(&other.lo, &self.lo)? {
            Ordering::Less => true,
            Ordering::Equal => other.lo_closed || !self.lo_closed,
            Ordering::Greater => false,
        };
        let hi_ok = match cmp_certified(&self.hi, &other.hi)? {
            Ordering::Less => true,
            Ordering::Equal => other.hi_closed || !self.hi_closed,
            Ordering::Greater => false,
        };
        Ok(lo_ok && hi_ok)
    }

    /// Whether the two intervals share a point, or touch at an endpoint that
    /// at least one of them contains (so their union is an interval).
    pub(crate) fn merges_with(&self, next: &Interval) -> Result<bool> {
        Ok(match cmp_certified(&next.lo, &self.hi)? {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed || next.lo_closed,
            Ordering::Greater => false,
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Membership respecting open and closed endpoints.
pub fn interval_contains(j: &Interval, x: &Scalar) -> Result<bool> {
    let above_lo = match cmp_certified(x, &j.lo)? {
        Ordering::Greater => true,
        Ordering::Equal => j.lo_closed,
        Ordering::Less => false,
    };
    if !above_lo {
        return Ok(false);
    }
    Ok(match cmp_certified(x, &j.hi)? {
        Ordering::Less => true,
        Ordering::Equal => j.hi_closed,
        Ordering::Greater => false,
    })
}
