//! Expanding Lorenz maps with piecewise-affine branches.
//!
//! A map lives on `[a, b]` with a single discontinuity `c`. The left branch is
//! defined on `[a, c)` and tends to `b` at `c`; the right branch is defined on
//! `(c, b]` and starts from `a`. The critical point is treated as two points,
//! `c-` and `c+`, carried by [`SidedPoint`].

mod compose;
mod description;
mod validate;

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

pub use compose::Segment;
pub(crate) use compose::{compose, ComposeMode};
pub use description::{MapDescription, MapFamily};
pub use validate::{validate_map, ValidationReport, Violation};

use crate::error::{Error, Result};
use crate::numerics::{cmp_certified, Interval, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Left => "L",
            Branch::Right => "R",
        })
    }
}

/// Direction from which a point is approached. Only observable at `c`, but
/// carried along orbits because every branch is increasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Minus,
    None,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SidedPoint {
    pub x: Scalar,
    pub side: Side,
}

impl SidedPoint {
    pub fn new(x: Scalar, side: Side) -> Self {
        SidedPoint { x, side }
    }

    pub fn plain(x: Scalar) -> Self {
        SidedPoint { x, side: Side::None }
    }

    pub fn minus(x: Scalar) -> Self {
        SidedPoint { x, side: Side::Minus }
    }

    pub fn plus(x: Scalar) -> Self {
        SidedPoint { x, side: Side::Plus }
    }
}

impl fmt::Display for SidedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::None => write!(f, "{}", self.x),
            Side::Minus => write!(f, "{}-", self.x),
            Side::Plus => write!(f, "{}+", self.x),
        }
    }
}

/// `x ↦ slope·x + intercept` on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffinePiece {
    pub lo: Scalar,
    pub hi: Scalar,
    pub slope: Scalar,
    pub intercept: Scalar,
}

impl AffinePiece {
    pub fn new(lo: Scalar, hi: Scalar, slope: Scalar, intercept: Scalar) -> Self {
        AffinePiece { lo, hi, slope, intercept }
    }

    pub fn apply(&self, x: &Scalar) -> Scalar {
        &(&self.slope * x) + &self.intercept
    }

    pub fn solve(&self, y: &Scalar) -> Scalar {
        &(y - &self.intercept) / &self.slope
    }
}

/// One monotone branch: contiguous affine pieces tiling its domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchFn {
    pub pieces: Vec<AffinePiece>,
}

impl BranchFn {
    pub fn new(pieces: Vec<AffinePiece>) -> Self {
        BranchFn { pieces }
    }

    pub fn affine(lo: Scalar, hi: Scalar, slope: Scalar, intercept: Scalar) -> Self {
        BranchFn { pieces: vec![AffinePiece::new(lo, hi, slope, intercept)] }
    }

    fn first(&self) -> &AffinePiece {
        &self.pieces[0]
    }

    fn last(&self) -> &AffinePiece {
        &self.pieces[self.pieces.len() - 1]
    }

    /// Piece whose closed domain contains `x`, preferring the earlier piece at
    /// a shared breakpoint (both agree there by continuity).
    fn piece_at(&self, x: &Scalar) -> Result<&AffinePiece> {
        for piece in &self.pieces {
            if x.le(&piece.hi)? {
                return Ok(piece);
            }
        }
        Err(Error::OutOfDomain)
    }

    /// Value at `x`, or the one-sided limit when `x` is a domain endpoint.
    pub fn value(&self, x: &Scalar) -> Result<Scalar> {
        Ok(self.piece_at(x)?.apply(x))
    }

    /// Unique `x` in the branch's closed domain with `value(x) = y`, if any.
    pub fn inverse(&self, y: &Scalar) -> Result<Option<Scalar>> {
        let lo_val = self.first().apply(&self.first().lo);
        let hi_val = self.last().apply(&self.last().hi);
        if y.lt(&lo_val)? || hi_val.lt(y)? {
            return Ok(None);
        }
        for piece in &self.pieces {
            if y.le(&piece.apply(&piece.hi))? {
                return Ok(Some(piece.solve(y)));
            }
        }
        Ok(None)
    }

    pub fn min_slope(&self) -> Result<Scalar> {
        let mut best = self.first().slope.clone();
        for p in &self.pieces[1..] {
            best = best.min_certified(&p.slope)?;
        }
        Ok(best)
    }
}

/// Preimage of a point together with the branch that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Preimage {
    pub x: Scalar,
    pub branch: Branch,
}

impl Preimage {
    pub fn sided(&self) -> SidedPoint {
        let side = match self.branch {
            Branch::Left => Side::Minus,
            Branch::Right => Side::Plus,
        };
        SidedPoint::new(self.x.clone(), side)
    }
}

/// A validated expanding Lorenz map.
#[derive(Clone, Debug, Serialize)]
pub struct LorenzMap {
    a: Scalar,
    b: Scalar,
    c: Scalar,
    left: BranchFn,
    right: BranchFn,
}

impl LorenzMap {
    /// Validates and builds a map; every violated condition is reported.
    pub fn new(a: Scalar, b: Scalar, c: Scalar, left: BranchFn, right: BranchFn) -> Result<Self> {
        let map = LorenzMap { a, b, c, left, right };
        let report = validate_map(&map);
        if report.is_valid() {
            Ok(map)
        } else {
            Err(report.into())
        }
    }

    /// Builds without validation; pair with [`validate_map`].
    pub fn new_unchecked(a: Scalar, b: Scalar, c: Scalar, left: BranchFn, right: BranchFn) -> Self {
        LorenzMap { a, b, c, left, right }
    }

    /// The symmetric map `x ↦ s·x + 1 - s/2` on `[0, 1/2)`, `x ↦ s·(x - 1/2)` on
    /// `(1/2, 1]`.
    pub fn symmetric(slope: Scalar) -> Result<Self> {
        let half = Scalar::ratio(1, 2);
        let left_icpt = &Scalar::one() - &(&slope * &half);
        let right_icpt = -(&slope * &half);
        LorenzMap::new(
            Scalar::zero(),
            Scalar::one(),
            half.clone(),
            BranchFn::affine(Scalar::zero(), half.clone(), slope.clone(), left_icpt),
            BranchFn::affine(half, Scalar::one(), slope, right_icpt),
        )
    }

    /// `x ↦ β·x + α mod 1` on `[0, 1]`, with `c = (1 - α)/β`.
    pub fn beta(beta: Scalar, alpha: Scalar) -> Result<Self> {
        let c = &(&Scalar::one() - &alpha) / &beta;
        let right_icpt = &alpha - &Scalar::one();
        LorenzMap::new(
            Scalar::zero(),
            Scalar::one(),
            c.clone(),
            BranchFn::affine(Scalar::zero(), c.clone(), beta.clone(), alpha),
            BranchFn::affine(c, Scalar::one(), beta, right_icpt),
        )
    }

    /// Two-slope linear map on `[0, 1]`: `x ↦ 1 + sl·(x - c)` left of `c` and
    /// `x ↦ sr·(x - c)` right of it.
    pub fn two_slope(c: Scalar, left_slope: Scalar, right_slope: Scalar) -> Result<Self> {
        let left_icpt = &Scalar::one() - &(&left_slope * &c);
        let right_icpt = -(&right_slope * &c);
        LorenzMap::new(
            Scalar::zero(),
            Scalar::one(),
            c.clone(),
            BranchFn::affine(Scalar::zero(), c.clone(), left_slope, left_icpt),
            BranchFn::affine(c, Scalar::one(), right_slope, right_icpt),
        )
    }

    /// Continuous piecewise-linear branches through control points `(x, f(x))`.
    /// The left list runs from `(a, f(a))` to `(c, b)`, the right list from
    /// `(c, a)` to `(b, f(b))`.
    pub fn piecewise_linear(left: &[(Scalar, Scalar)], right: &[(Scalar, Scalar)]) -> Result<Self> {
        fn through(points: &[(Scalar, Scalar)]) -> BranchFn {
            let pieces = points
                .windows(2)
                .map(|w| {
                    let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
                    let slope = &(y1 - y0) / &(x1 - x0);
                    let icpt = y0 - &(&slope * x0);
                    AffinePiece::new(x0.clone(), x1.clone(), slope, icpt)
                })
                .collect();
            BranchFn::new(pieces)
        }
        if left.len() < 2 || right.len() < 2 {
            return Err(Error::Parse("each branch needs at least two control points".into()));
        }
        let a = left[0].0.clone();
        let c = left[left.len() - 1].0.clone();
        let b = right[right.len() - 1].0.clone();
        LorenzMap::new(a, b, c, through(left), through(right))
    }

    /// A map on `[0, 1]` with `c = 1/2` whose minimal renormalization has
    /// return times `(2, 3)` and is not periodic.
    pub fn cantor_example() -> Self {
        let pts = |raw: &[(&str, &str)]| -> Vec<(Scalar, Scalar)> {
            raw.iter().map(|(x, y)| (x.parse().expect("literal"), y.parse().expect("literal"))).collect()
        };
        let left = pts(&[
            ("0", "101/1000"),
            ("81/1000", "192/1000"),
            ("101/1000", "43/200"),
            ("192/1000", "317/1000"),
            ("43/200", "68/100"),
            ("1/2", "1"),
        ]);
        let right = pts(&[("1/2", "0"), ("573/1000", "81/1000"), ("68/100", "43/200"), ("1", "573/1000")]);
        LorenzMap::piecewise_linear(&left, &right).expect("valid control points")
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    pub fn left(&self) -> &BranchFn {
        &self.left
    }

    pub fn right(&self) -> &BranchFn {
        &self.right
    }

    pub fn branch(&self, branch: Branch) -> &BranchFn {
        match branch {
            Branch::Left => &self.left,
            Branch::Right => &self.right,
        }
    }

    pub fn domain(&self) -> Interval {
        Interval { lo: self.a.clone(), hi: self.b.clone(), lo_closed: true, hi_closed: true }
    }

    /// `f(a)`, the left end of the two-preimage region.
    pub fn image_of_a(&self) -> Scalar {
        self.left.first().apply(&self.a)
    }

    /// `f(b)`, the right end of the two-preimage region.
    pub fn image_of_b(&self) -> Scalar {
        self.right.last().apply(&self.b)
    }

    /// Branch that acts on a sided point.
    pub fn branch_of(&self, p: &SidedPoint) -> Result<Branch> {
        match cmp_certified(&p.x, &self.c)? {
            Ordering::Less => Ok(Branch::Left),
            Ordering::Greater => Ok(Branch::Right),
            Ordering::Equal => match p.side {
                Side::Minus => Ok(Branch::Left),
                Side::Plus => Ok(Branch::Right),
                Side::None => Err(Error::SideRequired),
            },
        }
    }

    pub fn eval(&self, p: &SidedPoint) -> Result<Scalar> {
        if p.x.lt(&self.a)? || self.b.lt(&p.x)? {
            return Err(Error::OutOfDomain);
        }
        match cmp_certified(&p.x, &self.c)? {
            Ordering::Less => self.left.value(&p.x),
            Ordering::Greater => self.right.value(&p.x),
            Ordering::Equal => match p.side {
                Side::Minus => Ok(self.b.clone()),
                Side::Plus => Ok(self.a.clone()),
                Side::None => Err(Error::SideRequired),
            },
        }
    }

    /// One sided step; the side is inherited by the image.
    pub fn step(&self, p: &SidedPoint) -> Result<SidedPoint> {
        Ok(SidedPoint::new(self.eval(p)?, p.side))
    }

    pub fn iterate(&self, p: &SidedPoint, n: usize) -> Result<SidedPoint> {
        let mut cur = p.clone();
        for _ in 0..n {
            cur = self.step(&cur)?;
        }
        Ok(cur)
    }

    /// `[p, f(p), …, f^n(p)]`.
    pub fn orbit(&self, p: &SidedPoint, n: usize) -> Result<Vec<SidedPoint>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(p.clone());
        for i in 0..n {
            let next = self.step(&out[i])?;
            out.push(next);
        }
        Ok(out)
    }

    /// Branch letters of `p, f(p), …, f^{n-1}(p)`.
    pub fn itinerary(&self, p: &SidedPoint, n: usize) -> Result<Vec<Branch>> {
        let mut word = Vec::with_capacity(n);
        let mut cur = p.clone();
        for _ in 0..n {
            word.push(self.branch_of(&cur)?);
            cur = self.step(&cur)?;
        }
        Ok(word)
    }

    /// Every solution of `f(x) = y`, ascending. `c` appears as `c-` when
    /// `y = b` and as `c+` when `y = a`.
    pub fn inverse_images(&self, y: &Scalar) -> Result<Vec<Preimage>> {
        let mut out = Vec::with_capacity(2);
        if let Some(x) = self.left.inverse(y)? {
            out.push(Preimage { x, branch: Branch::Left });
        }
        if let Some(x) = self.right.inverse(y)? {
            out.push(Preimage { x, branch: Branch::Right });
        }
        Ok(out)
    }

    /// Inverse of one branch, if `y` is in its closed range.
    pub fn branch_inverse(&self, branch: Branch, y: &Scalar) -> Result<Option<Scalar>> {
        self.branch(branch).inverse(y)
    }

    /// Affine conjugation of the first-return map `(f^ℓ, f^r)` on `J = [u, v]`
    /// onto `[0, 1]`.
    pub fn rescale_to_unit(&self, j: &Interval, times: ReturnTimes) -> Result<LorenzMap> {
        let (u, v) = (&j.lo, &j.hi);
        if !u.lt(&self.c)? || !self.c.lt(v)? {
            return Err(Error::IntervalDoesNotStraddleC);
        }
        let left = compose(
            self,
            SidedPoint::plus(u.clone()),
            SidedPoint::minus(self.c.clone()),
            times.left,
            ComposeMode::Continuous,
            usize::MAX,
        )?;
        let right = compose(
            self,
            SidedPoint::plus(self.c.clone()),
            SidedPoint::minus(v.clone()),
            times.right,
            ComposeMode::Continuous,
            usize::MAX,
        )?;
        let width = v - u;
        let to_unit = |x: &Scalar| &(x - u) / &width;
        let conjugate = |segments: Vec<Segment>| -> BranchFn {
            let pieces = segments
                .into_iter()
                .map(|s| {
                    // y = s·x + t in J-coordinates becomes s·τ + (s·u + t - u)/w.
                    let icpt = &(&(&(&s.slope * u) + &s.intercept) - u) / &width;
                    AffinePiece::new(to_unit(&s.lo.x), to_unit(&s.hi.x), s.slope, icpt)
                })
                .collect();
            BranchFn::new(merge_pieces(pieces))
        };
        LorenzMap::new(Scalar::zero(), Scalar::one(), to_unit(&self.c), conjugate(left), conjugate(right))
    }

    /// Smallest slope over both branches.
    pub fn min_slope(&self) -> Result<Scalar> {
        self.left.min_slope()?.min_certified(&self.right.min_slope()?)
    }

    /// Slopes of a single-piece map as `(left, right)`.
    pub fn affine_slopes(&self) -> Option<(&Scalar, &Scalar)> {
        match (self.left.pieces.as_slice(), self.right.pieces.as_slice()) {
            ([l], [r]) => Some((&l.slope, &r.slope)),
            _ => None,
        }
    }
}

/// Return times `(ℓ, r)` of the left and right halves of a renormalization
/// interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReturnTimes {
    pub left: usize,
    pub right: usize,
}

impl ReturnTimes {
    pub fn new(left: usize, right: usize) -> Self {
        ReturnTimes { left, right }
    }
}

/// Merge adjacent pieces with identical exact coefficients.
fn merge_pieces(pieces: Vec<AffinePiece>) -> Vec<AffinePiece> {
    let mut out: Vec<AffinePiece> = Vec::with_capacity(pieces.len());
    for piece in pieces {
        if let Some(last) = out.last_mut() {
            let same = last.slope.is_exact()
                && last.intercept.is_exact()
                && last.slope == piece.slope
                && last.intercept == piece.intercept;
            if same {
                last.hi = piece.hi;
                continue;
            }
        }
        out.push(piece);
    }
    out
}
