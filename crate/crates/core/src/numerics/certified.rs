//! Lazily refined real numbers with rigorous rational enclosures.
//!
//! A [`CertifiedReal`] is an expression DAG whose leaves are exact rationals or
//! square roots of rationals. Evaluating it at `p` bits yields a [`Ball`]
//! (midpoint and radius) guaranteed to contain the true value, with the radius
//! shrinking as `p` grows. Comparisons refine until the balls separate.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rational enclosure `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub mid: BigRational,
    pub rad: BigRational,
}

impl Ball {
    fn exact(value: BigRational) -> Self {
        Ball { mid: value, rad: BigRational::zero() }
    }

    pub fn lower(&self) -> BigRational {
        &self.mid - &self.rad
    }

    pub fn upper(&self) -> BigRational {
        &self.mid + &self.rad
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    fn from_bounds(lo: BigRational, hi: BigRational) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let mid = (&lo + &hi) / &two;
        let rad = (&hi - &lo) / &two;
        Ball { mid, rad }
    }

    /// Snap the midpoint to a multiple of `2^-bits` and the radius upwards to
    /// one, so coefficient sizes stay bounded at a fixed precision.
    fn rounded(self, bits: u32) -> Self {
        if self.mid.denom().bits() <= u64::from(bits) && self.rad.denom().bits() <= u64::from(bits) {
            return self;
        }
        let scale = BigInt::one() << bits;
        let scaled = &self.mid * BigRational::from_integer(scale.clone());
        let snapped = BigRational::new(scaled.round().to_integer(), scale.clone());
        let slack = (&self.mid - &snapped).abs() + &self.rad;
        let rad_scaled = (slack * BigRational::from_integer(scale.clone())).ceil().to_integer();
        Ball { mid: snapped, rad: BigRational::new(rad_scaled, scale) }
    }
}

/// Raised when a precision level is too coarse to evaluate a node (a divisor
/// ball still contains zero). The caller refines and retries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unresolved;

enum Node {
    Rational(BigRational),
    Sqrt(BigRational),
    Neg(CertifiedReal),
    Add(CertifiedReal, CertifiedReal),
    Sub(CertifiedReal, CertifiedReal),
    Mul(CertifiedReal, CertifiedReal),
    Div(CertifiedReal, CertifiedReal),
}

struct Inner {
    node: Node,
    cache: Mutex<Vec<(u32, Ball)>>,
}

/// A real number known through arbitrarily tight rational enclosures.
#[derive(Clone)]
pub struct CertifiedReal(Arc<Inner>);

const GUARD_BITS: u32 = 4;
const CACHE_SLOTS: usize = 4;

impl CertifiedReal {
    fn from_node(node: Node) -> Self {
        CertifiedReal(Arc::new(Inner { node, cache: Mutex::new(Vec::new()) }))
    }

    pub fn rational(value: BigRational) -> Self {
        Self::from_node(Node::Rational(value))
    }

    /// Square root of a nonnegative rational. Returns `None` for negative input.
    pub fn sqrt(value: BigRational) -> Option<Self> {
        if value.is_negative() {
            return None;
        }
        Some(Self::from_node(Node::Sqrt(value)))
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn neg(&self) -> Self {
        Self::from_node(Node::Neg(self.clone()))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_node(Node::Add(self.clone(), rhs.clone()))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_node(Node::Sub(self.clone(), rhs.clone()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::from_node(Node::Mul(self.clone(), rhs.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Self {
        Self::from_node(Node::Div(self.clone(), rhs.clone()))
    }

    /// Enclosure at `bits` of working precision.
    pub fn ball(&self, bits: u32) -> Result<Ball, Unresolved> {
        if let Ok(cache) = self.0.cache.lock() {
            if let Some((_, b)) = cache.iter().find(|(p, _)| *p == bits) {
                return Ok(b.clone());
            }
        }
        let ball = self.compute(bits)?;
        if let Ok(mut cache) = self.0.cache.lock() {
            if cache.len() >= CACHE_SLOTS {
                cache.remove(0);
            }
            cache.push((bits, ball.clone()));
        }
        Ok(ball)
    }

    fn compute(&self, bits: u32) -> Result<Ball, Unresolved> {
        let inner = bits + GUARD_BITS;
        let ball = match &self.0.node {
            Node::Rational(q) => return Ok(Ball::exact(q.clone())),
            Node::Sqrt(q) => sqrt_ball(q, bits),
            Node::Neg(x) => {
                let b = x.ball(bits)?;
                return Ok(Ball { mid: -b.mid, rad: b.rad });
            }
            Node::Add(x, y) => {
                let (bx, by) = (x.ball(inner)?, y.ball(inner)?);
                Ball { mid: bx.mid + by.mid, rad: bx.rad + by.rad }
            }
            Node::Sub(x, y) => {
                let (bx, by) = (x.ball(inner)?, y.ball(inner)?);
                Ball { mid: bx.mid - by.mid, rad: bx.rad + by.rad }
            }
            Node::Mul(x, y) => {
                let (bx, by) = (x.ball(inner)?, y.ball(inner)?);
                mul_balls(&bx, &by)
            }
            Node::Div(x, y) => {
                let (bx, by) = (x.ball(inner)?, y.ball(inner)?);
                if by.contains_zero() {
                    return Err(Unresolved);
                }
                let (lo, hi) = (by.lower(), by.upper());
                // 1/y over a sign-definite interval is monotone decreasing.
                let recip = Ball::from_bounds(hi.recip(), lo.recip());
                mul_balls(&bx, &recip)
            }
        };
        Ok(ball.rounded(bits))
    }

    /// Decimal rendering of the midpoint at the given precision, truncated to
    /// `digits` fractional digits.
    pub fn to_decimal_string(&self, bits: u32, digits: usize) -> String {
        match self.ball(bits) {
            Ok(b) => decimal_string(&b.mid, digits),
            Err(Unresolved) => "unresolved".to_string(),
        }
    }
}

fn mul_balls(x: &Ball, y: &Ball) -> Ball {
    let mid = &x.mid * &y.mid;
    let rad = x.mid.abs() * &y.rad + y.mid.abs() * &x.rad + &x.rad * &y.rad;
    Ball { mid, rad }
}

fn sqrt_ball(q: &BigRational, bits: u32) -> Ball {
    // floor(sqrt(q * 4^bits)) = s gives sqrt(q) in [s, s+1] / 2^bits.
    let scaled = (q.numer() << (2 * bits as usize)) / q.denom();
    let s = scaled.sqrt();
    let scale = BigInt::one() << bits;
    let lo = BigRational::new(s.clone(), scale.clone());
    let hi = BigRational::new(s + BigInt::one(), scale);
    Ball::from_bounds(lo, hi)
}

pub(crate) fn decimal_string(value: &BigRational, digits: usize) -> String {
    let negative = value.is_negative();
    let abs = value.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let mut out = String::new();
    if negative && scaled.sign() != Sign::NoSign {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", frac_part.to_string(), width = digits));
    }
    out
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CertifiedReal(~{})", self.to_decimal_string(64, 12))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sqrt_two_enclosure_shrinks() {
        let r = CertifiedReal::sqrt(q(2, 1)).unwrap();
        let coarse = r.ball(16).unwrap();
        let fine = r.ball(256).unwrap();
        assert!(fine.rad < coarse.rad);
        let two = q(2, 1);
        assert!(&coarse.lower() * &coarse.lower() <= two);
        assert!(&coarse.upper() * &coarse.upper() >= two);
        assert!(&fine.lower() * &fine.lower() <= two);
        assert!(&fine.upper() * &fine.upper() >= two);
    }

    #[test]
    fn division_by_a_ball_around_zero_is_unresolved() {
        let s = CertifiedReal::sqrt(q(2, 1)).unwrap();
        let zero_ish = s.mul(&s).sub(&CertifiedReal::rational(q(2, 1)));
        let one = CertifiedReal::rational(q(1, 1));
        assert_eq!(one.div(&zero_ish).ball(64), Err(Unresolved));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&q(1, 3), 4), "0.3333");
        assert_eq!(decimal_string(&q(-7, 2), 2), "-3.50");
        let r = CertifiedReal::sqrt(q(2, 1)).unwrap();
        assert_eq!(r.to_decimal_string(128, 10), "1.4142135623");
    }
}
