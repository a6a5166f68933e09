use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::certified::{decimal_string, CertifiedReal};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 4096;
const START_BITS: u32 = 64;
const DECIMAL_DIGITS: usize = 30;

static PRECISION_CAP: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_BITS);

/// Process-wide cap used by [`cmp_certified`].
pub fn precision_cap() -> u32 {
    PRECISION_CAP.load(AtomicOrdering::Relaxed)
}

pub fn set_precision_cap(bits: u32) {
    PRECISION_CAP.store(bits.max(START_BITS), AtomicOrdering::Relaxed);
}

/// A point coordinate: an exact rational, or a certified real.
#[derive(Clone)]
pub enum Scalar {
    Exact(BigRational),
    Certified(CertifiedReal),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn integer(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Square root of a rational; exact when the argument is a rational square.
    pub fn sqrt_of(value: &BigRational) -> Option<Self> {
        if value.is_negative() {
            return None;
        }
        let (n, d) = (value.numer(), value.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            return Some(Scalar::Exact(BigRational::new(rn, rd)));
        }
        CertifiedReal::sqrt(value.clone()).map(Scalar::Certified)
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Certified(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    fn to_certified(&self) -> CertifiedReal {
        match self {
            Scalar::Exact(q) => CertifiedReal::rational(q.clone()),
            Scalar::Certified(r) => r.clone(),
        }
    }

    pub fn cmp_certified(&self, other: &Scalar) -> Result<Ordering> {
        cmp_certified(self, other)
    }

    pub fn lt(&self, other: &Scalar) -> Result<bool> {
        Ok(cmp_certified(self, other)? == Ordering::Less)
    }

    pub fn le(&self, other: &Scalar) -> Result<bool> {
        Ok(cmp_certified(self, other)? != Ordering::Greater)
    }

    pub fn eq_certified(&self, other: &Scalar) -> Result<bool> {
        Ok(cmp_certified(self, other)? == Ordering::Equal)
    }

    pub fn min_certified(&self, other: &Scalar) -> Result<Scalar> {
        Ok(if self.le(other)? { self.clone() } else { other.clone() })
    }

    pub fn max_certified(&self, other: &Scalar) -> Result<Scalar> {
        Ok(if self.le(other)? { other.clone() } else { self.clone() })
    }

    /// Canonical text form: `"p/q"` for rationals, a decimal approximation for
    /// certified reals.
    pub fn to_text(&self) -> String {
        match self {
            Scalar::Exact(q) => format!("{}/{}", q.numer(), q.denom()),
            Scalar::Certified(r) => r.to_decimal_string(precision_cap().min(512), DECIMAL_DIGITS),
        }
    }
}

/// Certified three-way comparison.
///
/// Rational pairs compare exactly. Otherwise the difference is refined from 64
/// bits, doubling, up to the configured cap; failure to separate is an error.
pub fn cmp_certified(x: &Scalar, y: &Scalar) -> Result<Ordering> {
    cmp_certified_with(x, y, precision_cap())
}

pub fn cmp_certified_with(x: &Scalar, y: &Scalar, cap_bits: u32) -> Result<Ordering> {
    if let (Scalar::Exact(a), Scalar::Exact(b)) = (x, y) {
        return Ok(a.cmp(b));
    }
    if let (Scalar::Certified(a), Scalar::Certified(b)) = (x, y) {
        if a.ptr_eq(b) {
            return Ok(Ordering::Equal);
        }
    }
    let diff = x.to_certified().sub(&y.to_certified());
    let mut bits = START_BITS;
    loop {
        if let Ok(ball) = diff.ball(bits) {
            if ball.rad.is_zero() {
                return Ok(ball.mid.cmp(&BigRational::zero()));
            }
            if !ball.contains_zero() {
                return Ok(if ball.mid.is_positive() { Ordering::Greater } else { Ordering::Less });
            }
        }
        if bits >= cap_bits {
            return Err(Error::PrecisionExhausted { bits: cap_bits });
        }
        bits = (bits * 2).min(cap_bits);
    }
}

/// Sort a slice with certified comparisons, reporting the first failure.
pub fn sort_scalars_by<T, F>(items: &mut [T], key: F) -> Result<()>
where
    F: Fn(&T) -> &Scalar,
{
    let mut failure = None;
    items.sort_by(|a, b| match cmp_certified(key(a), key(b)) {
        Ok(o) => o,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    failure.map_or(Ok(()), Err)
}

impl PartialEq for Scalar {
    /// Structural equality: rationals by value, certified reals by identity.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Certified(a), Scalar::Certified(b)) => a.ptr_eq(b),
            _ => false,
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Exact(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::integer(n)
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $cert:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.$method(b)),
                    _ => Scalar::Certified(self.to_certified().$cert(&rhs.to_certified())),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binary_op!(Add, add, add);
binary_op!(Sub, sub, sub);
binary_op!(Mul, mul, mul);
binary_op!(Div, div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Certified(r) => Scalar::Certified(r.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(_) => write!(f, "{}", self.to_text()),
            Scalar::Certified(r) => write!(f, "{r:?}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            Scalar::Exact(_) => serializer.serialize_str(&self.to_text()),
            Scalar::Certified(r) => {
                let bits = precision_cap().min(512);
                let mut s = serializer.serialize_struct("CertifiedScalar", 2)?;
                s.serialize_field("decimal", &r.to_decimal_string(bits, DECIMAL_DIGITS))?;
                s.serialize_field("precision_bits", &bits)?;
                s.end()
            }
        }
    }
}

/// Parses `"p/q"`, integers, finite decimals (exactly, as rationals), and
/// `"sqrt(p/q)"` (as a certified real).
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(arg) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let inner = parse_rational(arg)?;
            return Scalar::sqrt_of(&inner)
                .ok_or_else(|| Error::Parse(format!("square root of negative value '{arg}'")));
        }
        parse_rational(s).map(Scalar::Exact)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid number '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = frac.len();
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int_val: BigInt = match int {
            "" | "-" | "+" => BigInt::zero(),
            _ => int.parse().map_err(|_| bad())?,
        };
        let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), digits);
        let magnitude = int_val.abs() * &scale + frac_val;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(numer, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Decimal approximation of an exact rational, for human-facing output.
pub fn rational_decimal(q: &BigRational, digits: usize) -> String {
    decimal_string(q, digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_halves_are_equal() {
        assert_eq!(cmp_certified(&Scalar::ratio(1, 2), &Scalar::ratio(1, 2)).unwrap(), Ordering::Equal);
    }

    #[test]
    fn squares_of_decimal_approximations_of_root_two() {
        let lo = Scalar::ratio(141, 100);
        let hi = Scalar::ratio(142, 100);
        let two = Scalar::integer(2);
        assert_eq!(&lo * &lo, Scalar::ratio(19881, 10000));
        assert_eq!(cmp_certified(&(&lo * &lo), &two).unwrap(), Ordering::Less);
        assert_eq!(&hi * &hi, Scalar::ratio(20164, 10000));
        assert_eq!(cmp_certified(&(&hi * &hi), &two).unwrap(), Ordering::Greater);
    }

    #[test]
    fn rationals_are_stored_in_lowest_terms() {
        let x = Scalar::ratio(6, -4);
        let q = x.as_exact().unwrap();
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
    }

    #[test]
    fn certified_root_separates_from_rationals() {
        let r = Scalar::sqrt_of(&parse_rational("2").unwrap()).unwrap();
        assert!(!r.is_exact());
        assert_eq!(cmp_certified(&r, &Scalar::ratio(141, 100)).unwrap(), Ordering::Greater);
        assert_eq!(cmp_certified(&r, &Scalar::ratio(142, 100)).unwrap(), Ordering::Less);
    }

    #[test]
    fn certified_tie_exhausts_precision() {
        let r = Scalar::sqrt_of(&parse_rational("2").unwrap()).unwrap();
        let square = &r * &r;
        let err = cmp_certified_with(&square, &Scalar::integer(2), 512).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted { bits: 512 }));
    }

    #[test]
    fn perfect_square_roots_stay_exact() {
        let r = Scalar::sqrt_of(&parse_rational("9/4").unwrap()).unwrap();
        assert_eq!(r, Scalar::ratio(3, 2));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("6/5".parse::<Scalar>().unwrap(), Scalar::ratio(6, 5));
        assert_eq!("1.07".parse::<Scalar>().unwrap(), Scalar::ratio(107, 100));
        assert_eq!("-0.5".parse::<Scalar>().unwrap(), Scalar::ratio(-1, 2));
        assert_eq!("3".parse::<Scalar>().unwrap(), Scalar::integer(3));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("sqrt(-1)".parse::<Scalar>().is_err());
    }

    #[test]
    fn text_form_is_always_p_over_q() {
        assert_eq!(Scalar::zero().to_text(), "0/1");
        assert_eq!(Scalar::integer(2).to_text(), "2/1");
        assert_eq!(Scalar::ratio(3, 11).to_text(), "3/11");
    }
}
