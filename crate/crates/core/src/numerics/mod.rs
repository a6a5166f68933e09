//! Exact scalars, certified comparisons, and intervals.

mod certified;
mod interval;
mod scalar;

pub use certified::{Ball, CertifiedReal, Unresolved};
pub use interval::{interval_contains, Interval};
pub use scalar::{
    cmp_certified, cmp_certified_with, parse_rational, precision_cap, rational_decimal, set_precision_cap,
    sort_scalars_by, Scalar, DEFAULT_PRECISION_BITS,
};
