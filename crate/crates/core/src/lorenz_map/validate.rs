use std::fmt;

use serde::Serialize;

use super::{Branch, BranchFn, LorenzMap};
use crate::error::{Error, Result};
use crate::numerics::{precision_cap, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DomainOrder,
    EmptyBranch { branch: Branch },
    BranchDomainMismatch { branch: Branch },
    PiecesNotContiguous { branch: Branch, index: usize },
    DegeneratePiece { branch: Branch, index: usize },
    NotExpanding { branch: Branch, index: usize, slope: Scalar },
    Discontinuous { branch: Branch, index: usize },
    LeftLimitNotB { value: Scalar },
    RightLimitNotA { value: Scalar },
    ImageOutOfRange { branch: Branch },
    Undecidable { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DomainOrder => write!(f, "require a < c < b"),
            Violation::EmptyBranch { branch } => write!(f, "{branch} branch has no pieces"),
            Violation::BranchDomainMismatch { branch } => {
                write!(f, "{branch} branch pieces do not span its domain")
            }
            Violation::PiecesNotContiguous { branch, index } => {
                write!(f, "{branch} piece {index} does not start where the previous one ends")
            }
            Violation::DegeneratePiece { branch, index } => write!(f, "{branch} piece {index} is empty"),
            Violation::NotExpanding { branch, index, slope } => {
                write!(f, "{branch} piece {index} has slope {slope} <= 1")
            }
            Violation::Discontinuous { branch, index } => {
                write!(f, "{branch} branch jumps at the start of piece {index}")
            }
            Violation::LeftLimitNotB { value } => write!(f, "f(c-) = {value}, expected b"),
            Violation::RightLimitNotA { value } => write!(f, "f(c+) = {value}, expected a"),
            Violation::ImageOutOfRange { branch } => write!(f, "{branch} branch leaves [a, b]"),
            Violation::Undecidable { detail } => write!(f, "could not decide: {detail}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks every structural condition of an expanding Lorenz map. Expansion is
/// certified through the sufficient condition that every slope exceeds 1.
pub fn validate_map(map: &LorenzMap) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Err(e) = check(map, &mut report.violations) {
        report.violations.push(Violation::Undecidable { detail: e.to_string() });
    }
    report
}

fn check(map: &LorenzMap, out: &mut Vec<Violation>) -> Result<()> {
    if !(map.a.lt(&map.c)? && map.c.lt(&map.b)?) {
        out.push(Violation::DomainOrder);
        return Ok(());
    }
    let left_ok = check_branch(&map.left, Branch::Left, &map.a, &map.c, out)?;
    let right_ok = check_branch(&map.right, Branch::Right, &map.c, &map.b, out)?;
    if !(left_ok && right_ok) {
        return Ok(());
    }
    let at_c_minus = map.left.value(&map.c)?;
    if !at_c_minus.eq_certified(&map.b)? {
        out.push(Violation::LeftLimitNotB { value: at_c_minus });
    }
    let at_c_plus = map.right.value(&map.c)?;
    if !at_c_plus.eq_certified(&map.a)? {
        out.push(Violation::RightLimitNotA { value: at_c_plus });
    }
    // Branches are increasing, so the images stay in [a, b] iff the outer
    // endpoints do.
    if map.image_of_a().lt(&map.a)? {
        out.push(Violation::ImageOutOfRange { branch: Branch::Left });
    }
    if map.b.lt(&map.image_of_b())? {
        out.push(Violation::ImageOutOfRange { branch: Branch::Right });
    }
    Ok(())
}

/// Returns whether the branch is structurally usable for evaluation.
fn check_branch(fun: &BranchFn, branch: Branch, lo: &Scalar, hi: &Scalar, out: &mut Vec<Violation>) -> Result<bool> {
    if fun.pieces.is_empty() {
        out.push(Violation::EmptyBranch { branch });
        return Ok(false);
    }
    let mut usable = true;
    let first = &fun.pieces[0];
    let last = &fun.pieces[fun.pieces.len() - 1];
    if !first.lo.eq_certified(lo)? || !last.hi.eq_certified(hi)? {
        out.push(Violation::BranchDomainMismatch { branch });
        usable = false;
    }
    for (index, piece) in fun.pieces.iter().enumerate() {
        if !piece.lo.lt(&piece.hi)? {
            out.push(Violation::DegeneratePiece { branch, index });
            usable = false;
        }
        if !Scalar::one().lt(&piece.slope)? {
            out.push(Violation::NotExpanding { branch, index, slope: piece.slope.clone() });
        }
        if index > 0 {
            let prev = &fun.pieces[index - 1];
            if !prev.hi.eq_certified(&piece.lo)? {
                out.push(Violation::PiecesNotContiguous { branch, index });
                usable = false;
            } else if !prev.apply(&prev.hi).eq_certified(&piece.apply(&piece.lo))? {
                out.push(Violation::Discontinuous { branch, index });
            }
        }
    }
    Ok(usable)
}

/// A report whose only failures are undecidable comparisons is a precision
/// failure, not an invalid map.
impl From<ValidationReport> for Error {
    fn from(report: ValidationReport) -> Self {
        let undecidable = |v: &Violation| matches!(v, Violation::Undecidable { .. });
        if !report.violations.is_empty() && report.violations.iter().all(undecidable) {
            Error::PrecisionExhausted { bits: precision_cap() }
        } else {
            Error::InvalidMap(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorenz_map::BranchFn;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn symmetric_three_halves_is_valid() {
        assert!(LorenzMap::symmetric(q(3, 2)).is_ok());
    }

    #[test]
    fn beta_transformation_is_valid() {
        let t = LorenzMap::beta(q(6, 5), q(1, 10)).unwrap();
        assert_eq!(t.c(), &q(3, 4));
        assert_eq!(&(&(&q(6, 5) * t.c()) + &q(1, 10)), &q(1, 1));
    }

    #[test]
    fn contracting_piece_is_reported() {
        let half = q(1, 2);
        let map = LorenzMap::new_unchecked(
            q(0, 1),
            q(1, 1),
            half.clone(),
            BranchFn::affine(q(0, 1), half.clone(), q(9, 10), q(11, 20)),
            BranchFn::affine(half, q(1, 1), q(3, 2), q(-3, 4)),
        );
        let report = validate_map(&map);
        assert_eq!(
            report.violations,
            vec![Violation::NotExpanding { branch: Branch::Left, index: 0, slope: q(9, 10) }]
        );
    }

    #[test]
    fn wrong_boundary_values_are_reported() {
        let half = q(1, 2);
        let map = LorenzMap::new_unchecked(
            q(0, 1),
            q(1, 1),
            half.clone(),
            BranchFn::affine(q(0, 1), half.clone(), q(3, 2), q(0, 1)),
            BranchFn::affine(half, q(1, 1), q(3, 2), q(-1, 2)),
        );
        let report = validate_map(&map);
        assert!(report.violations.contains(&Violation::LeftLimitNotB { value: q(3, 4) }));
        assert!(report.violations.contains(&Violation::RightLimitNotA { value: q(1, 4) }));
    }

    #[test]
    fn beta_above_two_leaves_the_interval() {
        let err = LorenzMap::beta(q(19, 10), q(1, 2)).unwrap_err();
        assert!(
            matches!(err, Error::InvalidMap(r) if r.violations.contains(&Violation::ImageOutOfRange { branch: Branch::Right }))
        );
    }

    #[test]
    fn misordered_domain_is_reported() {
        let map = LorenzMap::new_unchecked(
            q(0, 1),
            q(1, 1),
            q(3, 2),
            BranchFn::affine(q(0, 1), q(1, 2), q(2, 1), q(0, 1)),
            BranchFn::affine(q(1, 2), q(1, 1), q(2, 1), q(-1, 1)),
        );
        assert_eq!(validate_map(&map).violations, vec![Violation::DomainOrder]);
    }
}
