//! Exact sine, cosine and tangent of rational multiples of `2π`.
//!
//! An angle is addressed by an index `j` in a field `Q(ζ_n)` and stands for
//! `j·2π/n`. With `n = 720` the index is twice the angle in degrees, so every
//! half-degree angle lives in the same field. Sines need `i = ζ_n^{n/4}`, hence
//! `4 | n`.

use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::cyclotomic::{CycloContext, CycloElement, CycloError, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrigError {
    #[error("conductor {0} is not divisible by 4, so i is not in the field")]
    NotDivisibleBy4(usize),
    #[error("tangent pole: cos vanishes at index {j} of conductor {n}")]
    TangentPole { j: i64, n: usize },
    #[error("half-angle tangent undefined: sin vanishes at index {j} of conductor {n}")]
    HalfAngleUndefined { j: i64, n: usize },
    #[error(transparent)]
    Field(#[from] CycloError),
}

/// An angle `j·2π/n` in canonical form `0 ≤ j < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AngleIndex {
    j: i64,
    n: u64,
}

impl AngleIndex {
    /// Panics if `n == 0`.
    pub fn new(j: i64, n: u64) -> Self {
        assert!(n > 0, "angle conductor must be positive");
        AngleIndex {
            j: j.rem_euclid(n as i64),
            n,
        }
    }

    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The angle in degrees, `360·j/n`.
    pub fn degrees(&self) -> Rational {
        Rational::new((360 * self.j).into(), (self.n as i64).into())
    }
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// `cos(j·2π/n) = (ζ^j + ζ^{-j})/2`.
pub fn cos_of(ctx: &Arc<CycloContext>, j: i64) -> CycloElement {
    (CycloElement::root_power(ctx, j) + CycloElement::root_power(ctx, -j)).scale(&half())
}

/// `sin(j·2π/n) = (ζ^j - ζ^{-j}) / (2i)` with `i = ζ^{n/4}`.
pub fn sin_of(ctx: &Arc<CycloContext>, j: i64) -> Result<CycloElement, TrigError> {
    let n = ctx.n();
    if n % 4 != 0 {
        return Err(TrigError::NotDivisibleBy4(n));
    }
    // (2ζ^{n/4})^{-1} = ζ^{-n/4}/2, a monomial.
    let q = (n / 4) as i64;
    Ok(
        (CycloElement::root_power(ctx, j - q) - CycloElement::root_power(ctx, -j - q))
            .scale(&half()),
    )
}

pub fn tan_of(ctx: &Arc<CycloContext>, j: i64) -> Result<CycloElement, TrigError> {
    let s = sin_of(ctx, j)?;
    let c = cos_of(ctx, j);
    if c.is_zero() {
        return Err(TrigError::TangentPole { j, n: ctx.n() });
    }
    Ok(s.checked_div(&c)?)
}

/// `tan(θ/2) = (1 - cos θ)/sin θ` for `θ = j·2π/n`.
pub fn tan_half_via_identity(ctx: &Arc<CycloContext>, j: i64) -> Result<CycloElement, TrigError> {
    let s = sin_of(ctx, j)?;
    if s.is_zero() {
        return Err(TrigError::HalfAngleUndefined { j, n: ctx.n() });
    }
    let one = CycloElement::from_rational(ctx, &Rational::one());
    Ok((one - cos_of(ctx, j)).checked_div(&s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{make_context, totient};

    fn ctx(n: usize) -> Arc<CycloContext> {
        make_context(n).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn angle_index() {
        let a = AngleIndex::new(-30, 720);
        assert_eq!(a.j(), 690);
        assert_eq!(a.degrees(), q(345, 1));
        assert_eq!(AngleIndex::new(15, 720).degrees(), q(15, 2));
    }

    #[test]
    fn cosines() {
        let c = ctx(720);
        assert_eq!(cos_of(&c, 120).is_rational(), Some(q(1, 2)));
        assert!(cos_of(&c, 0).is_one());
        let cos45 = cos_of(&c, 90);
        assert_eq!(cos45.is_rational(), None);
        assert!(cos45.is_real());
        assert_eq!((&cos45 * &cos45).is_rational(), Some(q(1, 2)));
    }

    #[test]
    fn sines() {
        let c = ctx(720);
        assert!(sin_of(&c, 180).unwrap().is_one());
        assert_eq!(sin_of(&c, 60).unwrap().is_rational(), Some(q(1, 2)));
        // sin 15° = (√6 - √2)/4 has minimal polynomial 16x⁴ - 16x² + 1.
        let s15 = sin_of(&c, 30).unwrap();
        assert!(s15.is_real());
        let mp = s15.minimal_polynomial();
        let expected: Vec<num_bigint::BigInt> =
            [1, 0, -16, 0, 16].iter().map(|&v: &i64| v.into()).collect();
        assert_eq!(mp.primitive_integer_coeffs(), expected);
        assert_eq!(sin_of(&ctx(12), 1).is_ok(), true);
        assert_eq!(sin_of(&ctx(18), 1).unwrap_err(), TrigError::NotDivisibleBy4(18));
    }

    #[test]
    fn tangents() {
        let c = ctx(720);
        assert!(tan_of(&c, 90).unwrap().is_one());
        assert!(tan_of(&c, 0).unwrap().is_zero());
        assert_eq!(
            tan_of(&c, 180).unwrap_err(),
            TrigError::TangentPole { j: 180, n: 720 }
        );
        // tan 7.5° = tan(π/24) generates Q(ζ₂₄)⁺, of degree φ(24)/2 = 4.
        let t = tan_of(&c, 15).unwrap();
        let mp = t.minimal_polynomial();
        assert_eq!(mp.degree(), totient(24) / 2);
        let expected: Vec<num_bigint::BigInt> =
            [1, -8, 2, 8, 1].iter().map(|&v: &i64| v.into()).collect();
        assert_eq!(mp.primitive_integer_coeffs(), expected);
    }

    #[test]
    fn half_angle_identity() {
        let c = ctx(720);
        assert!(tan_half_via_identity(&c, 180).unwrap().is_one());
        assert_eq!(
            tan_half_via_identity(&c, 120).unwrap(),
            tan_of(&c, 60).unwrap()
        );
        assert_eq!(
            tan_half_via_identity(&c, 0).unwrap_err(),
            TrigError::HalfAngleUndefined { j: 0, n: 720 }
        );
        let c24 = ctx(24);
        let c48 = ctx(48);
        assert_eq!(
            tan_half_via_identity(&c24, 4).unwrap().lift_to(48).unwrap(),
            tan_of(&c48, 4).unwrap()
        );
    }

    #[test]
    fn pythagorean_identity_for_every_index() {
        let c = ctx(720);
        for j in 0..720 {
            let s = sin_of(&c, j).unwrap();
            let co = cos_of(&c, j);
            assert!((&s * &s + &co * &co).is_one(), "j = {j}");
        }
    }

    #[test]
    fn rational_cosines_of_integer_degrees() {
        let c = ctx(720);
        let rational: Vec<(i64, Rational)> = (0..=90)
            .filter_map(|deg| cos_of(&c, 2 * deg).is_rational().map(|v| (deg, v)))
            .collect();
        assert_eq!(
            rational,
            vec![(0, q(1, 1)), (60, q(1, 2)), (90, q(0, 1))]
        );
    }
}
