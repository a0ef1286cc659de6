//! The adventitious configuration and exact determination of the derived angle.
//!
//! Angles are integers in a unit of `π/N` radians (`N = 180` for degrees). All
//! exact work happens in `Q(ζ_{4N})`, where one index step is half a unit; this
//! field contains `i`, every input angle, every half of the apex angle and every
//! half-step candidate for `θ`.
//!
//! Certification compares both sides of the sine-ratio identity
//!
//! ```text
//! sin θ / sin(b + c - θ) = cos(b + a/2) sin c cos(b - a/2) / (cos(c - a/2) sin b cos(c + a/2))
//! ```
//!
//! cross-multiplied. The left side is strictly increasing in `θ` on `(0, b + c)`,
//! so at most one candidate can pass. The tangent formula obtained from the sine
//! rule is kept as a projective pair and used as a second witness.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{make_context, CycloContext, CycloElement, CycloError, Rational};
use crate::oracle::{near_half_step, HpReal};
use crate::trig::{cos_of, sin_of, TrigError};

pub const DEGREES: i64 = 180;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("invalid triplet ({a}, {b}, {c}) in units of pi/{unit_n}: {reason}")]
    InvalidTriplet {
        a: i64,
        b: i64,
        c: i64,
        unit_n: i64,
        reason: &'static str,
    },
    #[error("candidate {candidate} half-steps is outside (0, {limit})")]
    InvalidCandidate { candidate: String, limit: i64 },
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error(transparent)]
    Field(#[from] CycloError),
}

/// A problem instance `(a, b, c)` in units of `π/N`.
///
/// `a` is the apex angle of the isosceles triangle `ABC`, `b = ∠DBC` with `D`
/// on `AC`, and `c = ∠ECB` with `E` on `AB`. Both cevian angles lie strictly
/// below the base angle `(N - a)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTriplet")]
pub struct Triplet {
    a: i64,
    b: i64,
    c: i64,
    #[serde(rename = "unit_N")]
    unit_n: i64,
}

#[derive(Deserialize)]
struct RawTriplet {
    a: i64,
    b: i64,
    c: i64,
    #[serde(rename = "unit_N")]
    unit_n: i64,
}

impl TryFrom<RawTriplet> for Triplet {
    type Error = SolverError;
    fn try_from(r: RawTriplet) -> Result<Self, Self::Error> {
        Triplet::new(r.a, r.b, r.c, r.unit_n)
    }
}

impl Triplet {
    /// Validates the geometry; `b = c` and `b < c` are accepted.
    pub fn new(a: i64, b: i64, c: i64, unit_n: i64) -> Result<Self, SolverError> {
        let err = |reason| SolverError::InvalidTriplet {
            a,
            b,
            c,
            unit_n,
            reason,
        };
        if unit_n < 1 {
            return Err(err("unit denominator must be positive"));
        }
        if a < 1 || b < 1 || c < 1 {
            return Err(err("angles must be at least one unit"));
        }
        if a >= unit_n {
            return Err(err("apex angle must be below pi"));
        }
        if 2 * b >= unit_n - a || 2 * c >= unit_n - a {
            return Err(err("cevian angles must be below the base angle"));
        }
        Ok(Triplet { a, b, c, unit_n })
    }

    pub fn degrees(a: i64, b: i64, c: i64) -> Result<Self, SolverError> {
        Self::new(a, b, c, DEGREES)
    }

    /// Like [`Triplet::new`] but also requires the canonical orientation `b > c`.
    pub fn canonical(a: i64, b: i64, c: i64, unit_n: i64) -> Result<Self, SolverError> {
        let t = Self::new(a, b, c, unit_n)?;
        if b <= c {
            return Err(SolverError::InvalidTriplet {
                a,
                b,
                c,
                unit_n,
                reason: "canonical orientation requires b > c",
            });
        }
        Ok(t)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn unit_n(&self) -> i64 {
        self.unit_n
    }

    pub fn is_canonical(&self) -> bool {
        self.b > self.c
    }

    /// The mirror image `(a, c, b)`.
    pub fn mirror(&self) -> Triplet {
        Triplet {
            b: self.c,
            c: self.b,
            ..*self
        }
    }

    /// Conductor of the working field, `4N`.
    pub fn conductor(&self) -> usize {
        4 * self.unit_n as usize
    }

    /// Exclusive upper bound for `θ` in half-steps, `2(b + c)`.
    pub fn half_step_limit(&self) -> i64 {
        2 * (self.b + self.c)
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit_n == DEGREES {
            write!(f, "({}, {}, {})", self.a, self.b, self.c)
        } else {
            write!(f, "({}, {}, {}) x pi/{}", self.a, self.b, self.c, self.unit_n)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Integral,
    HalfIntegral,
    NotRational,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Integral => "integral",
            Classification::HalfIntegral => "half_integral",
            Classification::NotRational => "not_rational",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The classified derived angle. `half_steps = j` means `θ = j/2` units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedAngle {
    pub half_steps: Option<i64>,
    pub classification: Classification,
    pub certified: bool,
}

impl DerivedAngle {
    pub fn not_rational() -> Self {
        DerivedAngle {
            half_steps: None,
            classification: Classification::NotRational,
            certified: false,
        }
    }

    fn certified(j: i64) -> Self {
        DerivedAngle {
            half_steps: Some(j),
            classification: if j % 2 == 0 {
                Classification::Integral
            } else {
                Classification::HalfIntegral
            },
            certified: true,
        }
    }

    /// `θ` in units, when certified.
    pub fn units(&self) -> Option<Rational> {
        self.half_steps
            .map(|j| Rational::new(j.into(), 2.into()))
    }
}

/// Trig values of multiples of a half-step in some `Q(ζ_M)` with `4N | M`.
struct Frame {
    ctx: Arc<CycloContext>,
    /// Field index steps per half-step.
    scale: i64,
}

impl Frame {
    fn half_steps(t: &Triplet) -> Result<Self, SolverError> {
        Ok(Frame {
            ctx: make_context(t.conductor())?,
            scale: 1,
        })
    }

    /// Field fine enough for multiples of `1/(2·scale)` units.
    fn scaled(t: &Triplet, scale: i64) -> Result<Self, SolverError> {
        Ok(Frame {
            ctx: make_context(t.conductor() * scale as usize)?,
            scale,
        })
    }

    fn sin(&self, half_steps: i64) -> Result<CycloElement, SolverError> {
        Ok(sin_of(&self.ctx, half_steps * self.scale)?)
    }

    fn cos(&self, half_steps: i64) -> CycloElement {
        cos_of(&self.ctx, half_steps * self.scale)
    }

    fn sin_index(&self, idx: i64) -> Result<CycloElement, SolverError> {
        Ok(sin_of(&self.ctx, idx)?)
    }

    fn cos_index(&self, idx: i64) -> CycloElement {
        cos_of(&self.ctx, idx)
    }

    /// Numerator and denominator of the sine-ratio right-hand side.
    fn quadling(&self, t: &Triplet) -> Result<(CycloElement, CycloElement), SolverError> {
        // Half-steps: a/2 units = a half-steps, b units = 2b half-steps.
        let (a, b2, c2) = (t.a, 2 * t.b, 2 * t.c);
        let num = &(&self.cos(b2 + a) * &self.sin(c2)?) * &self.cos(b2 - a);
        let den = &(&self.cos(c2 - a) * &self.sin(b2)?) * &self.cos(c2 + a);
        Ok((num, den))
    }

    fn tan_theta(&self, t: &Triplet) -> Result<(CycloElement, CycloElement), SolverError> {
        let (a2, b2, c2) = (2 * t.a, 2 * t.b, 2 * t.c);
        let cos_a = self.cos(a2);
        let sin_c = self.sin(c2)?;
        let with_b = &cos_a + &self.cos(2 * b2);
        let with_c = &cos_a + &self.cos(2 * c2);
        let num = &(&self.sin(b2 + c2)? * &sin_c) * &with_b;
        let den = &(&self.sin(b2)? * &with_c) + &(&(&self.cos(b2 + c2) * &sin_c) * &with_b);
        Ok((num, den))
    }
}

/// `tan θ` as a projective pair `(num, den)` in `Q(ζ_{4N})`; `den = 0` encodes `θ = 90°`.
pub fn tan_theta_pair(t: &Triplet) -> Result<(CycloElement, CycloElement), SolverError> {
    Frame::half_steps(t)?.tan_theta(t)
}

/// The right-hand side of the sine-ratio identity as `(num, den)` in `Q(ζ_{4N})`.
pub fn quadling_ratio(t: &Triplet) -> Result<(CycloElement, CycloElement), SolverError> {
    Frame::half_steps(t)?.quadling(t)
}

/// Exactly decides whether `θ = j/2` units.
pub fn certify_theta(t: &Triplet, j: i64) -> Result<bool, SolverError> {
    let limit = t.half_step_limit();
    if j <= 0 || j >= limit {
        return Err(SolverError::InvalidCandidate {
            candidate: j.to_string(),
            limit,
        });
    }
    let frame = Frame::half_steps(t)?;
    let (num, den) = frame.quadling(t)?;
    Ok(&frame.sin(j)? * &den == &frame.sin(limit - j)? * &num)
}

/// Exactly decides whether `θ` equals the given rational number of units, for
/// any denominator. The identity is evaluated in `Q(ζ_{2N·lcm(2, q)})`.
pub fn certify_theta_at(t: &Triplet, theta_units: &Rational) -> Result<bool, SolverError> {
    let limit = t.half_step_limit();
    let twice = theta_units * Rational::from_integer(2.into());
    if !twice.is_positive() || twice >= Rational::from_integer(limit.into()) {
        return Err(SolverError::InvalidCandidate {
            candidate: format!("{twice}"),
            limit,
        });
    }
    let q = theta_units
        .denom()
        .to_i64()
        .expect("candidate denominator fits in i64");
    let l = q.lcm(&2);
    let frame = Frame::scaled(t, l / 2)?;
    // θ in field indices: θ units · l.
    let idx = (theta_units * Rational::from_integer(l.into()))
        .to_integer()
        .to_i64()
        .expect("candidate index fits in i64");
    let total = limit * frame.scale;
    let (num, den) = frame.quadling(t)?;
    Ok(&frame.sin_index(idx)? * &den == &frame.sin_index(total - idx)? * &num)
}

/// Second witness: does the tangent pair agree with `θ = j/2` units?
pub fn tripp_agrees(t: &Triplet, j: i64) -> Result<bool, SolverError> {
    let frame = Frame::half_steps(t)?;
    let (num, den) = frame.tan_theta(t)?;
    Ok(&num * &frame.cos_index(j) == &den * &frame.sin_index(j)?)
}

/// Classifies `θ` from a numeric estimate (in units): the nearest half-step is
/// proposed when within `tol` and then certified exactly.
pub fn derive_theta(t: &Triplet, estimate: &HpReal, tol: f64) -> Result<DerivedAngle, SolverError> {
    match near_half_step(estimate, tol) {
        Some(j) if certify_theta(t, j)? => Ok(DerivedAngle::certified(j)),
        _ => Ok(DerivedAngle::not_rational()),
    }
}

/// The certified derived angle of the mirror triplet `(a, c, b)`, in half-steps.
pub fn mirror_theta(t: &Triplet, j: i64) -> i64 {
    t.half_step_limit() - j
}

/// Both parts of the sine ratio are non-zero field elements.
pub fn quadling_nonzero(t: &Triplet) -> Result<bool, SolverError> {
    let (num, den) = quadling_ratio(t)?;
    Ok(!num.is_zero() && !den.is_zero())
}

/// Arguments of the cosine factors of the sine-ratio identity, in half-steps.
/// All lie strictly inside `(-N, N)` half-steps (i.e. `(-90°, 90°)`) for a
/// valid triplet, and `sin b`, `sin c` have arguments in `(0, N)`, so both
/// parts of the ratio are positive.
pub fn quadling_cosine_arguments(t: &Triplet) -> [i64; 4] {
    let (a, b2, c2) = (t.a, 2 * t.b, 2 * t.c);
    [b2 + a, b2 - a, c2 - a, c2 + a]
}

impl Triplet {
    /// Whether all factors of the sine-ratio identity are provably positive.
    pub fn quadling_factors_positive(&self) -> bool {
        let n = self.unit_n;
        quadling_cosine_arguments(self)
            .iter()
            .all(|&h| -n < h && h < n)
            && 0 < 2 * self.b
            && 2 * self.b < 2 * n
            && 0 < 2 * self.c
            && 2 * self.c < 2 * n
    }
}
