//! High-precision numeric construction of the figure and estimation of `θ`.
//!
//! This is the prefilter of the search: it proposes half-step candidates and
//! never decides anything on its own. Arithmetic runs on `astro-float` with a
//! binary precision derived from the requested number of decimal digits plus
//! guard bits, so that the estimate is good to well below
//! `10^{-(digits - 10)}`.

use std::cmp::Ordering;
use std::collections::HashMap;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cyclotomic::Rational;
use crate::solver::Triplet;

pub const DEFAULT_DIGITS: u32 = 100;
/// Lowest precision accepted for search runs.
pub const MIN_SEARCH_DIGITS: u32 = 50;

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("degenerate construction for {triplet}: {reason}")]
    Construction { triplet: String, reason: &'static str },
    #[error("cannot measure the angle: {0}")]
    Estimation(&'static str),
    #[error("constants cache unavailable: {0}")]
    Consts(String),
}

/// Binary precision used for a given number of decimal digits.
pub fn precision_bits(digits: u32) -> usize {
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
    bits.div_ceil(WORD_BIT_SIZE) * WORD_BIT_SIZE
}

/// A real number carried at a fixed decimal precision.
#[derive(Clone, Debug)]
pub struct HpReal {
    value: BigFloat,
    digits: u32,
}

impl HpReal {
    pub fn new(value: BigFloat, digits: u32) -> Self {
        HpReal { value, digits }
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        let p = precision_bits(digits);
        HpReal {
            value: bigint_to_float(q.numer(), p).div(&bigint_to_float(q.denom(), p), p, RM),
            digits,
        }
    }

    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn prec(&self) -> usize {
        precision_bits(self.digits)
    }

    pub fn sub_rational(&self, q: &Rational) -> HpReal {
        let other = HpReal::from_rational(q, self.digits);
        HpReal {
            value: self.value.sub(&other.value, self.prec(), RM),
            digits: self.digits,
        }
    }

    pub fn add(&self, other: &HpReal) -> HpReal {
        let digits = self.digits.max(other.digits);
        HpReal {
            value: self.value.add(&other.value, precision_bits(digits), RM),
            digits,
        }
    }

    pub fn sub(&self, other: &HpReal) -> HpReal {
        let digits = self.digits.max(other.digits);
        HpReal {
            value: self.value.sub(&other.value, precision_bits(digits), RM),
            digits,
        }
    }

    /// `|self| < 10^exp`.
    pub fn abs_lt_pow10(&self, exp: i32) -> bool {
        let p = self.prec() + (exp.unsigned_abs() as usize * 4);
        let ten = BigFloat::from(10u64);
        let bound = ten.powi(exp.unsigned_abs() as usize, p, RM);
        let bound = if exp < 0 {
            BigFloat::from(1u64).div(&bound, p, RM)
        } else {
            bound
        };
        self.value.abs().cmp(&bound) == Some(-1)
    }

    /// Nearest integer, ties to even.
    pub fn round_to_integer(&self) -> BigInt {
        float_to_bigint(&self.value.round(0, RM))
    }

    /// Decimal rendering rounded to exactly `places` fractional digits.
    pub fn to_fixed(&self, places: usize) -> String {
        let p = self.prec() + places * 4 + 64;
        let scale = BigFloat::from(10u64).powi(places, p, RM);
        let scaled = float_to_bigint(&self.value.mul(&scale, p, RM).round(0, RM));
        let neg = scaled.is_negative();
        let digits = scaled.abs().to_string();
        let digits = if digits.len() <= places {
            format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = digits.split_at(digits.len() - places);
        let sign = if neg { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_fixed(20).parse().expect("fixed-point rendering parses")
    }
}

fn bigint_to_float(v: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = v.to_u64_digits();
    let mut acc = BigFloat::from(0u64);
    let shift = BigFloat::from(2u64).powi(64, p, RM);
    for d in digits.iter().rev() {
        acc = acc.mul(&shift, p, RM).add(&BigFloat::from(*d), p, RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc.neg()
    } else {
        acc
    }
}

/// Exact conversion of an integer-valued float.
fn float_to_bigint(x: &BigFloat) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let (words, _bits, sign, exp, _) = x
        .as_raw_parts()
        .expect("finite value expected");
    // value = M / 2^(64·len) · 2^exp, mantissa words least significant first.
    let mut m = BigUint::zero();
    for w in words.iter().rev() {
        m = (m << 64) + BigUint::from(*w as u64);
    }
    let shift = exp as i64 - (words.len() * WORD_BIT_SIZE) as i64;
    let mag = if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    };
    let v = BigInt::from(mag);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// A planar point with high-precision coordinates.
#[derive(Clone, Debug)]
pub struct Point {
    pub x: BigFloat,
    pub y: BigFloat,
}

/// Coordinates of the figure: `B = (0,0)`, `C = (1,0)`, apex `A` above `BC`,
/// `D` on `AC`, `E` on `AB`, and `F = BD ∩ CE`.
#[derive(Clone, Debug)]
pub struct FigurePoints {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
    pub e: Point,
    pub f: Point,
    pub unit_n: i64,
}

fn cmp(x: &BigFloat, y: &BigFloat) -> Ordering {
    match x.cmp(y) {
        Some(v) if v < 0 => Ordering::Less,
        Some(0) => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

fn strictly_between_0_1(x: &BigFloat) -> bool {
    x.is_positive() && !x.is_zero() && cmp(x, &BigFloat::from(1u64)) == Ordering::Less
}

/// Per-worker numeric state: precision, constants cache and a table of
/// sines and cosines of half-unit angles.
pub struct Oracle {
    digits: u32,
    prec: usize,
    consts: Consts,
    pi: BigFloat,
    trig: HashMap<(i64, i64), (BigFloat, BigFloat)>,
}

impl Oracle {
    pub fn new(digits: u32) -> Result<Self, OracleError> {
        let prec = precision_bits(digits);
        let mut consts = Consts::new().map_err(|e| OracleError::Consts(format!("{e:?}")))?;
        let pi = consts.pi(prec, RM);
        Ok(Oracle {
            digits,
            prec,
            consts,
            pi,
            trig: HashMap::new(),
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn int(&self, v: i64) -> BigFloat {
        BigFloat::from(v)
    }

    /// `(sin, cos)` of `h·π/(2N)` radians, i.e. `h` half-units.
    fn sin_cos_half_units(&mut self, unit_n: i64, h: i64) -> (BigFloat, BigFloat) {
        if let Some(v) = self.trig.get(&(unit_n, h)) {
            return v.clone();
        }
        let p = self.prec;
        let x = self
            .pi
            .mul(&self.int(h), p, RM)
            .div(&self.int(2 * unit_n), p, RM);
        let s = x.sin(p, RM, &mut self.consts);
        let c = x.cos(p, RM, &mut self.consts);
        self.trig.insert((unit_n, h), (s.clone(), c.clone()));
        (s, c)
    }

    /// Solves `p + s·u = q + t·v`, returning `(s, t)`.
    fn intersect(
        &self,
        p: &Point,
        u: (&BigFloat, &BigFloat),
        q: &Point,
        v: (&BigFloat, &BigFloat),
    ) -> Option<(BigFloat, BigFloat)> {
        let pr = self.prec;
        // s·u - t·v = q - p
        let det = v.0.mul(u.1, pr, RM).sub(&u.0.mul(v.1, pr, RM), pr, RM);
        if det.is_zero() {
            return None;
        }
        let rx = q.x.sub(&p.x, pr, RM);
        let ry = q.y.sub(&p.y, pr, RM);
        let s = v.0.mul(&ry, pr, RM).sub(&v.1.mul(&rx, pr, RM), pr, RM).div(&det, pr, RM);
        let t = u.0.mul(&ry, pr, RM).sub(&u.1.mul(&rx, pr, RM), pr, RM).div(&det, pr, RM);
        Some((s, t))
    }

    fn along(&self, p: &Point, u: (&BigFloat, &BigFloat), s: &BigFloat) -> Point {
        let pr = self.prec;
        Point {
            x: p.x.add(&u.0.mul(s, pr, RM), pr, RM),
            y: p.y.add(&u.1.mul(s, pr, RM), pr, RM),
        }
    }

    fn diff(&self, p: &Point, q: &Point) -> (BigFloat, BigFloat) {
        (q.x.sub(&p.x, self.prec, RM), q.y.sub(&p.y, self.prec, RM))
    }

    pub fn construct(&mut self, t: &Triplet) -> Result<FigurePoints, OracleError> {
        let n = t.unit_n();
        let err = |reason| OracleError::Construction {
            triplet: t.to_string(),
            reason,
        };
        let pr = self.prec;
        let zero = BigFloat::from(0u64);
        let one = BigFloat::from(1u64);
        let half = one.div(&self.int(2), pr, RM);
        let b = Point { x: zero.clone(), y: zero.clone() };
        let c = Point { x: one.clone(), y: zero.clone() };

        // Base angles (N - a)/2 units at B and C.
        let (sb, cb) = self.sin_cos_half_units(n, n - t.a());
        if !cb.is_positive() || cb.is_zero() {
            return Err(err("base angle is not acute"));
        }
        let a = Point {
            x: half.clone(),
            y: sb.div(&cb, pr, RM).mul(&half, pr, RM),
        };
        if !a.y.is_positive() || a.y.is_zero() {
            return Err(err("apex not above BC"));
        }

        let (s_b, c_b) = self.sin_cos_half_units(n, 2 * t.b());
        let (s_c, c_c) = self.sin_cos_half_units(n, 2 * t.c());
        let ac = self.diff(&c, &a);
        let (s, u) = self
            .intersect(&b, (&c_b, &s_b), &c, (&ac.0, &ac.1))
            .ok_or_else(|| err("BD parallel to AC"))?;
        if !s.is_positive() || !strictly_between_0_1(&u) {
            return Err(err("D not interior to AC"));
        }
        let d = self.along(&c, (&ac.0, &ac.1), &u);

        let neg_c_c = c_c.neg();
        let ba = self.diff(&b, &a);
        let (s, u) = self
            .intersect(&c, (&neg_c_c, &s_c), &b, (&ba.0, &ba.1))
            .ok_or_else(|| err("CE parallel to AB"))?;
        if !s.is_positive() || !strictly_between_0_1(&u) {
            return Err(err("E not interior to AB"));
        }
        let e = self.along(&b, (&ba.0, &ba.1), &u);

        let bd = self.diff(&b, &d);
        let ce = self.diff(&c, &e);
        let (s, u) = self
            .intersect(&b, (&bd.0, &bd.1), &c, (&ce.0, &ce.1))
            .ok_or_else(|| err("BD parallel to CE"))?;
        if !strictly_between_0_1(&s) || !strictly_between_0_1(&u) {
            return Err(err("F not interior to BD and CE"));
        }
        let f = self.along(&b, (&bd.0, &bd.1), &s);

        Ok(FigurePoints { a, b, c, d, e, f, unit_n: n })
    }

    /// `atan2(y, x)` for `y ≥ 0`, in `[0, π]`.
    fn atan2_upper(&mut self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        let p = self.prec;
        if x.is_zero() {
            return self.pi.div(&self.int(2), p, RM);
        }
        let r = y.div(&x.abs(), p, RM).atan(p, RM, &mut self.consts);
        if x.is_negative() {
            self.pi.sub(&r, p, RM)
        } else {
            r
        }
    }

    /// The angle `∠p vertex q` in units of `π/N`, in `[0, N]`.
    pub fn angle_units(
        &mut self,
        vertex: &Point,
        p: &Point,
        q: &Point,
        unit_n: i64,
    ) -> Result<HpReal, OracleError> {
        let pr = self.prec;
        let u = self.diff(vertex, p);
        let v = self.diff(vertex, q);
        if (u.0.is_zero() && u.1.is_zero()) || (v.0.is_zero() && v.1.is_zero()) {
            return Err(OracleError::Estimation("coincident points"));
        }
        let cross = u.0.mul(&v.1, pr, RM).sub(&u.1.mul(&v.0, pr, RM), pr, RM).abs();
        let dot = u.0.mul(&v.0, pr, RM).add(&u.1.mul(&v.1, pr, RM), pr, RM);
        let rad = self.atan2_upper(&cross, &dot);
        let units = rad.mul(&self.int(unit_n), pr, RM).div(&self.pi, pr, RM);
        Ok(HpReal::new(units, self.digits))
    }

    pub fn distance(&self, p: &Point, q: &Point) -> HpReal {
        let pr = self.prec;
        let (dx, dy) = self.diff(p, q);
        let sq = dx.mul(&dx, pr, RM).add(&dy.mul(&dy, pr, RM), pr, RM);
        HpReal::new(sq.sqrt(pr, RM), self.digits)
    }

    /// `θ = ∠EDB` in units, strictly inside `(0, N)` for a valid figure.
    pub fn estimate_theta(&mut self, fig: &FigurePoints) -> Result<HpReal, OracleError> {
        let theta = self.angle_units(&fig.d, &fig.e, &fig.b, fig.unit_n)?;
        if theta.value.is_zero() {
            return Err(OracleError::Estimation("E, D and B are collinear"));
        }
        Ok(theta)
    }

    pub fn theta(&mut self, t: &Triplet) -> Result<HpReal, OracleError> {
        let fig = self.construct(t)?;
        self.estimate_theta(&fig)
    }
}

/// One-shot construction with a fresh oracle.
pub fn construct(t: &Triplet, digits: u32) -> Result<FigurePoints, OracleError> {
    Oracle::new(digits)?.construct(t)
}

/// One-shot estimate with a fresh oracle.
pub fn estimate_theta(fig: &FigurePoints, digits: u32) -> Result<HpReal, OracleError> {
    Oracle::new(digits)?.estimate_theta(fig)
}

/// The half-step index `j = round(2θ̂)` if `|2θ̂ - j| < tol`.
///
/// Panics unless `0 < tol < 1/4`.
pub fn near_half_step(theta: &HpReal, tol: f64) -> Option<i64> {
    assert!(tol > 0.0 && tol < 0.25, "tolerance must lie in (0, 1/4)");
    let p = theta.prec();
    let twice = theta.value.mul(&BigFloat::from(2u64), p, RM);
    let j = twice.round(0, RM);
    let gap = twice.sub(&j, p, RM).abs();
    if cmp(&gap, &BigFloat::from(tol)) != Ordering::Less {
        return None;
    }
    i64::try_from(float_to_bigint(&j)).ok()
}
