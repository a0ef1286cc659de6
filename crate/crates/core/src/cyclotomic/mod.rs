//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(n)-1}`, reduced modulo
//! the cyclotomic polynomial `Φ_n`. Internally the rational coefficients share a
//! single positive denominator, so that products and reductions run on integers;
//! the representation is kept canonical (numerators and denominator coprime) and
//! equality is structural.
//!
//! Every element carries its field. Mixing elements of different conductors is
//! an error: callers embed explicitly with [`CycloElement::lift_to`].

mod minpoly;
mod phi;
mod poly;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use minpoly::MinimalPolynomial;
pub use phi::{cyclotomic_polynomial, divisors, totient};
pub(crate) use phi::poly_mul;

use poly::QPoly;

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("cyclotomic conductor must be positive")]
    InvalidConductor,
    #[error("conductor mismatch ({left} vs {right}); lift both operands to a common field first")]
    ConductorMismatch { left: usize, right: usize },
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(usize),
    #[error("zeta -> zeta^{k} is not an automorphism of Q(zeta_{n})")]
    InvalidAutomorphism { k: i64, n: usize },
    #[error("Q(zeta_{m}) is not a subfield of Q(zeta_{n})")]
    InvalidSubfield { m: usize, n: usize },
    #[error("cannot lift from Q(zeta_{from}) to Q(zeta_{to}): {from} does not divide {to}")]
    InvalidLift { from: usize, to: usize },
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { expected: usize, got: usize },
}

/// The field `Q(ζ_n)`: conductor, degree and the cyclotomic polynomial.
pub struct CycloContext {
    n: usize,
    degree: usize,
    phi_poly: Arc<Vec<i64>>,
    /// Non-zero coefficients of `Φ_n` below the leading term, used for reduction.
    tail: Vec<(usize, i64)>,
}

impl fmt::Debug for CycloContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CycloContext")
            .field("n", &self.n)
            .field("degree", &self.degree)
            .finish()
    }
}

static CONTEXTS: OnceLock<RwLock<HashMap<usize, Arc<CycloContext>>>> = OnceLock::new();

/// Returns the (memoized, shared) context for `Q(ζ_n)`.
pub fn make_context(n: usize) -> Result<Arc<CycloContext>, CycloError> {
    if n == 0 {
        return Err(CycloError::InvalidConductor);
    }
    let table = CONTEXTS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(ctx) = table.read().expect("context table poisoned").get(&n) {
        return Ok(ctx.clone());
    }
    let ctx = Arc::new(CycloContext::build(n));
    Ok(table
        .write()
        .expect("context table poisoned")
        .entry(n)
        .or_insert(ctx)
        .clone())
}

impl CycloContext {
    fn build(n: usize) -> Self {
        let phi_poly = cyclotomic_polynomial(n);
        let degree = phi_poly.len() - 1;
        let tail = phi_poly[..degree]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect();
        CycloContext {
            n,
            degree,
            phi_poly,
            tail,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `φ(n)`, the dimension of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Φ_n`, lowest degree first.
    pub fn phi_poly(&self) -> &[i64] {
        &self.phi_poly
    }

    /// Reduces an integer polynomial of any length modulo `Φ_n`.
    fn reduce(&self, mut poly: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree;
        if poly.len() < d {
            poly.resize(d, BigInt::zero());
            return poly;
        }
        for k in (d..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut poly[k]);
            for &(i, p) in &self.tail {
                poly[k - d + i] -= &c * p;
            }
        }
        poly.truncate(d);
        poly
    }

    fn index(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }
}

/// An element of `Q(ζ_n)` in canonical power-basis form.
#[derive(Clone)]
pub struct CycloElement {
    ctx: Arc<CycloContext>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.n == other.ctx.n && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloElement {}

impl CycloElement {
    fn from_parts(ctx: Arc<CycloContext>, num: Vec<BigInt>, den: BigInt) -> Self {
        let num = ctx.reduce(num);
        let mut el = CycloElement { ctx, num, den };
        el.normalize();
        el
    }

    fn normalize(&mut self) {
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn zero(ctx: &Arc<CycloContext>) -> Self {
        CycloElement {
            ctx: ctx.clone(),
            num: vec![BigInt::zero(); ctx.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(ctx: &Arc<CycloContext>) -> Self {
        Self::from_integer(ctx, 1)
    }

    pub fn from_integer(ctx: &Arc<CycloContext>, v: i64) -> Self {
        Self::from_rational(ctx, &Rational::from_integer(v.into()))
    }

    pub fn from_rational(ctx: &Arc<CycloContext>, q: &Rational) -> Self {
        let mut num = vec![BigInt::zero(); ctx.degree];
        num[0] = q.numer().clone();
        let mut el = CycloElement {
            ctx: ctx.clone(),
            num,
            den: q.denom().clone(),
        };
        el.normalize();
        el
    }

    /// Element from exactly `φ(n)` power-basis coefficients.
    pub fn from_coeffs(ctx: &Arc<CycloContext>, coeffs: &[Rational]) -> Result<Self, CycloError> {
        if coeffs.len() != ctx.degree {
            return Err(CycloError::BadLength {
                expected: ctx.degree,
                got: coeffs.len(),
            });
        }
        Ok(Self::from_polynomial(ctx, coeffs))
    }

    /// Value of the polynomial `Σ coeffs[i] x^i` at `ζ_n`, any length.
    pub fn from_polynomial(ctx: &Arc<CycloContext>, coeffs: &[Rational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(ctx.clone(), num, den)
    }

    /// `ζ_n^k`, with `k` taken modulo `n`.
    pub fn root_power(ctx: &Arc<CycloContext>, k: i64) -> Self {
        let idx = ctx.index(k);
        let mut poly = vec![BigInt::zero(); idx.max(ctx.degree - 1) + 1];
        poly[idx] = BigInt::one();
        Self::from_parts(ctx.clone(), poly, BigInt::one())
    }

    pub fn context(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    pub fn conductor(&self) -> usize {
        self.ctx.n
    }

    pub fn coeff(&self, i: usize) -> Rational {
        Rational::new(self.num[i].clone(), self.den.clone())
    }

    /// The `φ(n)` power-basis coefficients.
    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &Self) -> Result<(), CycloError> {
        if self.ctx.n != other.ctx.n {
            return Err(CycloError::ConductorMismatch {
                left: self.ctx.n,
                right: other.ctx.n,
            });
        }
        Ok(())
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if subtract { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let l = self.den.lcm(&other.den);
            let fa = &l / &self.den;
            let fb = &l / &other.den;
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &fa, b * &fb);
                    if subtract {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
            (num, l)
        };
        let mut el = CycloElement {
            ctx: self.ctx.clone(),
            num,
            den,
        };
        el.normalize();
        el
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        Ok(self.combine(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        let d = self.ctx.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        let rhs: Vec<(usize, &BigInt)> = other
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rhs {
                prod[i + j] += a * b;
            }
        }
        Ok(Self::from_parts(
            self.ctx.clone(),
            prod,
            &self.den * &other.den,
        ))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        let mut el = CycloElement {
            ctx: self.ctx.clone(),
            num,
            den: &self.den * q.denom(),
        };
        el.normalize();
        el
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CycloElement::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Φ_n`.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero(self.ctx.n));
        }
        let x = QPoly::new(self.coeffs());
        let modulus = QPoly::new(
            self.ctx
                .phi_poly
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        );
        let (s, g) = x.inverse_mod(&modulus);
        // Φ_n is irreducible, so any non-zero element is coprime to it.
        debug_assert_eq!(g, QPoly::one());
        Ok(Self::from_polynomial(&self.ctx, s.coeffs()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// Applies the automorphism `ζ_n ↦ ζ_n^k`.
    pub fn galois_map(&self, k: i64) -> Result<Self, CycloError> {
        let n = self.ctx.n;
        let kk = self.ctx.index(k);
        if kk.gcd(&n) != 1 {
            return Err(CycloError::InvalidAutomorphism { k, n });
        }
        Ok(self.substitute(kk))
    }

    /// Substitutes `ζ ↦ ζ^k` for a unit `k`, already reduced modulo `n`.
    fn substitute(&self, k: usize) -> Self {
        let n = self.ctx.n;
        if k == 1 || n <= 2 {
            return self.clone();
        }
        let mut poly = vec![BigInt::zero(); n];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                poly[(i * k) % n] += c;
            }
        }
        Self::from_parts(self.ctx.clone(), poly, self.den.clone())
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        self.substitute(self.ctx.index(-1))
    }

    /// True iff the element is fixed by complex conjugation, i.e. lies in `Q(ζ_n)⁺`.
    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// The rational value, if the element lies in `Q`.
    pub fn is_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    /// Decides membership in the subfield `Q(ζ_m)` for `m | n`, by invariance
    /// under every automorphism `ζ_n ↦ ζ_n^k` with `k ≡ 1 (mod m)`.
    pub fn is_in_subfield(&self, m: usize) -> Result<bool, CycloError> {
        let n = self.ctx.n;
        if m == 0 || n % m != 0 {
            return Err(CycloError::InvalidSubfield { m, n });
        }
        Ok(subfield_stabilizer(n, m)
            .into_iter()
            .all(|k| self.substitute(k) == *self))
    }

    /// Decides whether `self / other` lies in `Q(ζ_m)` without inverting `other`.
    pub fn ratio_in_subfield(&self, other: &Self, m: usize) -> Result<bool, CycloError> {
        self.check_same(other)?;
        if other.is_zero() {
            return Err(CycloError::DivisionByZero(self.ctx.n));
        }
        let n = self.ctx.n;
        if m == 0 || n % m != 0 {
            return Err(CycloError::InvalidSubfield { m, n });
        }
        Ok(subfield_stabilizer(n, m).into_iter().all(|k| {
            &self.substitute(k) * other == self * &other.substitute(k)
        }))
    }

    /// Embeds the element into `Q(ζ_target)` via `ζ_n = ζ_target^{target/n}`.
    pub fn lift_to(&self, target: usize) -> Result<Self, CycloError> {
        let n = self.ctx.n;
        if target == 0 || target % n != 0 {
            return Err(CycloError::InvalidLift { from: n, to: target });
        }
        if target == n {
            return Ok(self.clone());
        }
        let ctx = make_context(target)?;
        let step = target / n;
        let mut poly = vec![BigInt::zero(); (self.num.len() - 1) * step + 1];
        for (i, c) in self.num.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(Self::from_parts(ctx, poly, self.den.clone()))
    }

    pub fn minimal_polynomial(&self) -> MinimalPolynomial {
        minpoly::minimal_polynomial(self)
    }
}

/// Units `k ≠ 1` modulo `n` with `k ≡ 1 (mod m)`.
fn subfield_stabilizer(n: usize, m: usize) -> Vec<usize> {
    (1..n)
        .step_by(m)
        .filter(|&k| k != 1 && k.gcd(&n) == 1)
        .collect()
}

/// `ζ_n^k` as an element of a fresh or memoized context.
pub fn elem_from_power(ctx: &Arc<CycloContext>, k: i64) -> CycloElement {
    CycloElement::root_power(ctx, k)
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = Rational::new(c.clone(), self.den.clone());
            let (sign, mag) = if q.is_negative() { ("-", -q) } else { ("+", q) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})[{}]", self.ctx.n, self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CycloElement> for &CycloElement {
            type Output = CycloElement;
            /// Panics if the conductors differ.
            fn $method(self, rhs: &CycloElement) -> CycloElement {
                self.$checked(rhs).expect("cyclotomic operands must share a conductor")
            }
        }
        impl $trait<CycloElement> for CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: CycloElement) -> CycloElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloElement> for CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: &CycloElement) -> CycloElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement {
            ctx: self.ctx.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        -&self
    }
}
