//! Dense univariate polynomials over the rationals, just enough for the
//! extended Euclidean algorithm used by field inversion.

use num_traits::{One, Zero};

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QPoly {
    /// Lowest degree first, no trailing zeros (the zero polynomial is empty).
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly {
            coeffs: vec![Rational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn leading(&self) -> &Rational {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn scale(&self, s: &Rational) -> Self {
        QPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        QPoly::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QPoly::new(out)
    }

    /// Quotient and remainder; panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    /// Monic rescaling together with the factor used.
    fn make_monic(&self) -> (Self, Rational) {
        let inv = self.leading().recip();
        (self.scale(&inv), inv)
    }

    /// Returns `s` with `s * self ≡ gcd(self, modulus) (mod modulus)` and the
    /// monic gcd itself.
    pub fn inverse_mod(&self, modulus: &Self) -> (Self, Self) {
        let (mut r0, _) = modulus.make_monic();
        let mut s0 = QPoly::zero();
        let (mut r1, f1) = self.div_rem(modulus).1.make_monic_or_zero();
        let mut s1 = QPoly::new(vec![f1]);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            if r.is_zero() {
                r0 = r1;
                s0 = s1;
                break;
            }
            let (r, f) = r.make_monic();
            let s = s.scale(&f);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        (s0, r0)
    }

    fn make_monic_or_zero(&self) -> (Self, Rational) {
        if self.is_zero() {
            (QPoly::zero(), Rational::zero())
        } else {
            self.make_monic()
        }
    }
}
