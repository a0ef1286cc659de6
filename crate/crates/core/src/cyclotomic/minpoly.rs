//! Minimal polynomials over `Q` by exact kernel computation.
//!
//! The powers `1, x, x², …` are written as integer coordinate vectors in the
//! power basis and eliminated fraction-free (cross-multiplication followed by
//! content removal) until the first linear dependency appears.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CycloElement, Rational};

/// Monic polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPolynomial {
    coeffs: Vec<Rational>,
}

impl MinimalPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Evaluates the polynomial at a field element (Horner).
    pub fn eval(&self, x: &CycloElement) -> CycloElement {
        let ctx = x.context();
        self.coeffs
            .iter()
            .rev()
            .fold(CycloElement::zero(ctx), |acc, c| {
                &acc * x + CycloElement::from_rational(ctx, c)
            })
    }

    /// Integer polynomial with the same roots: coefficients cleared of
    /// denominators and made primitive with a positive leading term.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }
}

impl fmt::Display for MinimalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

struct Row {
    pivot: usize,
    vec: Vec<BigInt>,
    /// Coefficients of this row as a combination of the power vectors.
    combo: Vec<BigInt>,
}

fn remove_content(vec: &mut [BigInt], combo: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for c in vec.iter().chain(combo.iter()) {
        if !c.is_zero() {
            g = g.gcd(c);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for c in vec.iter_mut().chain(combo.iter_mut()) {
        *c /= &g;
    }
}

pub(super) fn minimal_polynomial(x: &CycloElement) -> MinimalPolynomial {
    let ctx = x.context().clone();
    let dim = ctx.degree();
    let mut rows: Vec<Row> = Vec::new();
    // Denominators of the powers, so that x^k = vec_k / dens[k].
    let mut dens: Vec<BigInt> = Vec::new();
    let mut power = CycloElement::one(&ctx);
    for k in 0..=dim {
        if k > 0 {
            power = &power * x;
        }
        dens.push(power.den.clone());
        let mut vec = power.num.clone();
        let mut combo = vec![BigInt::zero(); k + 1];
        combo[k] = BigInt::one();
        for row in &rows {
            let c = &vec[row.pivot];
            if c.is_zero() {
                continue;
            }
            let c = c.clone();
            let p = &row.vec[row.pivot];
            for (v, r) in vec.iter_mut().zip(&row.vec) {
                *v = &*v * p - &c * r;
            }
            combo.resize(k + 1, BigInt::zero());
            for (i, cb) in combo.iter_mut().enumerate() {
                let r = row.combo.get(i).cloned().unwrap_or_default();
                *cb = &*cb * p - &c * r;
            }
            remove_content(&mut vec, &mut combo);
        }
        match vec.iter().position(|c| !c.is_zero()) {
            Some(pivot) => rows.push(Row { pivot, vec, combo }),
            None => {
                // Σ combo_i vec_i = 0, and vec_i = dens_i x^i.
                let raw: Vec<BigInt> = combo
                    .iter()
                    .zip(&dens)
                    .map(|(c, d)| c * d)
                    .collect();
                let lead = raw[k].clone();
                let coeffs = raw
                    .into_iter()
                    .map(|c| Rational::new(c, lead.clone()))
                    .collect();
                return MinimalPolynomial { coeffs };
            }
        }
    }
    unreachable!("the powers 1..x^dim of an element of a dim-dimensional space are dependent")
}
