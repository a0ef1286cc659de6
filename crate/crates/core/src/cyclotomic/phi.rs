//! Cyclotomic polynomials by recursive exact division.
//!
//! `Φ_n = (x^n - 1) / Π_{d | n, d < n} Φ_d`, memoized per process. Coefficients
//! are stored lowest degree first.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

static PHI_TABLE: OnceLock<RwLock<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();

fn table() -> &'static RwLock<HashMap<usize, Arc<Vec<i64>>>> {
    PHI_TABLE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn totient(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Exact quotient of `num` by the monic `den`; panics if the division leaves a remainder.
pub(crate) fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
        return vec![0];
    }
    let terms: Vec<(usize, i64)> = den[..dn]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect();
    let qlen = rem.len() - dn;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        if c == 0 {
            continue;
        }
        quot[k] = c;
        rem[k + dn] = 0;
        for &(i, d) in &terms {
            rem[k + i] = rem[k + i]
                .checked_sub(c.checked_mul(d).expect("cyclotomic coefficient overflow"))
                .expect("cyclotomic coefficient overflow");
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
    quot
}

/// Product of two integer polynomials.
pub(crate) fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn compute(n: usize) -> Vec<i64> {
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        poly = exact_div(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

/// The `n`th cyclotomic polynomial, lowest degree coefficient first.
///
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: usize) -> Arc<Vec<i64>> {
    assert!(n > 0, "cyclotomic polynomial of order 0 is undefined");
    if let Some(p) = table().read().expect("phi table poisoned").get(&n) {
        return p.clone();
    }
    // Computed outside the lock; concurrent inserts of the same n are idempotent.
    let poly = Arc::new(compute(n));
    table()
        .write()
        .expect("phi table poisoned")
        .entry(n)
        .or_insert(poly)
        .clone()
}
