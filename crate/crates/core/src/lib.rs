//! Exact solver and exhaustive search for the adventitious-angles problem.
//!
//! Given the apex angle `a` of an isosceles triangle `ABC` and two cevian
//! angles `b = ∠DBC`, `c = ∠ECB`, the derived angle is `θ = ∠EDB`. This crate
//! computes `θ` exactly as an element of a cyclotomic field, certifies whether
//! it is an integral or half-integral number of units, and runs the full
//! numeric-prefilter / exact-certification search over triplet spaces.

pub mod cyclotomic;
pub mod export;
pub mod oracle;
pub mod search;
pub mod solver;
pub mod trig;
pub mod verify;
