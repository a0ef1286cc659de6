//! Triplet enumeration and the two-phase search.
//!
//! Every triplet is estimated numerically; triplets whose estimate sits within
//! `tol` of a half-step are certified exactly. Work is split into contiguous
//! apex ranges, one oracle per chunk, and merged back in lexicographic order,
//! so reports do not depend on the number of workers.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::oracle::{Oracle, DEFAULT_DIGITS, MIN_SEARCH_DIGITS};
use crate::solver::{derive_theta, Classification, Triplet, DEGREES};

/// Default prefilter tolerance in half-steps.
pub const DEFAULT_TOL: f64 = 1e-30;
/// Environment variable overriding the default worker count.
pub const JOBS_ENV: &str = "ADVENTITIOUS_JOBS";
/// Fractional digits of the decimal estimate kept in records and exports.
pub const DECIMAL_PLACES: usize = 50;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search options: {0}")]
    InvalidOptions(String),
    #[error("evaluation failed for triplet {triplet}: {message}")]
    Triplet { triplet: Triplet, message: String },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// Which triplets to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Even apex in degrees, `1 ≤ c < b ≤ 90 - a/2 - 1`.
    TrippEven,
    /// Every apex in degrees, `1 ≤ c < b ≤ ⌈(180 - a)/2⌉ - 1`.
    Full,
    /// As `Full`, in units of `π/N`.
    GeneralizedUnit(i64),
}

impl Convention {
    pub fn unit_n(&self) -> i64 {
        match self {
            Convention::TrippEven | Convention::Full => DEGREES,
            Convention::GeneralizedUnit(n) => *n,
        }
    }

    fn apexes(&self) -> Vec<i64> {
        match self {
            Convention::TrippEven => (2..=176).step_by(2).collect(),
            _ => (1..self.unit_n()).collect(),
        }
    }

    /// Largest admissible `b` for apex `a`.
    fn b_max(&self, a: i64) -> i64 {
        let n = self.unit_n();
        // ⌈(N - a)/2⌉ - 1, which is 90 - a/2 - 1 for even a in degrees.
        (n - a + 1) / 2 - 1
    }

    /// Closed-form number of triplets.
    pub fn expected_count(&self) -> u64 {
        fn c3(m: i64) -> u64 {
            if m < 3 {
                0
            } else {
                (m * (m - 1) * (m - 2) / 6) as u64
            }
        }
        match self {
            Convention::TrippEven => c3(89),
            _ => {
                let n = self.unit_n();
                if n % 2 == 0 {
                    c3(n / 2) + c3(n / 2 - 1)
                } else {
                    2 * c3((n - 1) / 2)
                }
            }
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::TrippEven => f.write_str("tripp-even"),
            Convention::Full => f.write_str("full"),
            Convention::GeneralizedUnit(n) => write!(f, "unit:{n}"),
        }
    }
}

impl FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tripp-even" => Ok(Convention::TrippEven),
            "full" => Ok(Convention::Full),
            _ => {
                let n = s
                    .strip_prefix("unit:")
                    .and_then(|n| n.parse::<i64>().ok())
                    .ok_or_else(|| format!("unknown convention `{s}` (expected tripp-even, full or unit:N)"))?;
                if n < 3 {
                    return Err(format!("unit denominator must be at least 3, got {n}"));
                }
                Ok(Convention::GeneralizedUnit(n))
            }
        }
    }
}

impl Serialize for Convention {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Convention {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Triplets of one apex, in `(b, c)` lexicographic order.
fn triplets_with_apex(conv: Convention, a: i64) -> impl Iterator<Item = Triplet> {
    let n = conv.unit_n();
    (2..=conv.b_max(a)).flat_map(move |b| {
        (1..b).map(move |c| Triplet::canonical(a, b, c, n).expect("enumerated triplet is valid"))
    })
}

/// All triplets of the convention in `(a, b, c)` lexicographic order.
pub fn enumerate(conv: Convention) -> impl Iterator<Item = Triplet> {
    conv.apexes()
        .into_iter()
        .flat_map(move |a| triplets_with_apex(conv, a))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub digits: u32,
    pub tol: f64,
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            digits: DEFAULT_DIGITS,
            tol: DEFAULT_TOL,
            workers: default_workers(),
        }
    }
}

impl SearchOptions {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.digits < MIN_SEARCH_DIGITS {
            return Err(SearchError::InvalidOptions(format!(
                "at least {MIN_SEARCH_DIGITS} digits are required, got {}",
                self.digits
            )));
        }
        if !(self.tol > 0.0 && self.tol < 0.25) {
            return Err(SearchError::InvalidOptions(format!(
                "tolerance must lie in (0, 1/4), got {}",
                self.tol
            )));
        }
        if self.workers == 0 {
            return Err(SearchError::InvalidOptions("worker count must be positive".into()));
        }
        Ok(())
    }
}

/// Worker count from `ADVENTITIOUS_JOBS`, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// One evaluated triplet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub triplet: Triplet,
    /// Numeric estimate of `θ` in units, rounded to [`DECIMAL_PLACES`] places.
    pub theta_estimate: String,
    pub classification: Classification,
    pub half_steps: Option<i64>,
    pub certified: bool,
    /// Whether the prefilter proposed a half-step candidate.
    pub flagged: bool,
}

/// Aggregated result of a search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub convention: Convention,
    pub total_enumerated: u64,
    pub integral_count: u64,
    pub half_integral_count: u64,
    pub solutions: Vec<SearchRecord>,
    pub digits: u32,
    pub tol: f64,
    pub workers: usize,
}

fn evaluate(oracle: &mut Oracle, t: &Triplet, tol: f64) -> Result<SearchRecord, SearchError> {
    let fail = |message: String| SearchError::Triplet {
        triplet: *t,
        message,
    };
    let estimate = oracle.theta(t).map_err(|e| fail(e.to_string()))?;
    let flagged = crate::oracle::near_half_step(&estimate, tol).is_some();
    let derived = derive_theta(t, &estimate, tol).map_err(|e| fail(e.to_string()))?;
    Ok(SearchRecord {
        triplet: *t,
        theta_estimate: estimate.to_fixed(DECIMAL_PLACES),
        classification: derived.classification,
        half_steps: derived.half_steps,
        certified: derived.certified,
        flagged,
    })
}

/// Evaluates every triplet of the convention, in enumeration order.
pub fn search_records(conv: Convention, opts: &SearchOptions) -> Result<Vec<SearchRecord>, SearchError> {
    opts.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))?;
    let apexes = conv.apexes();
    let chunks: Vec<Vec<SearchRecord>> = pool.install(|| {
        apexes
            .par_iter()
            .map(|&a| {
                let mut oracle = Oracle::new(opts.digits)
                    .map_err(|e| SearchError::Pool(e.to_string()))?;
                triplets_with_apex(conv, a)
                    .map(|t| evaluate(&mut oracle, &t, opts.tol))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Drops `(a, c, b)` whenever `(a, b, c)` with `b > c` is also present.
pub fn dedup_mirrors(records: Vec<SearchRecord>) -> Vec<SearchRecord> {
    let present: HashSet<Triplet> = records.iter().map(|r| r.triplet).collect();
    records
        .into_iter()
        .filter(|r| r.triplet.is_canonical() || !present.contains(&r.triplet.mirror()))
        .collect()
}

/// Builds the report from a full list of records.
pub fn summarize(conv: Convention, records: &[SearchRecord], opts: &SearchOptions) -> SearchReport {
    let mut solutions: Vec<SearchRecord> = records.iter().filter(|r| r.certified).cloned().collect();
    solutions.sort_by_key(|r| r.triplet);
    let solutions = dedup_mirrors(solutions);
    let count = |c: Classification| solutions.iter().filter(|r| r.classification == c).count() as u64;
    SearchReport {
        convention: conv,
        total_enumerated: records.len() as u64,
        integral_count: count(Classification::Integral),
        half_integral_count: count(Classification::HalfIntegral),
        solutions: solutions.clone(),
        digits: opts.digits,
        tol: opts.tol,
        workers: opts.workers,
    }
}

pub fn run_search(conv: Convention, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    let records = search_records(conv, opts)?;
    Ok(summarize(conv, &records, opts))
}
