//! Bundled reproduction checks with a pass/fail table.

use std::fmt;
use std::time::{Duration, Instant};

use crate::cyclotomic::{cyclotomic_polynomial, divisors, make_context, poly_mul, totient, CycloElement};
use crate::search::{enumerate, run_search, Convention, SearchOptions};
use crate::solver::{certify_theta, mirror_theta, quadling_ratio, tripp_agrees, Classification, Triplet};
use crate::trig::{cos_of, sin_of, tan_of};

/// Deliberate corruption used to check that failures are reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Perturbs one coefficient of the cyclotomic polynomial table copy.
    CorruptPhiTable,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Skip the full searches and the slow subfield check.
    pub quick: bool,
    pub search: SearchOptions,
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_names(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(
                f,
                "{}  {:<width$}  {:>8.2}s  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.elapsed.as_secs_f64(),
                c.detail
            )?;
        }
        let failed = self.failed_names();
        if failed.is_empty() {
            write!(f, "all {} checks passed", self.checks.len())
        } else {
            write!(f, "{} of {} checks failed: {}", failed.len(), self.checks.len(), failed.join(", "))
        }
    }
}

type CheckResult = Result<String, String>;

fn run(name: &'static str, check: impl FnOnce() -> CheckResult) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckOutcome {
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `∏_{d | n} Φ_d = x^n - 1` for `n ≤ 60`, on a copy of the table.
fn cyclotomic_table(fault: Option<Fault>) -> CheckResult {
    let mut table: Vec<Vec<i64>> = (0..=60)
        .map(|n| if n == 0 { vec![] } else { cyclotomic_polynomial(n).to_vec() })
        .collect();
    if fault == Some(Fault::CorruptPhiTable) {
        table[12][1] += 1;
    }
    for n in 1..=60usize {
        ensure(table[n].len() == totient(n) + 1, || format!("deg Phi_{n} != phi({n})"))?;
        let product = divisors(n).iter().fold(vec![1i64], |acc, &d| poly_mul(&acc, &table[d]));
        let mut expected = vec![0i64; n + 1];
        expected[0] = -1;
        expected[n] = 1;
        ensure(product == expected, || format!("product of Phi_d over d | {n} is not x^{n} - 1"))?;
    }
    Ok("prod Phi_d = x^n - 1 for n <= 60".into())
}

fn counts() -> CheckResult {
    for (conv, want) in [(Convention::TrippEven, 113564u64), (Convention::Full, 231044)] {
        let got = enumerate(conv).count() as u64;
        ensure(got == want && conv.expected_count() == want, || {
            format!("{conv}: enumerated {got}, expected {want}")
        })?;
    }
    Ok("tripp-even 113564, full 231044".into())
}

fn certification(t: Triplet, j: i64) -> CheckResult {
    ensure(certify_theta(&t, j).map_err(err)?, || format!("{t} does not certify at {j} half-steps"))?;
    ensure(tripp_agrees(&t, j).map_err(err)?, || format!("tangent formula disagrees for {t}"))?;
    let m = t.mirror();
    let mj = mirror_theta(&t, j);
    ensure(certify_theta(&m, mj).map_err(err)?, || format!("mirror {m} does not certify at {mj}"))?;
    Ok(format!("{t}: theta = {j}/2 units, mirror {m}: {mj}/2"))
}

fn proof_chain() -> CheckResult {
    let t = Triplet::degrees(45, 45, 15).map_err(err)?;
    let (num, den) = quadling_ratio(&t).map_err(err)?;
    let ctx = make_context(720).map_err(err)?;
    // sin(π/24) / sin(π/4 + π/12 - π/24), angles as 720ths of a turn.
    let lhs = sin_of(&ctx, 15).map_err(err)?;
    let rhs = sin_of(&ctx, 105).map_err(err)?;
    ensure(&num * &rhs == &den * &lhs, || "ratio differs from sin(pi/24)/sin(7pi/24)".into())?;
    Ok("ratio = sin(pi/24)/sin(7pi/24) in Q(zeta_720)".into())
}

fn tan_pi_over(n: usize) -> Result<CycloElement, String> {
    // tan(π/n) = tan(2π/(2n)), with the field enlarged so that 4 | conductor.
    let cond = if (2 * n) % 4 == 0 { 2 * n } else { 4 * n };
    let ctx = make_context(cond).map_err(err)?;
    tan_of(&ctx, (cond / (2 * n)) as i64).map_err(err)
}

fn tangent_degrees() -> CheckResult {
    let mut degrees = Vec::new();
    for n in [4usize, 8, 12, 16, 20, 24] {
        let d = tan_pi_over(n)?.minimal_polynomial().degree();
        ensure(d == totient(n) / 2, || format!("deg tan(pi/{n}) = {d}, expected {}", totient(n) / 2))?;
        degrees.push(d.to_string());
    }
    Ok(format!("degrees {}", degrees.join(", ")))
}

/// Does `tan(2π/(base·m))` lie in `Q(ζ_base)`? Decided as `sin/cos` stability.
pub fn tan_in_base_field(base: usize, m: usize) -> Result<bool, String> {
    let ctx = make_context(base * m).map_err(err)?;
    let s = sin_of(&ctx, 1).map_err(err)?;
    let c = cos_of(&ctx, 1);
    s.ratio_in_subfield(&c, base).map_err(err)
}

fn subfield_membership(base: usize) -> CheckResult {
    let mut members = Vec::new();
    for m in 1..=6usize {
        let inside = tan_in_base_field(base, m)?;
        ensure(inside == (2 % m == 0), || {
            format!("tan(2pi/{}) membership in Q(zeta_{base}) is {inside}", base * m)
        })?;
        if inside {
            members.push(m.to_string());
        }
    }
    Ok(format!("base {base}: member for m in {{{}}}", members.join(", ")))
}

fn search_checks(opts: &SearchOptions) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    out.push(run("search tripp-even", || {
        let r = run_search(Convention::TrippEven, opts).map_err(err)?;
        let langley = Triplet::degrees(20, 60, 50).map_err(err)?;
        ensure(r.total_enumerated == 113564, || format!("enumerated {}", r.total_enumerated))?;
        ensure(r.integral_count == 53, || format!("{} integral solutions", r.integral_count))?;
        ensure(
            r.solutions.iter().any(|s| s.triplet == langley && s.half_steps == Some(60)),
            || "(20, 60, 50; 30) missing".into(),
        )?;
        Ok(format!("{} integral, {} half-integral", r.integral_count, r.half_integral_count))
    }));
    out.push(run("search full", || {
        let r = run_search(Convention::Full, opts).map_err(err)?;
        let half: Vec<_> = r
            .solutions
            .iter()
            .filter(|s| s.classification == Classification::HalfIntegral)
            .collect();
        ensure(r.total_enumerated == 231044, || format!("enumerated {}", r.total_enumerated))?;
        ensure(
            half.len() == 1
                && half[0].triplet == Triplet::degrees(45, 45, 15).map_err(err)?
                && half[0].half_steps == Some(15),
            || format!("{} half-integral solutions", half.len()),
        )?;
        Ok(format!("{} integral, 1 half-integral (45, 45, 15; 7.5)", r.integral_count))
    }));
    out.push(run("search unit:60", || {
        let r = run_search(Convention::GeneralizedUnit(60), opts).map_err(err)?;
        let t = Triplet::canonical(15, 15, 5, 60).map_err(err)?;
        ensure(
            r.solutions.iter().any(|s| s.triplet == t && s.half_steps == Some(5)),
            || "(15, 15, 5) x pi/60 not certified at 2.5 units".into(),
        )?;
        Ok(format!("{} integral, {} half-integral", r.integral_count, r.half_integral_count))
    }));
    out
}

pub fn verify(opts: &VerifyOptions) -> VerifyReport {
    let deg = |a, b, c| Triplet::degrees(a, b, c).expect("valid triplet");
    let mut checks = vec![
        run("cyclotomic table", || cyclotomic_table(opts.fault)),
        run("enumeration counts", counts),
        run("langley certification", || certification(deg(20, 60, 50), 60)),
        run("fractional certification", || certification(deg(45, 45, 15), 15)),
        run("proof-chain identity", proof_chain),
        run("tangent degrees", tangent_degrees),
        run("subfield membership base 24", || subfield_membership(24)),
    ];
    if !opts.quick {
        checks.push(run("subfield membership base 360", || subfield_membership(360)));
        checks.extend(search_checks(&opts.search));
    }
    VerifyReport { checks }
}
