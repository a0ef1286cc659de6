//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use adventitious::cyclotomic::{make_context, totient, Rational};
use adventitious::oracle::Oracle;
use adventitious::search::{
    default_workers, search_records, summarize, Convention, SearchOptions, SearchRecord, SearchReport,
};
use adventitious::solver::{
    certify_theta, certify_theta_at, mirror_theta, quadling_ratio, tripp_agrees, Classification, Triplet,
};
use adventitious::trig::{cos_of, sin_of, tan_half_via_identity, tan_of};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIGITS: u32 = 100;
const TOL: f64 = 1e-30;

struct Run {
    records: Vec<SearchRecord>,
    report: SearchReport,
    elapsed: Duration,
}

fn opts() -> SearchOptions {
    SearchOptions { digits: DIGITS, tol: TOL, workers: default_workers() }
}

fn run(conv: Convention) -> Run {
    let start = Instant::now();
    let records = search_records(conv, &opts()).expect("search runs");
    let report = summarize(conv, &records, &opts());
    Run { records, report, elapsed: start.elapsed() }
}

fn tripp_even() -> &'static Run {
    static R: OnceLock<Run> = OnceLock::new();
    R.get_or_init(|| run(Convention::TrippEven))
}

fn full() -> &'static Run {
    static R: OnceLock<Run> = OnceLock::new();
    R.get_or_init(|| run(Convention::Full))
}

fn unit60() -> &'static Run {
    static R: OnceLock<Run> = OnceLock::new();
    R.get_or_init(|| run(Convention::GeneralizedUnit(60)))
}

fn deg(a: i64, b: i64, c: i64) -> Triplet {
    Triplet::degrees(a, b, c).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    check(elapsed < limit, || format!("{what} took {:.1}s, limit {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()))
}

fn enumeration_count() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_adventitious"))
        .args(["counts", "--convention", "tripp-even"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout).trim().to_string();
    check(out.status.success() && text == "113564", || format!("counts printed `{text}`"))?;
    within(elapsed, Duration::from_secs(1), "counts")?;
    Ok(format!("113564 in {:.3}s", elapsed.as_secs_f64()))
}

fn integral_solutions() -> Outcome {
    let r = tripp_even();
    check(r.report.total_enumerated == 113564, || format!("enumerated {}", r.report.total_enumerated))?;
    check(r.report.integral_count == 53, || format!("{} integral solutions", r.report.integral_count))?;
    check(r.report.half_integral_count == 0, || "half-integral hit with even apex".into())?;
    let langley = r.report.solutions.iter().find(|s| s.triplet == deg(20, 60, 50));
    check(langley.and_then(|s| s.half_steps) == Some(60), || "(20, 60, 50; 30) missing".into())?;
    for s in &r.report.solutions {
        let j = s.half_steps.ok_or("solution without angle")?;
        check(certify_theta(&s.triplet, j).map_err(|e| e.to_string())?, || format!("{} recertification", s.triplet))?;
    }
    within(r.elapsed, Duration::from_secs(30 * 60), "tripp-even search")?;
    Ok(format!("53 integral incl. (20, 60, 50; 30), {:.1}s", r.elapsed.as_secs_f64()))
}

fn fractional_uniqueness() -> Outcome {
    let r = full();
    let half: Vec<_> = r
        .report
        .solutions
        .iter()
        .filter(|s| s.classification == Classification::HalfIntegral)
        .collect();
    check(half.len() == 1, || format!("{} half-integral solutions", half.len()))?;
    check(half[0].triplet == deg(45, 45, 15) && half[0].half_steps == Some(15), || {
        format!("unexpected solution {}", half[0].triplet)
    })?;
    let mirror = deg(45, 15, 45);
    check(certify_theta(&mirror, 105).map_err(|e| e.to_string())?, || "mirror 52.5 does not certify".into())?;
    check(!r.report.solutions.iter().any(|s| s.triplet == mirror), || "mirror not deduplicated".into())?;
    // Every even-apex solution reappears in the full run.
    let te = tripp_even();
    for s in &te.report.solutions {
        check(r.report.solutions.contains(s), || format!("{} missing from full run", s.triplet))?;
    }
    Ok(format!("(45, 45, 15; 7.5) only, {:.1}s", r.elapsed.as_secs_f64()))
}

fn proof_chain_identity() -> Outcome {
    let start = Instant::now();
    let (num, den) = quadling_ratio(&deg(45, 45, 15)).map_err(|e| e.to_string())?;
    let ratio = num.checked_div(&den).map_err(|e| e.to_string())?;
    let ctx = make_context(720).unwrap();
    // sin(π/24) / sin(π/4 + π/12 - π/24): indices 15 and 105 of 720.
    let expected = sin_of(&ctx, 15)
        .unwrap()
        .checked_div(&sin_of(&ctx, 105).unwrap())
        .unwrap();
    check(ratio == expected, || "ratio differs".into())?;
    within(start.elapsed(), Duration::from_secs(1), "identity")?;
    Ok(format!("exact in Q(zeta_720), {:.3}s", start.elapsed().as_secs_f64()))
}

fn tangent_degrees() -> Outcome {
    let start = Instant::now();
    let mut found = Vec::new();
    for n in [4usize, 8, 12, 16, 20, 24] {
        let t = tan_of(&make_context(2 * n).unwrap(), 1).map_err(|e| e.to_string())?;
        let d = t.minimal_polynomial().degree();
        check(d == totient(n) / 2, || format!("n = {n}: degree {d}"))?;
        found.push(d.to_string());
    }
    within(start.elapsed(), Duration::from_secs(10), "degrees")?;
    Ok(format!("degrees [{}]", found.join(", ")))
}

fn subfield_membership() -> Outcome {
    let start = Instant::now();
    let mut members = Vec::new();
    for m in 1..=6usize {
        let t = tan_of(&make_context(24 * m).unwrap(), 1).map_err(|e| e.to_string())?;
        let inside = t.is_in_subfield(24).map_err(|e| e.to_string())?;
        check(inside == (2 % m == 0), || format!("m = {m}: membership {inside}"))?;
        if inside {
            members.push(m.to_string());
        }
    }
    within(start.elapsed(), Duration::from_secs(120), "membership")?;
    Ok(format!("members m in {{{}}}", members.join(", ")))
}

/// Non-half-step rationals `k/d` in `(0, b + c)` near the estimate.
fn fuzz_candidates(rng: &mut ChaCha8Rng, t: &Triplet, estimate: f64) -> Vec<Rational> {
    let mut out = Vec::new();
    for d in [3i64, 4, 6, 8] {
        let centre = (estimate * d as f64).round() as i64;
        let k = centre + rng.gen_range(-1..=1);
        let cand = q(k, d);
        if k > 0 && cand < Rational::from_integer((t.b() + t.c()).into()) && *cand.denom() > 2.into() {
            out.push(cand);
        }
    }
    out
}

fn denominators_at_most_two(run: &Run, seed: u64, samples: usize) -> Result<usize, String> {
    for r in &run.records {
        check(r.certified == (r.classification != Classification::NotRational), || {
            format!("{}: inconsistent record", r.triplet)
        })?;
        check(r.certified == r.half_steps.is_some(), || format!("{}: angle without certificate", r.triplet))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<&SearchRecord> = run.records.iter().filter(|r| r.certified).collect();
    let others: Vec<&SearchRecord> = run.records.iter().filter(|r| !r.certified).collect();
    pool.extend(others.choose_multiple(&mut rng, samples));
    let mut tried = 0;
    for r in pool {
        let est: f64 = r.theta_estimate.parse().map_err(|_| "bad estimate")?;
        for cand in fuzz_candidates(&mut rng, &r.triplet, est) {
            tried += 1;
            check(!certify_theta_at(&r.triplet, &cand).map_err(|e| e.to_string())?, || {
                format!("{} certified at {cand}", r.triplet)
            })?;
        }
    }
    Ok(tried)
}

fn denominator_fuzz() -> Outcome {
    let tried = denominators_at_most_two(full(), 0x5eed, 150)?;
    Ok(format!("{} records consistent, {tried} fuzzed candidates rejected", full().records.len()))
}

fn unit_sixty() -> Outcome {
    let r = unit60();
    let t = Triplet::canonical(15, 15, 5, 60).unwrap();
    let hit = r.report.solutions.iter().find(|s| s.triplet == t);
    check(hit.and_then(|s| s.half_steps) == Some(5), || "(15, 15, 5) not at 2.5 units".into())?;
    check(t.conductor() == 240 && certify_theta(&t, 5).map_err(|e| e.to_string())?, || {
        "exact certification in conductor 240 failed".into()
    })?;
    let tried = denominators_at_most_two(r, 60, 300)?;
    within(r.elapsed, Duration::from_secs(300), "unit:60 search")?;
    Ok(format!(
        "{} integral, {} half-integral, {tried} fuzzed candidates rejected, {:.1}s",
        r.report.integral_count,
        r.report.half_integral_count,
        r.elapsed.as_secs_f64()
    ))
}

fn oracle_agreement() -> Outcome {
    let mut oracle = Oracle::new(DIGITS).map_err(|e| e.to_string())?;
    let mut n = 0;
    for run in [tripp_even(), full(), unit60()] {
        for s in &run.report.solutions {
            let j = s.half_steps.ok_or("uncertified solution")?;
            let est = oracle.theta(&s.triplet).map_err(|e| e.to_string())?;
            check(est.sub_rational(&q(j, 2)).abs_lt_pow10(-90), || format!("{} off by more than 1e-90", s.triplet))?;
            n += 1;
        }
    }
    Ok(format!("{n} certified solutions within 1e-90"))
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let ctx = make_context(720).unwrap();

    // Field axioms on random elements of several fields.
    for n in [4usize, 8, 12, 24] {
        let c = make_context(n).unwrap();
        let elem = |rng: &mut ChaCha8Rng| {
            let coeffs: Vec<Rational> = (0..totient(n)).map(|_| q(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
            adventitious::cyclotomic::CycloElement::from_coeffs(&c, &coeffs).unwrap()
        };
        for _ in 0..30 {
            let (x, y, z) = (elem(&mut rng), elem(&mut rng), elem(&mut rng));
            check(&(&x * &y) * &z == &x * &(&y * &z), || "associativity".into())?;
            check(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), || "distributivity".into())?;
            if !x.is_zero() {
                check((&x * &x.inverse().unwrap()).is_one(), || "inverse".into())?;
            }
        }
    }

    // Pythagorean, parity and half-angle identities over every index of 720.
    for j in 0..720i64 {
        let (s, c) = (sin_of(&ctx, j).unwrap(), cos_of(&ctx, j));
        check((&s * &s + &c * &c).is_one(), || format!("pythagorean at {j}"))?;
        check(cos_of(&ctx, -j) == c, || format!("cos parity at {j}"))?;
        check(sin_of(&ctx, -j).unwrap() == -&s, || format!("sin parity at {j}"))?;
    }
    let wide = make_context(1440).unwrap();
    for j in (1..720i64).step_by(7).filter(|&j| j != 360) {
        let half = tan_half_via_identity(&ctx, j).unwrap().lift_to(1440).unwrap();
        check(half == tan_of(&wide, j).unwrap(), || format!("half-angle at {j}"))?;
    }

    // Mirror identity and tangent-formula agreement on every certified hit.
    let mut hits = 0;
    for run in [tripp_even(), full(), unit60()] {
        for s in &run.report.solutions {
            let j = s.half_steps.unwrap();
            let m = s.triplet.mirror();
            let mj = mirror_theta(&s.triplet, j);
            check(mj + j == 2 * (s.triplet.b() + s.triplet.c()), || "mirror sum".into())?;
            check(certify_theta(&m, mj).map_err(|e| e.to_string())?, || format!("mirror of {}", s.triplet))?;
            check(tripp_agrees(&s.triplet, j).map_err(|e| e.to_string())?, || format!("tangent formula at {}", s.triplet))?;
            check(tripp_agrees(&m, mj).map_err(|e| e.to_string())?, || format!("tangent formula at {m}"))?;
            hits += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(300), "property suites")?;
    Ok(format!("identities hold, {hits} certified hits cross-checked, {:.1}s", start.elapsed().as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1  enumeration count", enumeration_count),
        ("2  integral solutions", integral_solutions),
        ("3  fractional uniqueness", fractional_uniqueness),
        ("4  proof-chain identity", proof_chain_identity),
        ("5  tangent degrees", tangent_degrees),
        ("6  subfield membership", subfield_membership),
        ("7  denominators at most 2", denominator_fuzz),
        ("8  unit pi/60", unit_sixty),
        ("9  oracle agreement", oracle_agreement),
        ("10 property suites", property_suites),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name:<28} {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<28} {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
