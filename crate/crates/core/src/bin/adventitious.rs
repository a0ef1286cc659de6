use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use adventitious::cyclotomic::make_context;
use adventitious::export::{export_to_path, write_report, Format};
use adventitious::oracle::{Oracle, DEFAULT_DIGITS};
use adventitious::search::{
    default_workers, enumerate, run_search, Convention, SearchOptions, DECIMAL_PLACES, DEFAULT_TOL,
};
use adventitious::solver::{derive_theta, tripp_agrees, Triplet};
use adventitious::trig::{cos_of, sin_of, tan_of};
use adventitious::verify::{verify, Fault, VerifyOptions};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "adventitious", version, about = "Exact search for adventitious angles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive and certify the angle for one triplet.
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
        /// Angles are in units of pi/N.
        #[arg(long, default_value_t = 180)]
        unit: i64,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Search a whole triplet space.
    Search {
        #[arg(long)]
        convention: Convention,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Worker threads (default: $ADVENTITIOUS_JOBS or all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutFormat>,
    },
    /// Run the bundled reproduction checks.
    Verify {
        /// Skip the full searches.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Count the triplets of a convention.
    Counts {
        #[arg(long)]
        convention: Convention,
    },
    /// Minimal polynomial of a trig value at index J of Q(zeta_N).
    Minpoly {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        angle: i64,
        #[arg(long, value_enum, default_value_t = Func::Tan)]
        func: Func,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Func {
    Cos,
    Sin,
    Tan,
    Zeta,
}

/// Error carrying the exit code it should map to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_USAGE, error: error.into() }
}

fn failure(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_FAILURE, error: error.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Solve { a, b, c, unit, digits, tol } => solve(a, b, c, unit, digits, tol),
        Command::Search { convention, digits, tol, jobs, out, format } => {
            search(convention, digits, tol, jobs, out, format)
        }
        Command::Verify { quick, jobs, inject_fault } => {
            let mut search = SearchOptions::default();
            if let Some(j) = jobs {
                search.workers = j;
            }
            search.validate().map_err(usage)?;
            let report = verify(&VerifyOptions {
                quick,
                search,
                fault: inject_fault.then_some(Fault::CorruptPhiTable),
            });
            println!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(failure(anyhow::anyhow!(
                    "failed checks: {}",
                    report.failed_names().join(", ")
                )))
            }
        }
        Command::Counts { convention } => {
            let n = enumerate(convention).count();
            println!("{n}");
            Ok(())
        }
        Command::Minpoly { n, angle, func } => {
            let ctx = make_context(n).map_err(usage)?;
            let value = match func {
                Func::Cos => cos_of(&ctx, angle),
                Func::Sin => sin_of(&ctx, angle).map_err(usage)?,
                Func::Tan => tan_of(&ctx, angle).map_err(usage)?,
                Func::Zeta => adventitious::cyclotomic::CycloElement::root_power(&ctx, angle),
            };
            println!("{}", value.minimal_polynomial());
            Ok(())
        }
    }
}

fn solve(a: i64, b: i64, c: i64, unit: i64, digits: u32, tol: f64) -> Result<(), Failure> {
    let t = Triplet::new(a, b, c, unit).map_err(usage)?;
    let opts = SearchOptions { digits, tol, workers: 1 };
    opts.validate().map_err(usage)?;
    let mut oracle = Oracle::new(digits).map_err(failure)?;
    let estimate = oracle.theta(&t).map_err(failure)?;
    let derived = derive_theta(&t, &estimate, tol).map_err(failure)?;
    println!("triplet         {t}");
    println!("theta estimate  {}", estimate.to_fixed(DECIMAL_PLACES));
    println!("classification  {}", derived.classification);
    match derived.half_steps {
        Some(j) => {
            let agrees = tripp_agrees(&t, j).map_err(failure)?;
            println!("theta           {}/2 units (certified)", j);
            println!("tangent formula {}", if agrees { "agrees" } else { "DISAGREES" });
            if !agrees {
                return Err(failure(anyhow::anyhow!("tangent formula disagrees with certified angle")));
            }
        }
        None => println!("theta           not a half-integral number of units"),
    }
    Ok(())
}

fn search(
    convention: Convention,
    digits: u32,
    tol: f64,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    format: Option<OutFormat>,
) -> Result<(), Failure> {
    let opts = SearchOptions {
        digits,
        tol,
        workers: jobs.unwrap_or_else(default_workers),
    };
    opts.validate().map_err(usage)?;
    let report = run_search(convention, &opts).map_err(failure)?;
    let summary = format!(
        "{convention}: {} triplets, {} integral, {} half-integral",
        report.total_enumerated, report.integral_count, report.half_integral_count
    );
    match (out, format) {
        (Some(path), fmt) => {
            let fmt = fmt.map(Format::from).unwrap_or(match path.extension().and_then(|e| e.to_str()) {
                Some("json") => Format::Json,
                _ => Format::Csv,
            });
            export_to_path(&report, fmt, &path)
                .with_context(|| format!("writing {}", path.display()))
                .map_err(failure)?;
            eprintln!("{summary}");
        }
        (None, Some(fmt)) => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_report(&report, fmt.into(), &mut lock).map_err(failure)?;
            lock.flush().map_err(failure)?;
            eprintln!("{summary}");
        }
        (None, None) => {
            println!("{summary}");
            for s in &report.solutions {
                let j = s.half_steps.expect("solutions are certified");
                println!("  {}  theta = {}/2  {}", s.triplet, j, s.classification);
            }
        }
    }
    Ok(())
}
