//! `factpat` command-line interface.
//!
//! Exit codes: 0 all checks hold; 2 a bound check failed; 3 every check was
//! skipped because the theorem hypotheses are unmet (no claim); 1 usage or
//! runtime error.

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use factpat::factor;
use factpat::families::FamilySpec;
use factpat::ff::FieldCtx;
use factpat::symfun::{self, PointVector};
use factpat::xpmt::{self, CensusMode, ReportFormat, RunOptions};
use factpat::Result;

#[derive(Parser)]
#[command(
    name = "factpat",
    about = "Polynomial factorization over finite fields with per-stage cost \
             instrumentation and empirical verification of explicit \
             factorization-pattern estimates.",
    long_about = None,
    after_help = "FIELD descriptions: \"p\" (prime field), \"p^k\" (extension, \
                  auto modulus), \"p^k/c0,...,ck\" (pinned modulus, ascending \
                  coefficients).\n\
                  POLY text form: comma-separated coefficients ascending \
                  degree (\"1,0,1\" = T^2+1); extension coefficients use \
                  semicolon-separated coordinates.\n\
                  FAMILY descriptions: \"prescribed:r=6;a5=0;a4=1\", \
                  \"trinomial:r=5;s=3\", \"toephess:r=4\", \
                  \"filter:r=4;m=1;wt=4;deg=1;a0=1\"."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Factor one monic polynomial and print the factorization with the
    /// per-stage cost report.
    Factor {
        /// Field description, e.g. "7" or "3^2".
        #[arg(long)]
        field: String,
        /// Monic polynomial, comma-separated ascending coefficients.
        #[arg(long)]
        poly: String,
        /// Random seed for the equal-degree splitting stage.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a factorization-pattern census over a family and check every
    /// applicable bound.
    Census {
        #[arg(long)]
        field: String,
        /// Family description, e.g. "trinomial:r=5;s=3".
        #[arg(long)]
        family: String,
        /// Sample N members instead of enumerating the whole family.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Measure per-stage factorization costs over random family members.
    Cost {
        #[arg(long)]
        field: String,
        #[arg(long)]
        family: String,
        /// Number of sampled factorizations.
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Check the symmetric-function identities (Trudi, Jacobian minors,
    /// Newton) at random points.
    VerifyIdentities {
        #[arg(long)]
        field: String,
        /// Number of coordinates per point.
        #[arg(long)]
        r: usize,
        /// Random points per identity.
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate all monic irreducibles up to a degree bound.
    Sieve {
        #[arg(long)]
        field: String,
        #[arg(long)]
        max_degree: usize,
        /// Enumeration budget (total candidates).
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn write_out(out: &Option<std::path::PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| factpat::Error::SizeMismatch(format!("cannot write {path:?}: {e}"))),
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| factpat::Error::SizeMismatch(format!("stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Factor { field, poly, seed } => {
            let ctx = FieldCtx::parse(&field)?;
            let f = factpat::poly::Poly::parse(&ctx, &poly)?;
            let mut rng = xpmt::member_rng(seed, 0);
            let (fz, report) = factor::factor(&f, &ctx, &mut rng)?;
            let doc = serde_json::json!({
                "schema": "factpat-report-v1",
                "field": ctx.describe(),
                "input": f.render(),
                "factorization": fz.to_json(),
                "pattern": factor::pattern_of(&fz).render(),
                "cost": report,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
            Ok(0)
        }
        Command::Census { field, family, sample, seed, workers, format, out } => {
            let ctx = FieldCtx::parse(&field)?;
            let spec = FamilySpec::parse(&family)?;
            let mode = match sample {
                Some(n) => CensusMode::Sampled { n },
                None => CensusMode::Exhaustive,
            };
            let opts = RunOptions { seed, workers: workers.max(1), ..RunOptions::default() };
            let report = xpmt::run_pattern_census(&spec, &ctx, mode, &opts)?;
            let fmt = match format {
                Format::Csv => ReportFormat::Csv,
                Format::Json => ReportFormat::Json,
            };
            write_out(&out, &xpmt::emit_census(&report, fmt))?;
            eprintln!("wall time: {:.3}s", report.wall_time);
            Ok(report.verdict() as u8)
        }
        Command::Cost { field, family, n, seed, workers, format, out } => {
            let ctx = FieldCtx::parse(&field)?;
            let spec = FamilySpec::parse(&family)?;
            let opts = RunOptions { seed, workers: workers.max(1), ..RunOptions::default() };
            let report = xpmt::run_cost_census(&spec, &ctx, n, &opts)?;
            let fmt = match format {
                Format::Csv => ReportFormat::Csv,
                Format::Json => ReportFormat::Json,
            };
            write_out(&out, &xpmt::emit_cost(&report, fmt))?;
            eprintln!("wall time: {:.3}s", report.wall_time);
            Ok(0)
        }
        Command::VerifyIdentities { field, r, trials, seed } => {
            let ctx = FieldCtx::parse(&field)?;
            if r < 2 {
                return Err(factpat::Error::DegreeTooSmall(
                    "verify-identities needs --r >= 2".into(),
                ));
            }
            let mut failures = 0u64;
            let mut checks = 0u64;
            for t in 0..trials {
                let mut rng = xpmt::member_rng(seed, t as u128);
                let coords: Vec<_> = (0..r).map(|_| ctx.random_element(&mut rng)).collect();
                let x = PointVector::new(&ctx, coords)?;
                for i in 1..=r.min(6) {
                    checks += 1;
                    if !symfun::trudi_check(&x, i, &ctx)? {
                        failures += 1;
                    }
                }
                for k in 0..r {
                    for l in 1..=r {
                        checks += 1;
                        if !symfun::minor_identity_check(&x, k, l, &ctx)? {
                            failures += 1;
                        }
                    }
                }
            }
            println!(
                "identities over {}: r={r}, trials={trials}, checks={checks}, failures={failures}",
                ctx.describe()
            );
            Ok(if failures == 0 { 0 } else { 2 })
        }
        Command::Sieve { field, max_degree, budget } => {
            let ctx = FieldCtx::parse(&field)?;
            let sieve = xpmt::sieve_irreducibles(&ctx, max_degree, budget)?;
            for d in 1..=sieve.max_degree() {
                let polys = sieve.irreducibles(d);
                println!("degree {d}: {} irreducible(s)", polys.len());
                for p in polys {
                    println!("  {}", p.render());
                }
            }
            Ok(0)
        }
    }
}
