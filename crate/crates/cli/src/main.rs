//! `halfsph`: batch front end. Every run prints one JSON report (or a
//! markdown digest with `--md`) and exits with 0 (proved, certified),
//! 2 (refuted), 3 (inconclusive, indirect) or 1 (error).

mod commands;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::{Ctx, Source};
use report::{Outcome, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "halfsph", version, about = "Checks relations of half-liberated spheres and their quantum groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// base seed for every sampler
    #[arg(long, global = true, env = "HALFSPH_SEED", default_value_t = 0)]
    seed: u64,
    /// tolerance for "relation holds"
    #[arg(long, global = true, env = "HALFSPH_TOL", default_value_t = halfsph::models::TOL_STRICT)]
    tol: f64,
    /// derivation budget (node expansions)
    #[arg(long, global = true, default_value_t = halfsph::rewrite::DEFAULT_BUDGET)]
    budget: usize,
    /// print a markdown digest instead of JSON
    #[arg(long, global = true)]
    md: bool,
    /// re-check the report's certificates from its JSON before printing
    #[arg(long, global = true)]
    verify: bool,
    /// run data-parallel loops on one thread
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// derive a target relation (free names range over the coordinates)
    Check {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        target: String,
        /// on failure, look for a counterexample with this sampler
        #[arg(long)]
        sampler: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// find a model point of the presentation violating the target
    Refute {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        target: String,
        #[arg(long)]
        sampler: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// verify every claim of an inclusion diagram
    Diagram {
        /// shipped diagram: six-spheres, ten-spheres, groups
        #[arg(long, conflicts_with = "file")]
        name: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// numerical rank of a monomial family over sampled models
    Gram {
        /// zz*, zzz, zz*z (or 1, 2, 3)
        #[arg(long)]
        family: String,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long)]
        sampler: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// quantum isometry derivations for a sphere
    Qisom {
        #[arg(long)]
        sphere: String,
        /// closure, coaction, collect, saturate
        #[arg(long, default_value = "closure")]
        mode: String,
        /// abc, ab*c, ab*, a*b (collect and saturate modes)
        #[arg(long)]
        shape: Option<String>,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        /// cap on derived statements during saturation
        #[arg(long, default_value_t = commands::DEFAULT_QISOM_BUDGET)]
        statements: usize,
    },
    /// draw one point from a sampler
    Sample {
        #[arg(long)]
        sampler: String,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        /// evaluate this preset's relations at the point
        #[arg(long)]
        against: Option<String>,
    },
    /// projective identities for p_ij = z_i z_j*
    Projective {
        #[command(flatten)]
        src: Source,
    },
    /// re-read a saved report (use with --verify and --md)
    Report { path: PathBuf },
}

fn echo() -> Vec<String> {
    std::env::args().skip(1).collect()
}

fn dispatch(cli: &Cli, ctx: &Ctx) -> Result<Outcome> {
    match &cli.cmd {
        Cmd::Check { src, target, sampler, trials } => commands::check(ctx, src, target, sampler.as_deref(), *trials),
        Cmd::Refute { src, target, sampler, trials } => commands::refute(ctx, src, target, sampler, *trials),
        Cmd::Diagram { name, file, n, trials } => commands::diagram(ctx, name.as_deref(), file.as_ref(), *n, *trials),
        Cmd::Gram { family, n, sampler, samples } => commands::gram(ctx, family, *n, sampler.as_deref(), *samples),
        Cmd::Qisom { sphere, mode, shape, n, statements } => {
            commands::qisom(ctx, sphere, mode, shape.as_deref(), *n, *statements)
        }
        Cmd::Sample { sampler, n, against } => commands::sample(ctx, sampler, *n, against.as_deref()),
        Cmd::Projective { src } => commands::projective(ctx, src),
        Cmd::Report { .. } => unreachable!("handled before dispatch"),
    }
}

fn print(r: &Report, md: bool) {
    if md {
        print!("{}", r.to_markdown());
    } else {
        println!("{}", serde_json::to_string_pretty(r).expect("report serializes"));
    }
}

fn reread(path: &PathBuf, verify: bool, tol: f64) -> Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut r: Report = serde_json::from_str(&text).context("not a report")?;
    anyhow::ensure!(r.schema == report::SCHEMA, "unsupported schema {}", r.schema);
    if verify {
        let n = verify::verify_report(&r, tol)?;
        r.payload["verified"] = serde_json::json!(n);
    }
    Ok(r)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let seed = std::env::var("HALFSPH_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
            let msg = e.to_string();
            print(&Report::error(echo(), seed, msg.trim()), false);
            return ExitCode::from(1);
        }
    };
    let exec = if cli.sequential { halfsph::Exec::Sequential } else { halfsph::Exec::Parallel };
    let ctx = Ctx { seed: cli.seed, tol: cli.tol, budget: cli.budget, exec };
    let start = Instant::now();
    let report = if let Cmd::Report { path } = &cli.cmd {
        reread(path, cli.verify, cli.tol).unwrap_or_else(|e| Report::error(echo(), cli.seed, &format!("{e:#}")))
    } else {
        match dispatch(&cli, &ctx) {
            Ok(Outcome { status, payload, residuals }) => {
                let mut r = Report {
                    schema: report::SCHEMA,
                    tool: report::tool(),
                    command: echo(),
                    seed: cli.seed,
                    status,
                    payload,
                    residuals,
                    wall_clock_ms: 0,
                };
                if cli.verify {
                    match verify::verify_report(&r, cli.tol) {
                        Ok(n) => r.payload["verified"] = serde_json::json!(n),
                        Err(e) => {
                            r.payload["verification_error"] = serde_json::json!(format!("{e:#}"));
                            r.status = Status::Error;
                        }
                    }
                }
                r.wall_clock_ms = start.elapsed().as_millis() as u64;
                r
            }
            Err(e) => Report::error(echo(), cli.seed, &format!("{e:#}")),
        }
    };
    print(&report, cli.md);
    ExitCode::from(report.status.exit_code() as u8)
}
