//! `toric-chow`: exact Chow-stability analysis of polarized toric surfaces.
//!
//! Exit codes: 0 when every requested computation finished (whatever the
//! verdict), 1 when a verification suite found a failing witness, 2 for bad
//! input, 3 when the cutting-plane iteration cap was reached, 4 for an
//! internal invariant failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{builder::PossibleValuesParser, Args, Parser, Subcommand};
use rayon::prelude::*;

use toric_chow::envelope::concave_envelope;
use toric_chow::io::{parse_heights, parse_polytope, to_json, PolytopeFile};
use toric_chow::polytope::{ehrhart, lattice_points, Polytope2D};
use toric_chow::solver::{decide_stability, verify_certificate, SolveOptions, StabilityReport, DEFAULT_MAX_ITERS};
use toric_chow::symmetry::WeylGroup;
use toric_chow::verify::{run_suite, SUITES};
use toric_chow::{catalog, chow, svg, Error};

const EXIT_SUITE_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_ITERATION_CAP: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "toric-chow", version, about = "Exact Chow-stability analysis of polarized toric surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in polytopes with their symmetry groups.
    Catalog {
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Decide Chow polystability of (P, k).
    Analyze {
        #[command(flatten)]
        target: Target,
        /// Dilations: `2`, `1..3` (inclusive) or `1,2,5`.
        #[arg(long, value_parser = parse_ks)]
        k: Ks,
        /// Solve without the symmetry reduction.
        #[arg(long)]
        no_weyl: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
        #[command(flatten)]
        seed: Seed,
        /// Write the reports as a JSON array (`-` for stdout).
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Compare the lattice-point average of k·P with its centroid.
    Barycenter {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_parser = parse_ks)]
        k: Ks,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Recompute the Chow weight of a height vector two independent ways.
    Certify {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: i64,
        #[arg(long, value_name = "FILE")]
        heights: PathBuf,
    },
    /// Print the Ehrhart polynomial of P.
    Ehrhart {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Run a verification suite of exact inequality checks.
    Verify {
        #[arg(long, value_parser = PossibleValuesParser::new(SUITES))]
        suite: String,
        #[command(flatten)]
        seed: Seed,
        /// Override the suite's default dilations.
        #[arg(long, value_parser = parse_ks)]
        k: Option<Ks>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Draw k·P as SVG, with the subdivision induced by heights if given.
    Plot {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: i64,
        #[arg(long, value_name = "FILE")]
        heights: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Target {
    /// Catalog id (X1..X4) or a polytope JSON file.
    #[arg(long)]
    polytope: String,
}

#[derive(Args)]
struct Seed {
    #[arg(long, env = "TORIC_CHOW_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Debug)]
struct Ks(Vec<i64>);

fn parse_ks(s: &str) -> Result<Ks, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let bad = || format!("invalid dilation list {s:?}");
        if let Some((a, b)) = part.split_once("..") {
            let a: i64 = a.parse().map_err(|_| bad())?;
            let b: i64 = b.trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(Ks(out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::MaxIterations { .. }) => EXIT_ITERATION_CAP,
        Some(e) if e.is_internal() => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

fn run(command: Command) -> Result<u8> {
    // The catalog groups are closed and checked against their polytopes here.
    let entries = catalog::entries();
    match command {
        Command::Catalog { json } => {
            for e in &entries {
                let verts: Vec<String> = e.polytope.vertices().iter().map(|v| v.to_string()).collect();
                println!("{}  vertices {}  group {} (order {})", e.id, verts.join(" "), e.weyl.name(), e.weyl.order());
                println!("    {}", e.note);
            }
            if let Some(path) = json {
                let files: Vec<PolytopeFile> = entries.iter().map(|e| PolytopeFile::from_parts(&e.polytope, &e.weyl)).collect();
                emit(&path, &to_json(&files))?;
            }
            Ok(0)
        }
        Command::Analyze { target, k, no_weyl, max_iters, seed, json } => {
            let (p, group) = resolve(&target.polytope)?;
            let opts = SolveOptions { weyl: !no_weyl, max_iters, seed: seed.seed, ..Default::default() };
            let results: Vec<toric_chow::Result<StabilityReport>> =
                k.0.par_iter().map(|&k| decide_stability(&p, &group, k, &opts)).collect();
            let mut reports = Vec::new();
            let mut code = 0;
            for (k, r) in k.0.iter().zip(results) {
                match r {
                    Ok(r) => {
                        print_report(&r);
                        reports.push(r);
                    }
                    Err(e) => {
                        eprintln!("{} k={k}: {e}", p.label());
                        let c = exit_code(&anyhow::Error::new(e));
                        code = worst(code, c);
                    }
                }
            }
            if let Some(path) = json {
                emit(&path, &to_json(&reports))?;
            }
            Ok(code)
        }
        Command::Barycenter { target, k, json } => {
            let (p, _) = resolve(&target.polytope)?;
            let reports = k.0.iter().map(|&k| chow::barycenter_test(&p, k)).collect::<toric_chow::Result<Vec<_>>>()?;
            for (k, r) in k.0.iter().zip(&reports) {
                println!(
                    "{} k={k}: {}  discrete ({}, {})  continuous ({}, {})",
                    p.label(),
                    if r.passes { "passes" } else { "fails" },
                    r.discrete.x,
                    r.discrete.y,
                    r.continuous.x,
                    r.continuous.y
                );
            }
            if let Some(path) = json {
                emit(&path, &to_json(&reports))?;
            }
            Ok(0)
        }
        Command::Certify { target, k, heights } => {
            let (p, _) = resolve(&target.polytope)?;
            let lattice = Arc::new(lattice_points(&p, k)?);
            let phi = parse_heights(&read(&heights)?, lattice)?;
            let j = verify_certificate(&phi)?;
            let kind = if j.is_negative() {
                "destabilizing"
            } else if j.is_zero() {
                "zero weight"
            } else {
                "positive weight"
            };
            println!("{} k={k}: J = {j} ({kind}); envelope and graph-solid computations agree", p.label());
            Ok(0)
        }
        Command::Ehrhart { target, json } => {
            let (p, _) = resolve(&target.polytope)?;
            let data = ehrhart(&p)?;
            println!("{}", data.formula());
            println!("vol = {}, boundary points = {}", data.vol, data.b);
            if let Some(path) = json {
                emit(&path, &to_json(&data))?;
            }
            Ok(0)
        }
        Command::Verify { suite, seed, k, json } => {
            let reports = run_suite(&suite, k.as_ref().map(|k| k.0.as_slice()), seed.seed)?;
            let mut code = 0;
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                let mut line = format!("{status} {}", r.estimate);
                if let Some(p) = &r.polytope {
                    line.push_str(&format!(" {p}"));
                }
                if let Some(k) = r.k {
                    line.push_str(&format!(" k={k}"));
                }
                line.push_str(&format!(" samples={}", r.samples));
                if let Some(w) = &r.witness {
                    line.push_str(&format!(": {}", w.reason));
                    code = EXIT_SUITE_FAILED;
                }
                println!("{line}");
            }
            if let Some(path) = json {
                emit(&path, &to_json(&reports))?;
            }
            Ok(code)
        }
        Command::Plot { target, k, heights, out } => {
            let (p, _) = resolve(&target.polytope)?;
            let lattice = Arc::new(lattice_points(&p, k)?);
            let sub = match heights {
                Some(path) => Some(concave_envelope(&parse_heights(&read(&path)?, lattice.clone())?)?),
                None => None,
            };
            fs::write(&out, svg::render(&lattice, sub.as_ref())).with_context(|| format!("writing {}", out.display()))?;
            Ok(0)
        }
    }
}

/// A catalog id, or else a polytope JSON file.
fn resolve(name: &str) -> Result<(Polytope2D, WeylGroup)> {
    if let Ok(e) = catalog::entry(name) {
        return Ok((e.polytope, e.weyl));
    }
    let path = Path::new(name);
    if !path.is_file() {
        return Err(Error::UnknownPolytope(name.to_string()).into());
    }
    Ok(parse_polytope(&read(path)?)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_report(r: &StabilityReport) {
    let mut line = format!("{} k={}: {}  j_min = {}", r.polytope, r.k, r.verdict, r.j_min);
    if let Some(c) = &r.certificate {
        line.push_str(&format!("  certificate J = {}", c.j));
    }
    line.push_str(&format!(
        "  ({} cuts, symmetry reduction {})",
        r.iterations,
        if r.used_weyl_reduction { "on" } else { "off" }
    ));
    println!("{line}");
}

/// Internal failures outrank bad input, which outranks the iteration cap.
fn worst(a: u8, b: u8) -> u8 {
    let rank = |c: u8| match c {
        EXIT_INTERNAL => 3,
        EXIT_INPUT => 2,
        EXIT_ITERATION_CAP => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}
