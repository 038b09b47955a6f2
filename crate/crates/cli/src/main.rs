use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use wrenchpoly::io::bench::{bench, write_csv, Pipeline};
use wrenchpoly::io::{load_snapshot, project_file, PolytopeFile};
use wrenchpoly::kernel::{v_to_h, Chebyshev, HPolytope, Tolerance, VPolytope};
use wrenchpoly::query::{check_wrench_scaled, fwp_margin};
use wrenchpoly::wrench::{awp, cwc, fwp_intersection, fwp_per_foot, RobotSnapshot};

const EXIT_ERROR: u8 = 1;
const EXIT_EMPTY: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "wrenchpoly", version, about = "Feasible wrench polytopes for legged robots")]
struct Cli {
    /// Containment tolerance; the other tolerances keep their default ratios.
    #[arg(long, global = true, env = "WRENCHPOLY_TOL")]
    tol: Option<f64>,

    /// Ignore unknown keys in snapshot files instead of rejecting them.
    #[arg(long, global = true)]
    lax: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a wrench set and write it as a polytope file.
    Compute {
        #[arg(long)]
        robot: PathBuf,
        #[arg(long, value_enum)]
        set: WrenchSet,
        #[arg(long, value_enum, default_value = "both")]
        rep: Rep,
        #[arg(long)]
        out: PathBuf,
    },
    /// Test one wrench against a polytope file's halfspaces.
    Check {
        #[arg(long)]
        fwp: PathBuf,
        /// fx,fy,fz,tx,ty,tz
        #[arg(long, allow_hyphen_values = true)]
        wrench: String,
        /// Optional per-coordinate characteristic scales for the margin.
        #[arg(long, allow_hyphen_values = true)]
        scale: Option<String>,
    },
    /// Largest inscribed ball of a polytope file.
    Margin {
        #[arg(long)]
        fwp: PathBuf,
    },
    /// Orthogonal projection onto selected coordinates.
    Project {
        #[arg(long)]
        poly: PathBuf,
        /// Comma-separated coordinate indices, e.g. 0,2,4 for (F_x, F_z, τ_y).
        #[arg(long)]
        dims: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the v, h or dd pipeline and write CSV rows.
    Bench {
        #[arg(long)]
        robot: PathBuf,
        #[arg(long, value_enum)]
        pipeline: PipelineArg,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WrenchSet {
    Awp,
    Cwc,
    Fwp,
    FwpPerfoot,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Rep {
    V,
    H,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    V,
    H,
    Dd,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn tolerance(cli: &Cli) -> Result<Tolerance> {
    match cli.tol {
        Some(eps) => Ok(Tolerance::from_contain(eps)?),
        None => Ok(Tolerance::default()),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|e| anyhow::anyhow!("bad {what} entry `{x}`: {e}"))
        })
        .collect()
}

fn load(cli: &Cli, path: &PathBuf, tol: &Tolerance) -> Result<RobotSnapshot> {
    Ok(load_snapshot(path, !cli.lax, tol)?)
}

fn run(cli: Cli) -> Result<u8> {
    let tol = tolerance(&cli)?;
    match &cli.command {
        Command::Compute { robot, set, rep, out } => {
            let robot = load(&cli, robot, &tol)?;
            compute(&robot, *set, *rep, out, &tol)
        }
        Command::Check { fwp, wrench, scale } => {
            let h = halfspaces(&PolytopeFile::read(fwp)?, &tol)?;
            let w: Vec<f64> = parse_list(wrench, "wrench")?;
            let s: Option<Vec<f64>> = scale.as_deref().map(|s| parse_list(s, "scale")).transpose()?;
            let r = check_wrench_scaled(&h, &w, s.as_deref(), &tol)?;
            println!("{}", serde_json::to_string(&r)?);
            Ok(if r.feasible { 0 } else { EXIT_INFEASIBLE })
        }
        Command::Margin { fwp } => {
            let h = halfspaces(&PolytopeFile::read(fwp)?, &tol)?;
            let (line, code) = match fwp_margin(&h) {
                Chebyshev::Center { point, radius } => (json!({"center": point, "radius": radius}), 0),
                Chebyshev::Unbounded => (json!({"unbounded": true}), 0),
                Chebyshev::Empty => (json!({"empty": true}), EXIT_EMPTY),
            };
            println!("{line}");
            Ok(code)
        }
        Command::Project { poly, dims, out } => {
            let dims: Vec<usize> = parse_list(dims, "dims")?;
            let p = project_file(&PolytopeFile::read(poly)?, &dims, &tol)?;
            p.write(out)?;
            Ok(if p.is_empty() { EXIT_EMPTY } else { 0 })
        }
        Command::Bench { robot, pipeline, repeat, out } => {
            let robot = load(&cli, robot, &tol)?;
            let pipeline = match pipeline {
                PipelineArg::V => Pipeline::V,
                PipelineArg::H => Pipeline::H,
                PipelineArg::Dd => Pipeline::Dd,
            };
            let rows = bench(&robot, pipeline, *repeat, &tol)?;
            let file = std::fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
            write_csv(&rows, file)?;
            Ok(0)
        }
    }
}

/// H-description of a file, converting from vertices when that is all it has.
fn halfspaces(file: &PolytopeFile, tol: &Tolerance) -> Result<HPolytope> {
    if let Some(h) = file.h()? {
        return Ok(h);
    }
    match file.v()? {
        Some(v) => Ok(v_to_h(&v, tol)?),
        None => bail!("polytope file has neither halfspaces nor vertices"),
    }
}

fn compute(robot: &RobotSnapshot, set: WrenchSet, rep: Rep, out: &PathBuf, tol: &Tolerance) -> Result<u8> {
    let started = Instant::now();
    let want_h = rep != Rep::V;
    let h_of = |v: &VPolytope| -> Result<Option<HPolytope>> {
        Ok(if want_h { Some(v_to_h(v, tol)?) } else { None })
    };
    let (label, v, h) = match set {
        WrenchSet::Awp => {
            let v = awp(robot, tol)?;
            let h = h_of(&v)?;
            ("awp", v, h)
        }
        WrenchSet::Cwc => {
            let c = cwc(robot, tol)?;
            ("cwc", c.v, Some(c.h))
        }
        WrenchSet::Fwp => {
            let f = fwp_intersection(robot, tol)?;
            ("fwp", f.v, Some(f.h))
        }
        WrenchSet::FwpPerfoot => {
            let v = fwp_per_foot(robot, tol)?;
            let h = h_of(&v)?;
            ("fwp-perfoot", v, h)
        }
    };
    let ms = started.elapsed().as_secs_f64() * 1e3;
    let mut file = PolytopeFile::new(6);
    if rep != Rep::H {
        file = file.with_v(&v);
    }
    if let (true, Some(h)) = (want_h, &h) {
        file = file.with_h(h);
    }
    let file = file.with_meta(format!("{label} of {}", robot.name), tol, ms);
    file.write(out)?;
    Ok(if v.is_empty() { EXIT_EMPTY } else { 0 })
}
