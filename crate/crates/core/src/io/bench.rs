//! Representation benchmark: three ways of getting from a robot snapshot to
//! FWP membership answers.
//!
//! * `v`: keep vertex forms, convert the stacked halfspaces once without
//!   redundancy removal, answer queries by containment LP.
//! * `h`: convert both sets to halfspaces, intersect with redundancy
//!   removal, answer queries by facet evaluation.
//! * `dd`: keep the AWP's double description and insert the CWC rows into
//!   it incrementally; queries use the stacked halfspaces.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{
    conic_hull, contains, double_description, h_to_v, h_to_v_incremental, intersect, stack,
    v_to_h, HPolytope, Tolerance, VPolytope,
};
use crate::query::check_wrench;
use crate::wrench::{awp, cwc_rays, RobotSnapshot};

pub const QUERIES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    V,
    H,
    Dd,
}

impl Pipeline {
    pub const ALL: [Pipeline; 3] = [Pipeline::V, Pipeline::H, Pipeline::Dd];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::V => "v",
            Pipeline::H => "h",
            Pipeline::Dd => "dd",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "v" => Ok(Pipeline::V),
            "h" => Ok(Pipeline::H),
            "dd" => Ok(Pipeline::Dd),
            other => Err(Error::InvalidInput(format!("unknown pipeline `{other}` (v, h or dd)"))),
        }
    }
}

/// One CSV line. For the cone stage `n_vertices` counts extreme rays.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub pipeline: String,
    pub stage: String,
    pub n_vertices: usize,
    pub n_facets: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub fwp: VPolytope,
    /// Number of queries answered inside.
    pub inside: usize,
    /// Rows in stage order: awp, cwc, fwp, query.
    pub rows: Vec<BenchRow>,
}

fn facets(h: &HPolytope) -> usize {
    if h.is_empty() {
        0
    } else {
        h.num_facets()
    }
}

struct Timer {
    pipeline: Pipeline,
    rows: Vec<BenchRow>,
}

impl Timer {
    fn stage<T>(
        &mut self,
        stage: &str,
        f: impl FnOnce() -> Result<T>,
        counts: impl Fn(&T) -> (usize, usize),
    ) -> Result<T> {
        let t = Instant::now();
        let out = f()?;
        let wall_ms = t.elapsed().as_secs_f64() * 1e3;
        let (n_vertices, n_facets) = counts(&out);
        self.rows.push(BenchRow {
            pipeline: self.pipeline.name().into(),
            stage: stage.into(),
            n_vertices,
            n_facets,
            wall_ms,
        });
        Ok(out)
    }
}

/// Radical inverse of `i` in base `b`.
fn halton(mut i: usize, b: usize) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// Deterministic query wrenches spread over the AWP's bounding box.
pub fn query_points(awp: &VPolytope, n: usize) -> Vec<Vec<f64>> {
    let d = awp.dim();
    if awp.is_empty() {
        return vec![vec![0.0; d]; n];
    }
    let lo: Vec<f64> = (0..d)
        .map(|k| awp.vertices().iter().map(|v| v[k]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..d)
        .map(|k| awp.vertices().iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    const PRIMES: [usize; 6] = [2, 3, 5, 7, 11, 13];
    (1..=n)
        .map(|i| (0..d).map(|k| lo[k] + (hi[k] - lo[k]) * halton(i, PRIMES[k % 6])).collect())
        .collect()
}

pub fn run_pipeline(robot: &RobotSnapshot, pipeline: Pipeline, tol: &Tolerance) -> Result<PipelineRun> {
    let mut timer = Timer {
        pipeline,
        rows: Vec::new(),
    };
    let vcount = |v: &VPolytope| v.vertices().len();
    let (fwp, inside) = match pipeline {
        Pipeline::V => {
            let a = timer.stage("awp", || awp(robot, tol), |a| (vcount(a), 0))?;
            let c = timer.stage(
                "cwc",
                || conic_hull(6, &cwc_rays(robot), tol),
                |c| (c.rays().len(), 0),
            )?;
            let f = timer.stage(
                "fwp",
                || {
                    let s = stack(&v_to_h(&a, tol)?, &v_to_h(&c, tol)?, tol)?;
                    Ok((h_to_v(&s, tol)?, s))
                },
                |(v, s)| (vcount(v), facets(s)),
            )?;
            let queries = query_points(&a, QUERIES);
            let inside = timer.stage(
                "query",
                || count_inside(&queries, |q| contains(&f.0, q, tol)),
                |_| (vcount(&f.0), facets(&f.1)),
            )?;
            (f.0, inside)
        }
        Pipeline::H => {
            let (a, ah) = timer.stage(
                "awp",
                || {
                    let a = awp(robot, tol)?;
                    let h = v_to_h(&a, tol)?;
                    Ok((a, h))
                },
                |(a, h)| (vcount(a), facets(h)),
            )?;
            let (_, ch) = timer.stage(
                "cwc",
                || double_description(6, &[vec![0.0; 6]], &cwc_rays(robot), tol),
                |(v, h)| (v.rays().len(), facets(h)),
            )?;
            let (fv, fh) = timer.stage(
                "fwp",
                || {
                    let h = intersect(&ah, &ch, tol)?;
                    Ok((h_to_v(&h, tol)?, h))
                },
                |(v, h)| (vcount(v), facets(h)),
            )?;
            let queries = query_points(&a, QUERIES);
            let inside = timer.stage(
                "query",
                || count_inside(&queries, |q| Ok(check_wrench(&fh, q, tol)?.feasible)),
                |_| (vcount(&fv), facets(&fh)),
            )?;
            (fv, inside)
        }
        Pipeline::Dd => {
            let (av, ah) = timer.stage(
                "awp",
                || {
                    let a = awp(robot, tol)?;
                    double_description(6, a.vertices(), &[], tol)
                },
                |(v, h)| (vcount(v), facets(h)),
            )?;
            let (_, ch) = timer.stage(
                "cwc",
                || double_description(6, &[vec![0.0; 6]], &cwc_rays(robot), tol),
                |(v, h)| (v.rays().len(), facets(h)),
            )?;
            let (fv, fh) = timer.stage(
                "fwp",
                || Ok((h_to_v_incremental(&av, &ah, &ch, tol)?, stack(&ah, &ch, tol)?)),
                |(v, h)| (vcount(v), facets(h)),
            )?;
            let queries = query_points(&av, QUERIES);
            let inside = timer.stage(
                "query",
                || count_inside(&queries, |q| Ok(check_wrench(&fh, q, tol)?.feasible)),
                |_| (vcount(&fv), facets(&fh)),
            )?;
            (fv, inside)
        }
    };
    Ok(PipelineRun {
        fwp,
        inside,
        rows: timer.rows,
    })
}

fn count_inside(queries: &[Vec<f64>], mut f: impl FnMut(&[f64]) -> Result<bool>) -> Result<usize> {
    let mut n = 0;
    for q in queries {
        if f(q)? {
            n += 1;
        }
    }
    Ok(n)
}

/// `repeat` runs of one pipeline; rows grouped by stage, runs in order.
pub fn bench(robot: &RobotSnapshot, pipeline: Pipeline, repeat: usize, tol: &Tolerance) -> Result<Vec<BenchRow>> {
    if repeat == 0 {
        return Err(Error::InvalidInput("repeat count must be positive".into()));
    }
    let mut runs = Vec::with_capacity(repeat);
    for _ in 0..repeat {
        runs.push(run_pipeline(robot, pipeline, tol)?.rows);
    }
    let stages = runs[0].len();
    Ok((0..stages)
        .flat_map(|s| runs.iter().map(move |r| r[s].clone()))
        .collect())
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["pipeline", "stage", "n_vertices", "n_facets", "wall_ms"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| Error::Io {
        context: "writing csv".into(),
        source,
    })
}
