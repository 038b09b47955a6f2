//! Halfspace systems: vertex enumeration, redundancy removal, intersection
//! and the inscribed-ball LP.

use super::dd::{DoubleDescription, Ray};
use super::hpolytope::HPolytope;
use super::linalg::{dot, independent_rows, normalized, rank, solve_rows};
use super::lp::{self, Outcome};
use super::vpolytope::VPolytope;
use super::Tolerance;
use crate::error::{Error, Result};

/// Largest inscribed ball of a halfspace system.
#[derive(Debug, Clone, PartialEq)]
pub enum Chebyshev {
    Empty,
    Unbounded,
    Center { point: Vec<f64>, radius: f64 },
}

/// Center and radius of the largest ball inside `p`. Equality pairs are
/// honored as equalities and the ball lives in their solution space.
pub fn chebyshev_center(p: &HPolytope) -> Chebyshev {
    if p.is_empty() {
        return Chebyshev::Empty;
    }
    let d = p.dim();
    let mut ineq_rows: Vec<Vec<f64>> = Vec::new();
    let mut ineq_b: Vec<f64> = Vec::new();
    let mut eq: Vec<(&[f64], f64)> = Vec::new();
    for (i, (a, b)) in p.rows().enumerate() {
        if p.is_equality(i) {
            eq.push((a, b));
        } else {
            let mut g = a.to_vec();
            g.push(crate::kernel::linalg::norm(a));
            ineq_rows.push(g);
            ineq_b.push(b);
        }
    }
    let eq_normals: Vec<&[f64]> = eq.iter().map(|(a, _)| *a).collect();
    if !eq.is_empty() && rank(&eq_normals, d, 1e-9) == d {
        // a single point: solve the equalities, radius zero
        let rhs: Vec<f64> = eq.iter().map(|e| e.1).collect();
        let pick = independent_rows(&eq_normals, 0..eq.len(), d, 1e-6);
        let Some(x) = solve_rows(&eq_normals, &rhs, &pick) else {
            return Chebyshev::Empty;
        };
        let feasible = p
            .rows()
            .all(|(a, b)| dot(a, &x) <= b + 1e-7 * (1.0 + b.abs()));
        return if feasible {
            Chebyshev::Center {
                point: x,
                radius: 0.0,
            }
        } else {
            Chebyshev::Empty
        };
    }
    let mut r_nonneg = vec![0.0; d + 1];
    r_nonneg[d] = -1.0;
    let mut ineq: Vec<(&[f64], f64)> = ineq_rows
        .iter()
        .zip(&ineq_b)
        .map(|(g, b)| (g.as_slice(), *b))
        .collect();
    ineq.push((&r_nonneg, 0.0));
    let eq_ext: Vec<Vec<f64>> = eq
        .iter()
        .map(|(a, _)| {
            let mut e = a.to_vec();
            e.push(0.0);
            e
        })
        .collect();
    let eq_rows: Vec<(&[f64], f64)> = eq_ext
        .iter()
        .zip(&eq)
        .map(|(e, (_, f))| (e.as_slice(), *f))
        .collect();
    let mut c = vec![0.0; d + 1];
    c[d] = 1.0;
    match lp::maximize(&c, &ineq, &eq_rows) {
        Outcome::Optimal { mut x, .. } => {
            let radius = x.pop().expect("radius variable").max(0.0);
            Chebyshev::Center { point: x, radius }
        }
        Outcome::Infeasible => Chebyshev::Empty,
        Outcome::Unbounded => Chebyshev::Unbounded,
    }
}

/// Feasibility of `{a_i·x <= b_i + slack}`.
fn is_feasible(rows: &[Vec<f64>], dim: usize, slack: f64) -> bool {
    let ineq: Vec<(&[f64], f64)> = rows
        .iter()
        .map(|r| (&r[..dim], r[dim] + slack))
        .collect();
    !matches!(lp::maximize(&vec![0.0; dim], &ineq, &[]), Outcome::Infeasible)
}

/// Drops every halfspace whose removal leaves the set unchanged, testing
/// rows in canonical order against the rows still kept. Returns the
/// canonical empty polytope when the system is infeasible.
pub fn remove_redundant(p: &HPolytope, tol: &Tolerance) -> HPolytope {
    if p.is_empty() {
        return p.clone();
    }
    let dim = p.dim();
    let rows: Vec<Vec<f64>> = p
        .rows()
        .map(|(a, b)| {
            let mut r = a.to_vec();
            r.push(b);
            r
        })
        .collect();
    if !is_feasible(&rows, dim, tol.eps_contain) {
        return HPolytope::empty(dim);
    }
    let mut kept = vec![true; rows.len()];
    for i in 0..rows.len() {
        let a = &rows[i][..dim];
        let b = rows[i][dim];
        let mut ineq: Vec<(&[f64], f64)> = rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && kept[*j])
            .map(|(_, r)| (&r[..dim], r[dim]))
            .collect();
        ineq.push((a, b + 1.0));
        if let Outcome::Optimal { value, .. } = lp::maximize(a, &ineq, &[]) {
            if value <= b + tol.eps_hull * (1.0 + b.abs()) {
                kept[i] = false;
            }
        }
    }
    let kept_rows = rows
        .into_iter()
        .zip(kept)
        .filter_map(|(r, k)| k.then_some(r))
        .collect();
    HPolytope::from_unit_rows(dim, kept_rows, tol)
}

/// `A ∩ B` with redundant halfspaces removed.
pub fn intersect(a: &HPolytope, b: &HPolytope, tol: &Tolerance) -> Result<HPolytope> {
    a.check_dim(b.dim())?;
    if a.is_empty() || b.is_empty() {
        return Ok(HPolytope::empty(a.dim()));
    }
    let rows = a
        .rows()
        .chain(b.rows())
        .map(|(n, o)| {
            let mut r = n.to_vec();
            r.push(o);
            r
        })
        .collect();
    let stacked = HPolytope::from_unit_rows(a.dim(), rows, tol);
    Ok(remove_redundant(&stacked, tol))
}

/// Concatenation of two halfspace systems without any reduction.
pub fn stack(a: &HPolytope, b: &HPolytope, tol: &Tolerance) -> Result<HPolytope> {
    a.check_dim(b.dim())?;
    if a.is_empty() || b.is_empty() {
        return Ok(HPolytope::empty(a.dim()));
    }
    let rows = a
        .rows()
        .chain(b.rows())
        .map(|(n, o)| {
            let mut r = n.to_vec();
            r.push(o);
            r
        })
        .collect();
    Ok(HPolytope::from_unit_rows(a.dim(), rows, tol))
}

/// Homogenized system `b t - a·x >= 0`, `t >= 0` in shifted and scaled
/// coordinates `x = center + scale·y`.
struct Homogenized {
    dim: usize,
    center: Vec<f64>,
    scale: f64,
    rows: Vec<Vec<f64>>,
    /// Rows before shifting, for vertex polishing.
    raw: Vec<(Vec<f64>, f64)>,
}

impl Homogenized {
    fn new(dim: usize, rows: impl Iterator<Item = (Vec<f64>, f64)>, center: Vec<f64>) -> Self {
        let raw: Vec<(Vec<f64>, f64)> = rows.collect();
        let shifted: Vec<f64> = raw.iter().map(|(a, b)| b - dot(a, &center)).collect();
        let scale = shifted.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let mut hrows: Vec<Vec<f64>> = raw
            .iter()
            .zip(&shifted)
            .map(|((a, _), b)| {
                let mut r: Vec<f64> = a.iter().map(|x| -x).collect();
                r.push(b / scale);
                normalized(&r).expect("unit normal row")
            })
            .collect();
        let mut t = vec![0.0; dim + 1];
        t[dim] = 1.0;
        hrows.push(t);
        Homogenized {
            dim,
            center,
            scale,
            rows: hrows,
            raw,
        }
    }

    fn t_row(&self) -> usize {
        self.rows.len() - 1
    }

    fn to_local(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.center)
            .map(|(xi, ci)| (xi - ci) / self.scale)
            .collect()
    }

    fn extract(&self, rays: Vec<Ray>, tol: &Tolerance) -> VPolytope {
        let d = self.dim;
        let t_row = self.t_row();
        let mut vertices = Vec::new();
        let mut directions = Vec::new();
        for ray in rays {
            let t = ray.coords[d];
            if t > tol.eps_hull {
                let y: Vec<f64> = ray.coords[..d].iter().map(|v| v / t).collect();
                let mut x: Vec<f64> = y
                    .iter()
                    .zip(&self.center)
                    .map(|(yi, ci)| ci + self.scale * yi)
                    .collect();
                let tight: Vec<usize> = ray.zero.ones().filter(|&r| r != t_row).collect();
                if let Some(p) = self.polish(&tight, &x) {
                    // polishing must not move the vertex off its own cell
                    if super::linalg::max_abs_diff(&p, &x) <= 1e-6 * (1.0 + self.scale) {
                        x = p;
                    }
                }
                vertices.push(x);
            } else {
                directions.push(ray.coords[..d].to_vec());
            }
        }
        if vertices.is_empty() {
            return VPolytope::empty(d);
        }
        VPolytope::from_extreme(d, vertices, directions, tol)
    }

    /// Re-solves the vertex from the `d` tight rows it satisfies best,
    /// provided they are well conditioned.
    fn polish(&self, tight: &[usize], x: &[f64]) -> Option<Vec<f64>> {
        let d = self.dim;
        if tight.len() < d {
            return None;
        }
        let normals: Vec<&[f64]> = tight.iter().map(|&r| self.raw[r].0.as_slice()).collect();
        let rhs: Vec<f64> = tight.iter().map(|&r| self.raw[r].1).collect();
        let mut order: Vec<usize> = (0..tight.len()).collect();
        let resid: Vec<f64> = (0..tight.len()).map(|i| (dot(normals[i], x) - rhs[i]).abs()).collect();
        order.sort_by(|&i, &j| resid[i].total_cmp(&resid[j]).then(i.cmp(&j)));
        let pick = independent_rows(&normals, order, d, 1e-6);
        if pick.len() < d {
            return None;
        }
        solve_rows(&normals, &rhs, &pick)
    }
}

fn lineality_error() -> Error {
    Error::DegenerateGeometry(
        "halfspace system contains a line; vertex enumeration needs a pointed set".into(),
    )
}

/// Extreme points (and extreme rays, if unbounded) of a halfspace system.
/// An infeasible system yields the empty V-polytope.
pub fn h_to_v(p: &HPolytope, tol: &Tolerance) -> Result<VPolytope> {
    let d = p.dim();
    if p.is_empty() {
        return Ok(VPolytope::empty(d));
    }
    let center = match chebyshev_center(p) {
        Chebyshev::Empty => return Ok(VPolytope::empty(d)),
        Chebyshev::Center { point, .. } => point,
        Chebyshev::Unbounded => vec![0.0; d],
    };
    let h = Homogenized::new(d, p.rows().map(|(a, b)| (a.to_vec(), b)), center);
    let mut dd = DoubleDescription::new(&h.rows, d + 1, tol.eps_hull).map_err(|_| lineality_error())?;
    dd.run(0..h.rows.len());
    Ok(h.extract(dd.into_rays(), tol))
}

/// Vertex enumeration of `base ∩ extra`, resuming from a known double
/// description of `base` (`base_v` must be the vertex set of `base_h`) and
/// inserting only the rows of `extra`.
pub fn h_to_v_incremental(
    base_v: &VPolytope,
    base_h: &HPolytope,
    extra: &HPolytope,
    tol: &Tolerance,
) -> Result<VPolytope> {
    let d = base_h.dim();
    base_h.check_dim(extra.dim())?;
    base_h.check_dim(base_v.dim())?;
    if base_v.is_empty() || base_h.is_empty() || extra.is_empty() {
        return Ok(VPolytope::empty(d));
    }
    let n = base_v.vertices().len() as f64;
    let mut center = vec![0.0; d];
    for v in base_v.vertices() {
        center.iter_mut().zip(v).for_each(|(c, x)| *c += x / n);
    }
    let nbase = base_h.len();
    let h = Homogenized::new(
        d,
        base_h
            .rows()
            .chain(extra.rows())
            .map(|(a, b)| (a.to_vec(), b)),
        center,
    );
    let mut processed: Vec<usize> = (0..nbase).collect();
    processed.push(h.t_row());
    let seeds: Vec<Vec<f64>> = base_v
        .vertices()
        .iter()
        .map(|v| {
            let mut y = h.to_local(v);
            y.push(1.0);
            y
        })
        .chain(base_v.rays().iter().map(|r| {
            let mut y = r.clone();
            y.push(0.0);
            y
        }))
        .collect();
    let mut dd = DoubleDescription::seeded(&h.rows, d + 1, tol.eps_hull, &processed, seeds);
    dd.run(nbase..h.t_row());
    debug_assert!(dd.is_added(h.t_row()));
    Ok(h.extract(dd.into_rays(), tol))
}

