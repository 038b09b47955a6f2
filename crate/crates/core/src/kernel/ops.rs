use super::hpolytope::HPolytope;
use super::hull::hull_core;
use super::linalg::{add, norm};
use super::lp::{solve_standard, Status};
use super::vpolytope::VPolytope;
use super::Tolerance;
use crate::error::{Error, Result};

/// `A ⊕ B`: hull of all pairwise vertex sums, rays united.
pub fn minkowski_sum(a: &VPolytope, b: &VPolytope, tol: &Tolerance) -> Result<VPolytope> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if a.is_empty() || b.is_empty() {
        return Ok(VPolytope::empty(a.dim()));
    }
    let mut sums = Vec::with_capacity(a.vertices().len() * b.vertices().len());
    for u in a.vertices() {
        for v in b.vertices() {
            sums.push(add(u, v));
        }
    }
    let rays = a.rays().iter().chain(b.rays()).cloned().collect();
    Ok(hull_core(a.dim(), sums, rays, tol)?.vpolytope(tol))
}

/// `max_{v ∈ P} d·v`.
pub fn support(p: &VPolytope, d: &[f64]) -> Result<f64> {
    if d.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: d.len(),
        });
    }
    if norm(d) == 0.0 {
        return Err(Error::InvalidInput("support direction must be nonzero".into()));
    }
    if p.is_empty() {
        return Err(Error::InvalidInput("support of the empty set".into()));
    }
    Ok(p.support_unchecked(d))
}

/// Membership test shared by both descriptions.
pub trait Membership {
    fn contains(&self, x: &[f64], tol: &Tolerance) -> Result<bool>;
}

impl Membership for HPolytope {
    fn contains(&self, x: &[f64], tol: &Tolerance) -> Result<bool> {
        self.check_dim(x.len())?;
        if self.is_empty() {
            return Ok(false);
        }
        Ok(self.slacks(x).iter().all(|&s| s >= -tol.eps_contain))
    }
}

impl Membership for VPolytope {
    /// Solves `min ‖Vλ + Rμ − x‖₁` over convex weights `λ` and conic
    /// weights `μ`; inside when the residual is within `eps_contain`.
    fn contains(&self, x: &[f64], tol: &Tolerance) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if self.is_empty() {
            return Ok(false);
        }
        Ok(l1_distance(self, x) <= tol.eps_contain)
    }
}

/// L1 distance from `x` to the V-polytope, by LP.
pub(crate) fn l1_distance(p: &VPolytope, x: &[f64]) -> f64 {
    let d = p.dim();
    let rows = d + 1;
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut cost = Vec::new();
    for v in p.vertices() {
        let mut c = v.clone();
        c.push(1.0);
        cols.push(c);
        cost.push(0.0);
    }
    for r in p.rays() {
        let mut c = r.clone();
        c.push(0.0);
        cols.push(c);
        cost.push(0.0);
    }
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut c = vec![0.0; rows];
            c[i] = s;
            cols.push(c);
            cost.push(1.0);
        }
    }
    let mut b = x.to_vec();
    b.push(1.0);
    let sol = solve_standard(&cols, &b, &cost);
    match sol.status {
        Status::Optimal => sol.value.max(0.0),
        _ => f64::INFINITY,
    }
}

/// Point-in-V-polytope distance exposed for diagnostics.
pub fn distance_l1(p: &VPolytope, x: &[f64]) -> Result<f64> {
    if x.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: x.len(),
        });
    }
    if p.is_empty() {
        return Ok(f64::INFINITY);
    }
    Ok(l1_distance(p, x))
}

pub fn contains<P: Membership + ?Sized>(p: &P, x: &[f64], tol: &Tolerance) -> Result<bool> {
    p.contains(x, tol)
}

/// Orthogonal projection onto the coordinates `dims`, re-hulled.
pub fn project(p: &VPolytope, dims: &[usize], tol: &Tolerance) -> Result<VPolytope> {
    if dims.is_empty() {
        return Err(Error::InvalidInput("projection needs at least one coordinate".into()));
    }
    for (i, &k) in dims.iter().enumerate() {
        if k >= p.dim() {
            return Err(Error::InvalidInput(format!(
                "coordinate {k} out of range for dimension {}",
                p.dim()
            )));
        }
        if dims[..i].contains(&k) {
            return Err(Error::InvalidInput(format!("coordinate {k} repeated")));
        }
    }
    if p.is_empty() {
        return Ok(VPolytope::empty(dims.len()));
    }
    let pick = |v: &Vec<f64>| dims.iter().map(|&k| v[k]).collect::<Vec<f64>>();
    let pts = p.vertices().iter().map(pick).collect();
    let rays = p.rays().iter().map(pick).collect();
    Ok(hull_core(dims.len(), pts, rays, tol)?.vpolytope(tol))
}

/// Vertex-wise check that every vertex of `inner` lies in `outer`.
pub fn vertices_contained<P: Membership + ?Sized>(
    inner: &VPolytope,
    outer: &P,
    tol: &Tolerance,
) -> Result<bool> {
    for v in inner.vertices() {
        if !outer.contains(v, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

