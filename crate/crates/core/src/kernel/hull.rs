//! Point/ray sets to facets: the V→H direction.
//!
//! Points are first reduced to their affine hull, where the set is full
//! dimensional; facets are the extreme rays of the cone of valid
//! inequalities `{(a, β) : a·y <= β}` computed by double description, and
//! the incidence it produces decides which input points are extreme.

use fixedbitset::FixedBitSet;

use super::dd::DoubleDescription;
use super::hpolytope::HPolytope;
use super::linalg::{canonical_dedup, dot, norm, normalized, AffineFrame};
use super::vpolytope::VPolytope;
use super::Tolerance;
use crate::error::{Error, Result};

pub(crate) struct HullData {
    pub(crate) dim: usize,
    pub(crate) frame: AffineFrame,
    pub(crate) points: Vec<Vec<f64>>,
    pub(crate) rays: Vec<Vec<f64>>,
    /// Inequality rows `[a.., b]`, unit `a`, in ambient coordinates.
    pub(crate) facets: Vec<Vec<f64>>,
    pub(crate) point_extreme: Vec<bool>,
    pub(crate) ray_extreme: Vec<bool>,
}

pub(crate) fn check_points(dim: usize, pts: &[Vec<f64>]) -> Result<()> {
    for p in pts {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
    }
    Ok(())
}

pub(crate) fn hull_core(
    dim: usize,
    points: Vec<Vec<f64>>,
    rays: Vec<Vec<f64>>,
    tol: &Tolerance,
) -> Result<HullData> {
    check_points(dim, &points)?;
    check_points(dim, &rays)?;
    if points.is_empty() {
        return Err(Error::InvalidInput("hull of an empty point set".into()));
    }
    let points = canonical_dedup(points, tol.eps_canon);
    let rays: Vec<Vec<f64>> = rays.iter().filter_map(|r| normalized(r)).collect();
    let rays = canonical_dedup(rays, tol.eps_canon);
    let frame = AffineFrame::compute(dim, &points, &rays, tol.eps_rank);
    let k = frame.dim();

    if k == 0 {
        let mut point_extreme = vec![false; points.len()];
        point_extreme[0] = true;
        return Ok(HullData {
            dim,
            frame,
            ray_extreme: vec![false; rays.len()],
            points,
            rays,
            facets: Vec::new(),
            point_extreme,
        });
    }

    let local: Vec<Vec<f64>> = points.iter().map(|p| frame.to_local(p)).collect();
    let scale = local.iter().map(|y| norm(y)).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let np = points.len();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(np + rays.len());
    for y in &local {
        let mut r: Vec<f64> = y.iter().map(|v| -v / scale).collect();
        r.push(1.0);
        rows.push(normalized(&r).expect("homogeneous row is nonzero"));
    }
    for d in &rays {
        let mut r: Vec<f64> = frame.direction_to_local(d).iter().map(|v| -v).collect();
        r.push(0.0);
        let r = normalized(&r).ok_or_else(|| {
            Error::DegenerateGeometry("ray vanishes in its own affine frame".into())
        })?;
        rows.push(r);
    }

    let mut dd = DoubleDescription::new(&rows, k + 1, tol.eps_hull).map_err(|_| {
        Error::DegenerateGeometry("the set contains a line (rays are not pointed)".into())
    })?;
    // rays first, then points from the outside in; interior points then
    // cost one pass over the current facets
    let mut order: Vec<usize> = (np..rows.len()).collect();
    let mut by_radius: Vec<usize> = (0..np).collect();
    by_radius.sort_by(|&i, &j| norm(&local[j]).total_cmp(&norm(&local[i])).then(i.cmp(&j)));
    order.extend(by_radius);
    dd.run(order);
    let cone_rays = dd.into_rays();

    let mut facets = Vec::new();
    let mut incidence: Vec<&FixedBitSet> = Vec::new();
    for ray in &cone_rays {
        let a = &ray.coords[..k];
        let beta = ray.coords[k];
        let an = norm(a);
        if an <= 1e-12 {
            continue;
        }
        let ag = frame.direction_to_global(a);
        let b = scale * beta + dot(&ag, &frame.origin);
        let mut row: Vec<f64> = ag.iter().map(|x| x / an).collect();
        row.push(b / an);
        facets.push(row);
        incidence.push(&ray.zero);
    }

    // facet sets per input row
    let nrows = rows.len();
    let nf = facets.len();
    let mut row_facets: Vec<FixedBitSet> = (0..nrows).map(|_| FixedBitSet::with_capacity(nf)).collect();
    let mut facet_rows: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for (f, z) in incidence.iter().enumerate() {
        for r in z.ones() {
            row_facets[r].insert(f);
            facet_rows[f].push(r);
        }
    }
    let extreme_among = |i: usize, range: std::ops::Range<usize>| -> bool {
        let fi = &row_facets[i];
        let Some(best) = fi.ones().min_by_key(|&f| facet_rows[f].len()) else {
            // no incident facet: extreme only if alone in its class
            return range.len() == 1;
        };
        !facet_rows[best]
            .iter()
            .any(|&j| j != i && range.contains(&j) && fi.is_subset(&row_facets[j]))
    };
    // a ray on every facet spans a line inside the set; extreme points and
    // rays are then undefined and all generators are kept
    let lineality = (np..nrows).any(|i| row_facets[i].count_ones(..) == nf);
    let (point_extreme, ray_extreme) = if lineality {
        (vec![true; np], vec![true; nrows - np])
    } else {
        (
            (0..np)
                .map(|i| row_facets[i].count_ones(..) >= k && extreme_among(i, 0..np))
                .collect(),
            (np..nrows).map(|i| extreme_among(i, np..nrows)).collect(),
        )
    };

    Ok(HullData {
        dim,
        frame,
        points,
        rays,
        facets,
        point_extreme,
        ray_extreme,
    })
}

impl HullData {
    pub(crate) fn vpolytope(&self, tol: &Tolerance) -> VPolytope {
        let verts = self
            .points
            .iter()
            .zip(&self.point_extreme)
            .filter_map(|(p, &e)| e.then(|| p.clone()))
            .collect();
        let rays = self
            .rays
            .iter()
            .zip(&self.ray_extreme)
            .filter_map(|(r, &e)| e.then(|| r.clone()))
            .collect();
        VPolytope::from_extreme(self.dim, verts, rays, tol)
    }

    pub(crate) fn hpolytope(&self, tol: &Tolerance) -> HPolytope {
        let cone = self.points.len() == 1 && self.points[0].iter().all(|&x| x == 0.0);
        let mut rows = self.facets.clone();
        for e in &self.frame.equalities {
            let b = dot(e, &self.frame.origin);
            let mut up = e.clone();
            up.push(b);
            let mut down: Vec<f64> = e.iter().map(|x| -x).collect();
            down.push(-b);
            rows.push(up);
            rows.push(down);
        }
        if cone {
            for r in &mut rows {
                *r.last_mut().expect("row has offset") = 0.0;
            }
        }
        HPolytope::from_unit_rows(self.dim, rows, tol)
    }
}

/// Extreme points of a finite point set, canonically ordered.
pub fn convex_hull(points: &[Vec<f64>], tol: &Tolerance) -> Result<VPolytope> {
    let dim = points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::InvalidInput("convex hull needs at least one point".into()))?;
    if dim == 0 {
        return Err(Error::InvalidInput("points must have positive dimension".into()));
    }
    Ok(hull_core(dim, points.to_vec(), Vec::new(), tol)?.vpolytope(tol))
}

/// Pointed polyhedral cone generated by `rays`, as a V-polytope with the
/// origin as its single vertex.
pub fn conic_hull(dim: usize, rays: &[Vec<f64>], tol: &Tolerance) -> Result<VPolytope> {
    Ok(hull_core(dim, vec![vec![0.0; dim]], rays.to_vec(), tol)?.vpolytope(tol))
}

/// Irredundant halfspace description. Lower-dimensional inputs get one
/// equality pair per missing dimension.
pub fn v_to_h(p: &VPolytope, tol: &Tolerance) -> Result<HPolytope> {
    if p.is_empty() {
        return Ok(HPolytope::empty(p.dim()));
    }
    Ok(hull_core(p.dim(), p.vertices().to_vec(), p.rays().to_vec(), tol)?.hpolytope(tol))
}

/// Both descriptions from a single hull computation.
pub fn double_description(
    dim: usize,
    points: &[Vec<f64>],
    rays: &[Vec<f64>],
    tol: &Tolerance,
) -> Result<(VPolytope, HPolytope)> {
    let data = hull_core(dim, points.to_vec(), rays.to_vec(), tol)?;
    Ok((data.vpolytope(tol), data.hpolytope(tol)))
}
