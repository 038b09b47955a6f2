use super::linalg::{canonical_dedup, dot, normalized, AffineFrame};
use super::Tolerance;
use crate::error::{Error, Result};

/// Convex polyhedron given by its extreme points and extreme rays.
///
/// Vertices and rays are kept in canonical order (lexicographic after
/// rounding to `eps_canon`), so two descriptions of the same set compare
/// equal. An empty vertex list with no rays is the empty set.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    rays: Vec<Vec<f64>>,
    affine_dim: usize,
}

impl VPolytope {
    pub fn empty(dim: usize) -> Self {
        VPolytope {
            dim,
            vertices: Vec::new(),
            rays: Vec::new(),
            affine_dim: 0,
        }
    }

    /// Builds from points already known to be extreme: merges near
    /// duplicates, normalizes rays, sorts canonically and measures the
    /// affine dimension. Use [`convex_hull`](super::convex_hull) for
    /// arbitrary point clouds.
    pub(crate) fn from_extreme(
        dim: usize,
        vertices: Vec<Vec<f64>>,
        rays: Vec<Vec<f64>>,
        tol: &Tolerance,
    ) -> Self {
        if vertices.is_empty() {
            return VPolytope::empty(dim);
        }
        let vertices = canonical_dedup(vertices, tol.eps_canon);
        let rays: Vec<Vec<f64>> = rays.iter().filter_map(|r| normalized(r)).collect();
        let rays = canonical_dedup(rays, tol.eps_canon);
        let affine_dim = AffineFrame::compute(dim, &vertices, &rays, tol.eps_rank).dim();
        VPolytope {
            dim,
            vertices,
            rays,
            affine_dim,
        }
    }

    /// Reassembles a polytope from serialized parts without recomputing
    /// anything; dimensions are validated, order is taken as given.
    pub fn from_parts(
        dim: usize,
        vertices: Vec<Vec<f64>>,
        rays: Vec<Vec<f64>>,
        affine_dim: usize,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for v in vertices.iter().chain(&rays) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite coordinate".into()));
            }
        }
        if affine_dim > dim {
            return Err(Error::InvalidInput(format!(
                "affine dimension {affine_dim} exceeds ambient dimension {dim}"
            )));
        }
        if vertices.is_empty() && !rays.is_empty() {
            return Err(Error::InvalidInput(
                "rays given without any vertex".into(),
            ));
        }
        Ok(VPolytope {
            dim,
            vertices,
            rays,
            affine_dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<f64>] {
        &self.rays
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    /// Vertex set closed under negation within `eps` (max-norm).
    pub fn is_centrally_symmetric(&self, eps: f64) -> bool {
        self.vertices.iter().all(|v| {
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            self.vertices
                .iter()
                .any(|w| super::linalg::max_abs_diff(w, &neg) <= eps)
        })
    }

    /// Applies `x ↦ f(x)` to every vertex and linear part to rays, then
    /// canonicalizes. The caller guarantees the map is affine.
    pub(crate) fn map_affine(
        &self,
        out_dim: usize,
        point: impl Fn(&[f64]) -> Vec<f64>,
        direction: impl Fn(&[f64]) -> Vec<f64>,
        tol: &Tolerance,
    ) -> VPolytope {
        VPolytope::from_extreme(
            out_dim,
            self.vertices.iter().map(|v| point(v)).collect(),
            self.rays.iter().map(|r| direction(r)).collect(),
            tol,
        )
    }

    /// `max_v d·v`; `+inf` when some ray has positive projection.
    pub(crate) fn support_unchecked(&self, d: &[f64]) -> f64 {
        if self.rays.iter().any(|r| dot(r, d) > 0.0) {
            return f64::INFINITY;
        }
        self.vertices
            .iter()
            .map(|v| dot(v, d))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
