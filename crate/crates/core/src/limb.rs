//! Per-limb force sets: transpose-Jacobian pseudoinverse, the image of the
//! joint torque box, linearized friction cones and their intersection.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kernel::{
    convex_hull, h_to_v, intersect, v_to_h, HPolytope, Tolerance, VPolytope,
};

/// Hard cap on joints per limb; the torque box has `2^n` corners.
pub const MAX_JOINTS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct LimbModel {
    pub id: String,
    /// `m×n` map from joint velocities to foot velocity. `m = 3` for
    /// spatial limbs, `m = 2` for sagittal-plane (x, z) models.
    pub jacobian: DMatrix<f64>,
    pub tau_min: Vec<f64>,
    pub tau_max: Vec<f64>,
    /// Joint-space bias (gravity, Coriolis and inertial terms), length `n`.
    pub bias: Vec<f64>,
    /// Foot position relative to the CoM frame.
    pub foot_position: [f64; 3],
}

impl LimbModel {
    /// Limb with zero bias.
    pub fn new(
        id: impl Into<String>,
        jacobian: DMatrix<f64>,
        tau_min: Vec<f64>,
        tau_max: Vec<f64>,
        foot_position: [f64; 3],
    ) -> Self {
        let n = jacobian.ncols();
        LimbModel {
            id: id.into(),
            jacobian,
            tau_min,
            tau_max,
            bias: vec![0.0; n],
            foot_position,
        }
    }

    pub fn with_bias(mut self, bias: Vec<f64>) -> Self {
        self.bias = bias;
        self
    }

    pub fn joints(&self) -> usize {
        self.jacobian.ncols()
    }

    /// Structural checks; rank is checked lazily since it depends on the
    /// tolerance.
    pub fn validate(&self) -> Result<()> {
        let n = self.joints();
        let m = self.jacobian.nrows();
        let bad = |msg: String| Err(Error::Limb {
            limb: self.id.clone(),
            source: Box::new(Error::InvalidInput(msg)),
        });
        if !(m == 2 || m == 3) {
            return bad(format!("jacobian must have 2 or 3 rows, found {m}"));
        }
        if n == 0 {
            return bad("limb has no joints".into());
        }
        if n > MAX_JOINTS {
            return Err(Error::TooManyJoints {
                limb: self.id.clone(),
                joints: n,
                cap: MAX_JOINTS,
            });
        }
        for (name, v) in [("tau_min", &self.tau_min), ("tau_max", &self.tau_max), ("bias", &self.bias)] {
            if v.len() != n {
                return bad(format!("{name} has length {}, expected {n}", v.len()));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return bad(format!("{name} has a non-finite entry"));
            }
        }
        if let Some(j) = (0..n).find(|&j| self.tau_min[j] >= self.tau_max[j]) {
            return bad(format!("tau_min[{j}] must be below tau_max[{j}]"));
        }
        if self.jacobian.iter().any(|x| !x.is_finite())
            || self.foot_position.iter().any(|x| !x.is_finite())
        {
            return bad("non-finite jacobian or foot position".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactSpec {
    pub normal: [f64; 3],
    pub mu: f64,
    pub num_edges: usize,
    pub foot_position: [f64; 3],
}

impl ContactSpec {
    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        let n = norm3(&self.normal);
        if !n.is_finite() || (n - 1.0).abs() > tol.eps_rank {
            return Err(Error::InvalidInput(format!("contact normal has length {n}, expected 1")));
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidInput(format!("friction coefficient {} must be positive", self.mu)));
        }
        if self.num_edges < 3 {
            return Err(Error::InvalidInput(format!(
                "friction pyramid needs at least 3 edges, found {}",
                self.num_edges
            )));
        }
        Ok(())
    }
}

/// `(J Jᵀ)⁻¹ J`. Fails with [`Error::Singular`] when `J` loses row rank.
pub fn transpose_pseudoinverse(j: &DMatrix<f64>, tol: &Tolerance) -> Result<DMatrix<f64>> {
    pinv_checked(j, tol).map_err(|sigma_min| Error::Singular {
        limb: String::new(),
        sigma_min,
    })
}

fn pinv_checked(j: &DMatrix<f64>, tol: &Tolerance) -> std::result::Result<DMatrix<f64>, f64> {
    let sv = j.singular_values();
    let smax = sv.max();
    let smin = if j.nrows() > j.ncols() { 0.0 } else { sv.min() };
    if smin <= tol.eps_rank * smax.max(1.0) {
        return Err(smin);
    }
    let gram = j * j.transpose();
    let inv = gram.try_inverse().ok_or(smin)?;
    Ok(inv * j)
}

fn limb_pinv(limb: &LimbModel, tol: &Tolerance) -> Result<DMatrix<f64>> {
    limb.validate()?;
    pinv_checked(&limb.jacobian, tol).map_err(|sigma_min| Error::Singular {
        limb: limb.id.clone(),
        sigma_min,
    })
}

/// `J^{T#}(bias − τ)` at every corner τ of the torque box, in corner order
/// (bit `j` of the index selects `tau_max[j]`).
pub fn torque_corner_forces(limb: &LimbModel, tol: &Tolerance) -> Result<Vec<Vec<f64>>> {
    let pinv = limb_pinv(limb, tol)?;
    let n = limb.joints();
    let bias = DVector::from_column_slice(&limb.bias);
    Ok((0..1usize << n)
        .map(|mask| {
            let tau = DVector::from_fn(n, |j, _| {
                if mask >> j & 1 == 1 {
                    limb.tau_max[j]
                } else {
                    limb.tau_min[j]
                }
            });
            (&pinv * (&bias - tau)).iter().copied().collect()
        })
        .collect())
}

/// Achievable quasi-static contact forces of one limb.
pub fn force_polytope(limb: &LimbModel, tol: &Tolerance) -> Result<VPolytope> {
    let pts = torque_corner_forces(limb, tol)?;
    convex_hull(&pts, tol).map_err(|e| e.in_limb(&limb.id))
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(a: &[f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn unit3(a: [f64; 3]) -> [f64; 3] {
    let n = norm3(&a);
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Right-handed `(t₁, t₂)` completing `n`.
pub fn tangent_frame(n: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let a = if n[2].abs() > 0.99 { [1.0, 0.0, 0.0] } else { [0.0, 0.0, 1.0] };
    let t1 = unit3(cross(n, &a));
    let t2 = cross(n, &t1);
    (t1, t2)
}

/// Edges of the pyramid inscribed in the Coulomb cone, counter-clockwise
/// about the normal starting at `t₁`.
pub fn friction_cone_rays(c: &ContactSpec) -> Vec<[f64; 3]> {
    let n = c.normal;
    let (t1, t2) = tangent_frame(&n);
    (0..c.num_edges)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / c.num_edges as f64;
            let (s, co) = th.sin_cos();
            unit3(std::array::from_fn(|i| n[i] + c.mu * (co * t1[i] + s * t2[i])))
        })
        .collect()
}

/// One homogeneous halfspace per pyramid face.
pub fn friction_cone_halfspaces(c: &ContactSpec, tol: &Tolerance) -> Result<HPolytope> {
    let rays = friction_cone_rays(c);
    let k = rays.len();
    let normals: Vec<Vec<f64>> = (0..k)
        .map(|j| unit3(cross(&rays[(j + 1) % k], &rays[j])).to_vec())
        .collect();
    HPolytope::new(3, normals, vec![0.0; k], tol)
}

/// Forces the limb can produce that also satisfy its contact's friction
/// pyramid. May be empty.
pub fn friction_force_polytope(limb: &LimbModel, c: &ContactSpec, tol: &Tolerance) -> Result<VPolytope> {
    if limb.jacobian.nrows() != 3 {
        return Err(Error::Limb {
            limb: limb.id.clone(),
            source: Box::new(Error::DimensionMismatch {
                expected: 3,
                found: limb.jacobian.nrows(),
            }),
        });
    }
    c.validate(tol).map_err(|e| e.in_limb(&limb.id))?;
    let fp = force_polytope(limb, tol)?;
    let wrap = |e: Error| e.in_limb(&limb.id);
    let h = v_to_h(&fp, tol).map_err(wrap)?;
    let cone = friction_cone_halfspaces(c, tol).map_err(wrap)?;
    let both = intersect(&h, &cone, tol).map_err(wrap)?;
    h_to_v(&both, tol).map_err(wrap)
}
