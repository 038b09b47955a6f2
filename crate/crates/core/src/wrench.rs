//! Lifting per-foot sets into 6D CoM wrench space: the actuation wrench
//! polytope (AWP), the contact wrench cone (CWC) and the feasible wrench
//! polytope (FWP).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{
    double_description, h_to_v, intersect, minkowski_sum, v_to_h, HPolytope, Tolerance,
    VPolytope,
};
use crate::limb::{force_polytope, friction_cone_rays, friction_force_polytope, ContactSpec, LimbModel};

/// Force and torque about the CoM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wrench {
    pub force: [f64; 3],
    pub torque: [f64; 3],
}

impl Wrench {
    pub fn new(force: [f64; 3], torque: [f64; 3]) -> Self {
        Wrench { force, torque }
    }

    pub fn from_slice(w: &[f64]) -> Result<Self> {
        if w.len() != 6 {
            return Err(Error::DimensionMismatch {
                expected: 6,
                found: w.len(),
            });
        }
        if w.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite wrench component".into()));
        }
        Ok(Wrench {
            force: [w[0], w[1], w[2]],
            torque: [w[3], w[4], w[5]],
        })
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.force.iter().chain(&self.torque).copied().collect()
    }

    /// Sagittal-plane coordinates `(F_x, F_z, τ_y)`.
    pub fn planar(&self) -> [f64; 3] {
        [self.force[0], self.force[2], self.torque[1]]
    }
}

/// Coordinates of `(F_x, F_z, τ_y)` inside a 6D wrench.
pub const PLANAR_DIMS: [usize; 3] = [0, 2, 4];

#[derive(Debug, Clone, PartialEq)]
pub struct RobotSnapshot {
    pub name: String,
    pub com: [f64; 3],
    pub limbs: Vec<LimbModel>,
    /// Index-aligned with `limbs`.
    pub contacts: Vec<ContactSpec>,
}

impl RobotSnapshot {
    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        if self.limbs.is_empty() {
            return Err(Error::InvalidInput("robot has no limbs".into()));
        }
        if self.limbs.len() != self.contacts.len() {
            return Err(Error::InvalidInput(format!(
                "{} limbs but {} contacts",
                self.limbs.len(),
                self.contacts.len()
            )));
        }
        if self.com.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite CoM position".into()));
        }
        for (limb, c) in self.limbs.iter().zip(&self.contacts) {
            limb.validate()?;
            if limb.jacobian.nrows() != 3 {
                return Err(Error::Limb {
                    limb: limb.id.clone(),
                    source: Box::new(Error::InvalidInput("robot limbs need a 3-row jacobian".into())),
                });
            }
            c.validate(tol).map_err(|e| e.in_limb(&limb.id))?;
            if limb.foot_position != c.foot_position {
                return Err(Error::Limb {
                    limb: limb.id.clone(),
                    source: Box::new(Error::InvalidInput(
                        "contact foot position differs from the limb's".into(),
                    )),
                });
            }
        }
        Ok(())
    }

    /// Foot position of limb `i` relative to the CoM.
    pub fn lever(&self, i: usize) -> [f64; 3] {
        let p = self.limbs[i].foot_position;
        std::array::from_fn(|k| p[k] - self.com[k])
    }
}

/// `(f, p × f)` with `p` already relative to the CoM.
pub fn lift_force_to_wrench(f: [f64; 3], p: [f64; 3]) -> Wrench {
    Wrench {
        force: f,
        torque: [
            p[1] * f[2] - p[2] * f[1],
            p[2] * f[0] - p[0] * f[2],
            p[0] * f[1] - p[1] * f[0],
        ],
    }
}

fn lift(v: &[f64], p: [f64; 3]) -> Vec<f64> {
    lift_force_to_wrench([v[0], v[1], v[2]], p).to_vec()
}

/// Image of a 3D force set under the lift at lever arm `p`. The lift is
/// injective, so extreme points map to extreme points.
pub fn lift_polytope(fp: &VPolytope, p: [f64; 3], tol: &Tolerance) -> Result<VPolytope> {
    if fp.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: fp.dim(),
        });
    }
    Ok(fp.map_affine(6, |v| lift(v, p), |r| lift(r, p), tol))
}

/// Wrenches one limb can apply, using its foot position as the lever arm.
pub fn limb_wrench_polytope(limb: &LimbModel, tol: &Tolerance) -> Result<VPolytope> {
    limb_wrench_at(limb, limb.foot_position, tol)
}

fn limb_wrench_at(limb: &LimbModel, p: [f64; 3], tol: &Tolerance) -> Result<VPolytope> {
    let fp = force_polytope(limb, tol)?;
    lift_polytope(&fp, p, tol).map_err(|e| e.in_limb(&limb.id))
}

/// Minkowski sum of the limb wrench polytopes, folded in limb order.
pub fn awp(robot: &RobotSnapshot, tol: &Tolerance) -> Result<VPolytope> {
    robot.validate(tol)?;
    let parts: Vec<VPolytope> = (0..robot.limbs.len())
        .into_par_iter()
        .map(|i| limb_wrench_at(&robot.limbs[i], robot.lever(i), tol))
        .collect::<Result<_>>()?;
    fold_sum(parts, &robot.limbs, tol)
}

fn fold_sum(parts: Vec<VPolytope>, limbs: &[LimbModel], tol: &Tolerance) -> Result<VPolytope> {
    let mut iter = parts.into_iter().zip(limbs);
    let (mut acc, _) = iter.next().expect("at least one limb");
    for (p, limb) in iter {
        acc = minkowski_sum(&acc, &p, tol).map_err(|e| e.in_limb(&limb.id))?;
    }
    Ok(acc)
}

/// Contact wrench cone: V-form with the apex at the origin plus its
/// extreme rays, and the conic H-form.
#[derive(Debug, Clone)]
pub struct Cwc {
    pub v: VPolytope,
    pub h: HPolytope,
}

/// Every friction pyramid edge of every contact, lifted to 6D.
pub fn cwc_rays(robot: &RobotSnapshot) -> Vec<Vec<f64>> {
    robot
        .contacts
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            let p = robot.lever(i);
            friction_cone_rays(c)
                .into_iter()
                .map(move |r| lift_force_to_wrench(r, p).to_vec())
        })
        .collect()
}

pub fn cwc(robot: &RobotSnapshot, tol: &Tolerance) -> Result<Cwc> {
    robot.validate(tol)?;
    let (v, h) = double_description(6, &[vec![0.0; 6]], &cwc_rays(robot), tol)?;
    Ok(Cwc { v, h })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    pub n_vertices: usize,
    pub n_facets: usize,
}

/// Both descriptions of a wrench set plus their sizes.
#[derive(Debug, Clone)]
pub struct Fwp {
    pub h: HPolytope,
    pub v: VPolytope,
    pub stats: Stats,
}

impl Fwp {
    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }
}

pub(crate) fn stats(v: &VPolytope, h: &HPolytope) -> Stats {
    Stats {
        n_vertices: v.vertices().len(),
        n_facets: if h.is_empty() { 0 } else { h.num_facets() },
    }
}

/// `AWP ∩ CWC`, the aggregate-constraint FWP.
pub fn fwp_intersection(robot: &RobotSnapshot, tol: &Tolerance) -> Result<Fwp> {
    let a = awp(robot, tol)?;
    let c = cwc(robot, tol)?;
    fwp_from_parts(&a, &c.h, tol)
}

pub fn fwp_from_parts(awp: &VPolytope, cwc: &HPolytope, tol: &Tolerance) -> Result<Fwp> {
    let ah = v_to_h(awp, tol)?;
    let h = intersect(&ah, cwc, tol)?;
    let v = h_to_v(&h, tol)?;
    let h = if v.is_empty() { HPolytope::empty(6) } else { h };
    let stats = stats(&v, &h);
    Ok(Fwp { h, v, stats })
}

/// Minkowski sum of the lifted per-foot friction polytopes: each foot's
/// force satisfies its own actuation and friction limits. Limbs whose
/// friction polytope is empty contribute nothing; if every limb is empty
/// the result is empty.
pub fn fwp_per_foot(robot: &RobotSnapshot, tol: &Tolerance) -> Result<VPolytope> {
    robot.validate(tol)?;
    let parts: Vec<Option<VPolytope>> = (0..robot.limbs.len())
        .into_par_iter()
        .map(|i| {
            let limb = &robot.limbs[i];
            let fp = friction_force_polytope(limb, &robot.contacts[i], tol)?;
            if fp.is_empty() {
                return Ok(None);
            }
            lift_polytope(&fp, robot.lever(i), tol)
                .map(Some)
                .map_err(|e| e.in_limb(&limb.id))
        })
        .collect::<Result<_>>()?;
    let (parts, limbs): (Vec<VPolytope>, Vec<LimbModel>) = parts
        .into_iter()
        .zip(&robot.limbs)
        .filter_map(|(p, l)| p.map(|p| (p, l.clone())))
        .unzip();
    if parts.is_empty() {
        return Ok(VPolytope::empty(6));
    }
    fold_sum(parts, &limbs, tol)
}
