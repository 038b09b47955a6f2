//! Shared fixtures and independent LP oracles (minilp) for the integration
//! tests. Nothing here calls the crate's own LP or hull code.

#![allow(dead_code)]

use minilp::{ComparisonOp, OptimizationDirection, Problem, Variable};
use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wrenchpoly::limb::{ContactSpec, LimbModel};
use wrenchpoly::wrench::RobotSnapshot;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// `n` random points in `[-1, 1]^d`, or inside a random affine subspace of
/// dimension `flat` when given.
pub fn random_points(rng: &mut impl Rng, d: usize, n: usize, flat: Option<usize>) -> Vec<Vec<f64>> {
    match flat {
        None => (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect(),
        Some(k) => {
            let origin: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let basis: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            (0..n)
                .map(|_| {
                    let c: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    (0..d)
                        .map(|i| origin[i] + (0..k).map(|j| c[j] * basis[j][i]).sum::<f64>())
                        .collect()
                })
                .collect()
        }
    }
}

pub fn unit_direction(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        // Gaussian via Box-Muller gives a uniform direction after normalizing
        let v: Vec<f64> = (0..d)
            .map(|_| {
                let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Every point of `a` has a partner in `b` within `eps` (max-norm) and vice versa.
pub fn same_point_set(a: &[Vec<f64>], b: &[Vec<f64>], eps: f64) -> bool {
    let close = |x: &Vec<f64>, y: &Vec<f64>| x.iter().zip(y).all(|(p, q)| (p - q).abs() <= eps);
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| close(x, y)))
        && b.iter().all(|x| a.iter().any(|y| close(x, y)))
}

/// L1 distance from `x` to `conv(points) + cone(rays)`.
pub fn oracle_l1_distance(points: &[Vec<f64>], rays: &[Vec<f64>], x: &[f64]) -> f64 {
    let d = x.len();
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let lam: Vec<Variable> = points.iter().map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let mu: Vec<Variable> = rays.iter().map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let sp: Vec<Variable> = (0..d).map(|_| p.add_var(1.0, (0.0, f64::INFINITY))).collect();
    let sn: Vec<Variable> = (0..d).map(|_| p.add_var(1.0, (0.0, f64::INFINITY))).collect();
    for i in 0..d {
        let mut terms: Vec<(Variable, f64)> = Vec::new();
        terms.extend(lam.iter().zip(points).map(|(v, q)| (*v, q[i])));
        terms.extend(mu.iter().zip(rays).map(|(v, r)| (*v, r[i])));
        terms.push((sp[i], 1.0));
        terms.push((sn[i], -1.0));
        p.add_constraint(terms, ComparisonOp::Eq, x[i]);
    }
    if !points.is_empty() {
        p.add_constraint(lam.iter().map(|v| (*v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
    }
    match p.solve() {
        Ok(s) => s.objective(),
        Err(_) => f64::INFINITY,
    }
}

/// Tangent frame with the documented convention, written out again here.
pub fn frame(n: [f64; 3]) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
    let n = Vector3::from(n);
    let a = if n.z.abs() > 0.99 { Vector3::x() } else { Vector3::z() };
    let t1 = n.cross(&a).normalize();
    let t2 = n.cross(&t1);
    (t1, t2, n)
}

/// Edges of the inscribed pyramid.
pub fn pyramid_edges(c: &ContactSpec) -> Vec<Vector3<f64>> {
    let (t1, t2, n) = frame(c.normal);
    (0..c.num_edges)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / c.num_edges as f64;
            (n + c.mu * (th.cos() * t1 + th.sin() * t2)).normalize()
        })
        .collect()
}

/// Inscribed pyramid as a regular k-gon cross-section: `f` is inside iff
/// its tangential part over `f·n` lies within the polygon's apothem along
/// every edge normal. Returns the rows `g` of `g·f <= 0`.
pub fn pyramid_rows(c: &ContactSpec) -> Vec<Vector3<f64>> {
    let (t1, t2, n) = frame(c.normal);
    let k = c.num_edges as f64;
    let apothem = c.mu * (std::f64::consts::PI / k).cos();
    (0..c.num_edges)
        .map(|j| {
            let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / k;
            phi.cos() * t1 + phi.sin() * t2 - apothem * n
        })
        .collect()
}

pub fn in_pyramid(c: &ContactSpec, f: &Vector3<f64>, slack: f64) -> bool {
    let (_, _, n) = frame(c.normal);
    n.dot(f) >= -slack && pyramid_rows(c).iter().all(|g| g.dot(f) <= slack)
}

fn square_jt(limb: &LimbModel) -> Matrix3<f64> {
    assert_eq!(limb.jacobian.shape(), (3, 3), "oracles assume square jacobians");
    Matrix3::from_fn(|r, c| limb.jacobian[(c, r)])
}

/// Corner forces by solving `Jᵀ f = bias − τ` directly.
pub fn corner_forces(limb: &LimbModel) -> Vec<Vector3<f64>> {
    let jt = square_jt(limb);
    let lu = jt.lu();
    (0..8)
        .map(|m| {
            let rhs = Vector3::from_fn(|j, _| {
                limb.bias[j] - if m >> j & 1 == 1 { limb.tau_max[j] } else { limb.tau_min[j] }
            });
            lu.solve(&rhs).expect("square jacobian is invertible")
        })
        .collect()
}

pub fn lift(f: &Vector3<f64>, p: [f64; 3]) -> Vec<f64> {
    let t = Vector3::from(p).cross(f);
    vec![f.x, f.y, f.z, t.x, t.y, t.z]
}

pub fn lever(robot: &RobotSnapshot, k: usize) -> [f64; 3] {
    let p = robot.limbs[k].foot_position;
    [p[0] - robot.com[0], p[1] - robot.com[1], p[2] - robot.com[2]]
}

/// Wrench residual of the best split `w = Σ_k lift(f_k)` where each foot
/// force respects its own torque box and friction pyramid (L1 norm).
pub fn per_foot_residual(robot: &RobotSnapshot, w: &[f64]) -> f64 {
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let free = (f64::NEG_INFINITY, f64::INFINITY);
    let mut rows: Vec<Vec<(Variable, f64)>> = vec![Vec::new(); 6];
    for (k, (limb, c)) in robot.limbs.iter().zip(&robot.contacts).enumerate() {
        let f: Vec<Variable> = (0..3).map(|_| p.add_var(0.0, free)).collect();
        let jt = square_jt(limb);
        // τ = bias − Jᵀ f within bounds
        for j in 0..3 {
            let terms: Vec<(Variable, f64)> = (0..3).map(|i| (f[i], jt[(j, i)])).collect();
            p.add_constraint(terms.clone(), ComparisonOp::Le, limb.bias[j] - limb.tau_min[j]);
            p.add_constraint(terms, ComparisonOp::Ge, limb.bias[j] - limb.tau_max[j]);
        }
        for g in pyramid_rows(c) {
            p.add_constraint((0..3).map(|i| (f[i], g[i])).collect::<Vec<_>>(), ComparisonOp::Le, 0.0);
        }
        let r = lever(robot, k);
        // column i of the lift map: e_i and r × e_i
        for i in 0..3 {
            let mut e = Vector3::zeros();
            e[i] = 1.0;
            let col = lift(&e, r);
            for (row, v) in rows.iter_mut().zip(col) {
                if v != 0.0 {
                    row.push((f[i], v));
                }
            }
        }
    }
    for (i, mut row) in rows.into_iter().enumerate() {
        let sp = p.add_var(1.0, (0.0, f64::INFINITY));
        let sn = p.add_var(1.0, (0.0, f64::INFINITY));
        row.push((sp, 1.0));
        row.push((sn, -1.0));
        p.add_constraint(row, ComparisonOp::Eq, w[i]);
    }
    match p.solve() {
        Ok(s) => s.objective(),
        Err(_) => f64::INFINITY,
    }
}

/// Residual of `w` against the Minkowski sum of lifted torque-box images.
pub fn awp_residual(robot: &RobotSnapshot, w: &[f64]) -> f64 {
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let mut rows: Vec<Vec<(Variable, f64)>> = vec![Vec::new(); 6];
    for (k, limb) in robot.limbs.iter().enumerate() {
        let r = lever(robot, k);
        let mut lam = Vec::new();
        for f in corner_forces(limb) {
            let v = p.add_var(0.0, (0.0, f64::INFINITY));
            for (row, x) in rows.iter_mut().zip(lift(&f, r)) {
                row.push((v, x));
            }
            lam.push((v, 1.0));
        }
        p.add_constraint(lam, ComparisonOp::Eq, 1.0);
    }
    for (i, mut row) in rows.into_iter().enumerate() {
        let sp = p.add_var(1.0, (0.0, f64::INFINITY));
        let sn = p.add_var(1.0, (0.0, f64::INFINITY));
        row.push((sp, 1.0));
        row.push((sn, -1.0));
        p.add_constraint(row, ComparisonOp::Eq, w[i]);
    }
    p.solve().map(|s| s.objective()).unwrap_or(f64::INFINITY)
}

/// Residual of `w` against the cone of lifted pyramid edges.
pub fn cwc_residual(robot: &RobotSnapshot, w: &[f64]) -> f64 {
    let rays: Vec<Vec<f64>> = robot
        .contacts
        .iter()
        .enumerate()
        .flat_map(|(k, c)| {
            let r = lever(robot, k);
            pyramid_edges(c).into_iter().map(move |e| lift(&e, r))
        })
        .collect();
    oracle_l1_distance(&[vec![0.0; 6]], &rays, w)
}

pub fn unit_limb(id: &str, foot: [f64; 3]) -> LimbModel {
    LimbModel::new(id, DMatrix::identity(3, 3), vec![-1.0; 3], vec![1.0; 3], foot)
}

pub fn unit_quadruped(mu: f64) -> RobotSnapshot {
    let feet = [("lf", [0.5, 0.3, 0.0]), ("rf", [0.5, -0.3, 0.0]), ("lh", [-0.5, 0.3, 0.0]), ("rh", [-0.5, -0.3, 0.0])];
    let limbs: Vec<LimbModel> = feet.iter().map(|(id, p)| unit_limb(id, *p)).collect();
    let contacts = limbs
        .iter()
        .map(|l| ContactSpec {
            normal: [0.0, 0.0, 1.0],
            mu,
            num_edges: 4,
            foot_position: l.foot_position,
        })
        .collect();
    RobotSnapshot {
        name: "unit_quadruped".into(),
        com: [0.0; 3],
        limbs,
        contacts,
    }
}

/// Random rotation from a random unit quaternion.
pub fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    let q = unit_direction(rng, 4);
    let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
    Matrix3::new(
        1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
        2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
        2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y),
    )
}

/// Unit vector within `max_tilt` radians of `ẑ`.
pub fn tilted_normal(rng: &mut impl Rng, max_tilt: f64) -> [f64; 3] {
    let tilt = rng.gen_range(0.0..max_tilt);
    let az = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    [tilt.sin() * az.cos(), tilt.sin() * az.sin(), tilt.cos()]
}

/// Well-conditioned square limb whose force polytope is centred on
/// `centre` with half-widths of roughly `scale`.
pub fn random_limb(rng: &mut impl Rng, id: &str, foot: [f64; 3], centre: Vector3<f64>, scale: f64) -> LimbModel {
    let r = random_rotation(rng);
    let s = Matrix3::from_diagonal(&Vector3::from_fn(|_, _| rng.gen_range(0.7..1.4)));
    let j = r * s / scale;
    let tau_max: Vec<f64> = (0..3).map(|_| rng.gen_range(0.6..1.4)).collect();
    let tau_min: Vec<f64> = (0..3).map(|_| -rng.gen_range(0.6..1.4)).collect();
    // bias = τ_mid + Jᵀ·centre puts the box midpoint's force at `centre`
    let mid = Vector3::from_fn(|i, _| 0.5 * (tau_max[i] + tau_min[i]));
    let bias = mid + j.transpose() * centre;
    LimbModel::new(
        id,
        DMatrix::from_fn(3, 3, |a, b| j[(a, b)]),
        tau_min,
        tau_max,
        foot,
    )
    .with_bias(bias.iter().copied().collect())
}

/// Quadruped with jittered feet, tilted contacts and random limbs.
pub fn random_quadruped(rng: &mut impl Rng) -> RobotSnapshot {
    let base = [("lf", 0.5, 0.3), ("rf", 0.5, -0.3), ("lh", -0.5, 0.3), ("rh", -0.5, -0.3)];
    let mut limbs = Vec::new();
    let mut contacts = Vec::new();
    for (id, x, y) in base {
        let foot = [
            x + rng.gen_range(-0.1..0.1),
            y + rng.gen_range(-0.1..0.1),
            rng.gen_range(-0.05..0.05),
        ];
        let normal = tilted_normal(rng, 0.3);
        let centre = 0.6 * Vector3::from(normal);
        limbs.push(random_limb(rng, id, foot, centre, 1.0));
        contacts.push(ContactSpec {
            normal,
            mu: rng.gen_range(0.3..0.9),
            num_edges: rng.gen_range(3..7),
            foot_position: foot,
        });
    }
    RobotSnapshot {
        name: "random_quadruped".into(),
        com: [rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05), rng.gen_range(0.3..0.5)],
        limbs,
        contacts,
    }
}

/// The unit quadruped's limbs on a randomized stance: jittered feet, tilted
/// contact normals, random friction and pyramid resolution.
pub fn random_stance(rng: &mut impl Rng) -> RobotSnapshot {
    let mut robot = unit_quadruped(0.5);
    robot.name = "random_stance".into();
    for (limb, c) in robot.limbs.iter_mut().zip(robot.contacts.iter_mut()) {
        let foot = [
            limb.foot_position[0] + rng.gen_range(-0.15..0.15),
            limb.foot_position[1] + rng.gen_range(-0.1..0.1),
            rng.gen_range(-0.1..0.1),
        ];
        limb.foot_position = foot;
        c.foot_position = foot;
        c.normal = tilted_normal(rng, 0.4);
        c.mu = rng.gen_range(0.3..1.0);
        c.num_edges = rng.gen_range(3..=6);
    }
    robot.com = [rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1), rng.gen_range(0.3..0.6)];
    robot
}

/// Points sorted on their first coordinate for fast near-duplicate lookup.
pub struct SortedPoints<'a> {
    pts: Vec<&'a Vec<f64>>,
}

impl<'a> SortedPoints<'a> {
    pub fn new(points: &'a [Vec<f64>]) -> Self {
        let mut pts: Vec<&Vec<f64>> = points.iter().collect();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        SortedPoints { pts }
    }

    /// Whether some point is within `eps` of `x` in every coordinate.
    pub fn has_within(&self, x: &[f64], eps: f64) -> bool {
        let start = self.pts.partition_point(|p| p[0] < x[0] - eps);
        self.pts[start..]
            .iter()
            .take_while(|p| p[0] <= x[0] + eps)
            .any(|p| p.iter().zip(x).all(|(a, b)| (a - b).abs() <= eps))
    }
}
