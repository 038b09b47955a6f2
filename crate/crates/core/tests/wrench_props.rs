mod common;

use rand::Rng;

use common::*;
use wrenchpoly::kernel::{contains, intersect, v_to_h, Chebyshev, HPolytope, Tolerance};
use wrenchpoly::limb::force_polytope;
use wrenchpoly::query::{check_wrench, fwp_margin, max_scale, Scale};
use wrenchpoly::wrench::*;

const GRAVITY: [f64; 6] = [0.0, 0.0, 2.0, 0.0, 0.0, 0.0];

fn radius(h: &HPolytope) -> f64 {
    match fwp_margin(h) {
        Chebyshev::Center { radius, .. } => radius,
        Chebyshev::Empty => -1.0,
        Chebyshev::Unbounded => f64::INFINITY,
    }
}

#[test]
fn subset_chain_on_random_stances() {
    let tol = Tolerance::default();
    let mut r = rng(31);
    for robot in [random_stance(&mut r), random_stance(&mut r)] {
        let a = awp(&robot, &tol).unwrap();
        let f = fwp_intersection(&robot, &tol).unwrap();
        let pf = fwp_per_foot(&robot, &tol).unwrap();
        let ah = v_to_h(&a, &tol).unwrap();
        for v in f.v.vertices() {
            assert!(contains(&ah, v, &tol).unwrap());
            assert!(cwc_residual(&robot, v) <= 1e-7);
        }
        for v in pf.vertices() {
            assert!(contains(&f.h, v, &tol).unwrap());
        }
    }
}

#[test]
fn awp_vertices_are_sums_of_limb_vertices() {
    let tol = Tolerance::default();
    let mut r = rng(32);
    let robot = random_stance(&mut r);
    let a = awp(&robot, &tol).unwrap();
    let bound: usize = robot
        .limbs
        .iter()
        .map(|l| force_polytope(l, &tol).unwrap().vertices().len())
        .product();
    assert!(a.vertices().len() <= bound);
    for v in a.vertices().iter().step_by(17) {
        assert!(awp_residual(&robot, v) <= 1e-7);
    }
}

#[test]
fn awp_of_general_limbs_matches_corner_oracle() {
    let tol = Tolerance::default();
    let mut r = rng(33);
    let robot = random_quadruped(&mut r);
    let a = awp(&robot, &tol).unwrap();
    assert!(a.is_bounded());
    for v in a.vertices().iter().step_by(97) {
        assert!(awp_residual(&robot, v) <= 1e-7);
    }
    for _ in 0..20 {
        let d = unit_direction(&mut r, 6);
        let ours = a.vertices().iter().map(|v| dot(v, &d)).fold(f64::NEG_INFINITY, f64::max);
        // support of a sum is the sum of per-limb supports over corner forces
        let oracle: f64 = robot
            .limbs
            .iter()
            .enumerate()
            .map(|(k, l)| {
                corner_forces(l)
                    .iter()
                    .map(|f| dot(&lift(f, lever(&robot, k)), &d))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum();
        assert!((ours - oracle).abs() <= 1e-9 * (1.0 + oracle.abs()));
    }
}

#[test]
fn contact_cone_is_a_cone() {
    let tol = Tolerance::default();
    let mut r = rng(34);
    let robot = random_stance(&mut r);
    let c = cwc(&robot, &tol).unwrap();
    assert!(c.h.is_cone());
    for _ in 0..200 {
        let w: Vec<f64> = (0..6).map(|_| r.gen_range(-1.0..1.0)).collect();
        let inside = contains(&c.h, &w, &tol).unwrap();
        let scaled: Vec<f64> = w.iter().map(|x| 3.7 * x).collect();
        if c.h.slacks(&w).iter().all(|s| s.abs() > 1e-6) {
            assert_eq!(contains(&c.h, &scaled, &tol).unwrap(), inside);
            assert_eq!(inside, cwc_residual(&robot, &w) <= 1e-9);
        }
    }
}

#[test]
fn gravity_classification_matches_oracles() {
    let tol = Tolerance::default();
    let mut r = rng(35);
    for k in 0..6 {
        let robot = if k == 0 { unit_quadruped(0.5) } else { random_stance(&mut r) };
        let f = fwp_intersection(&robot, &tol).unwrap();
        let mut queries = vec![GRAVITY.to_vec()];
        for _ in 0..20 {
            queries.push((0..6).map(|_| r.gen_range(-2.0..2.0)).collect());
        }
        for w in &queries {
            let ours = check_wrench(&f.h, w, &tol).unwrap();
            let aggregate = awp_residual(&robot, w) <= 1e-7 && cwc_residual(&robot, w) <= 1e-7;
            // classifications may only differ inside the tolerance band
            if ours.margin.abs() > 1e-6 {
                assert_eq!(ours.feasible, aggregate, "robot {k}, wrench {w:?}");
            }
        }
        let per_foot = per_foot_residual(&robot, &GRAVITY) <= 1e-7;
        let pf = fwp_per_foot(&robot, &tol).unwrap();
        if !pf.is_empty() {
            assert_eq!(contains(&pf, &GRAVITY, &tol).unwrap(), per_foot, "robot {k}");
        }
    }
}

#[test]
fn halfspace_and_vertex_queries_agree() {
    let tol = Tolerance::default();
    let mut r = rng(36);
    let robot = random_stance(&mut r);
    let f = fwp_intersection(&robot, &tol).unwrap();
    let lo: Vec<f64> = (0..6).map(|i| f.v.vertices().iter().map(|v| v[i]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..6).map(|i| f.v.vertices().iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let mut tested = 0;
    while tested < 100 {
        let w: Vec<f64> = (0..6).map(|i| r.gen_range(lo[i]..=hi[i])).collect();
        let q = check_wrench(&f.h, &w, &tol).unwrap();
        if q.margin.abs() < 1e-6 {
            continue;
        }
        assert_eq!(q.feasible, contains(&f.v, &w, &tol).unwrap());
        tested += 1;
    }
}

#[test]
fn max_scale_brackets_the_boundary() {
    let tol = Tolerance::default();
    let mut r = rng(37);
    let robot = unit_quadruped(0.5);
    let f = fwp_intersection(&robot, &tol).unwrap();
    let eps = tol.eps_contain;
    for k in 0..60 {
        let mut d = unit_direction(&mut r, 6);
        if k % 2 == 1 {
            // graze a facet: direction nearly inside the facet of the exit point
            let Scale::Finite(s) = max_scale(&f.h, &GRAVITY, &d, &tol).unwrap() else { unreachable!() };
            let exit: Vec<f64> = GRAVITY.iter().zip(&d).map(|(a, b)| a + s * b).collect();
            let (row, _) = f.h.slacks(&exit).into_iter().enumerate().fold((0, f64::INFINITY), |m, (i, x)| if x < m.1 { (i, x) } else { m });
            let a = &f.h.normals()[row];
            let along = dot(a, &d);
            d = d.iter().zip(a).map(|(x, y)| x - 0.99 * along * y).collect();
            let n = dot(&d, &d).sqrt();
            d.iter_mut().for_each(|x| *x /= n);
        }
        let Scale::Finite(s) = max_scale(&f.h, &GRAVITY, &d, &tol).unwrap() else {
            panic!("FWP is bounded");
        };
        let at = |t: f64| -> Vec<f64> { GRAVITY.iter().zip(&d).map(|(a, b)| a + t * b).collect() };
        assert!(check_wrench(&f.h, &at(s - 2.0 * eps), &tol).unwrap().feasible);
        assert!(!check_wrench(&f.h, &at(s + 2.0 * eps), &tol).unwrap().feasible);
        // bisection on the membership test alone
        let (mut lo, mut hi) = (0.0, 100.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if check_wrench(&f.h, &at(mid), &tol).unwrap().feasible {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - s).abs() <= eps, "ratio test {s}, bisection {lo}");
    }
    let outside = [0.0, 0.0, -5.0, 0.0, 0.0, 0.0];
    assert!(max_scale(&f.h, &outside, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0], &tol).is_err());
}

#[test]
fn margin_shrinks_with_constraints() {
    let tol = Tolerance::default();
    let f = fwp_intersection(&unit_quadruped(0.5), &tol).unwrap();
    let mut normals = vec![vec![0.0; 6]];
    normals[0][0] = 1.0;
    let cut = HPolytope::new(6, normals, vec![0.05], &tol).unwrap();
    let tighter = intersect(&f.h, &cut, &tol).unwrap();
    assert!(radius(&tighter) <= radius(&f.h) + 1e-12);

    let slippery = fwp_intersection(&unit_quadruped(0.25), &tol).unwrap();
    assert!(radius(&slippery.h) <= radius(&f.h) + 1e-12);
    let g_grip = check_wrench(&f.h, &GRAVITY, &tol).unwrap();
    let g_slip = check_wrench(&slippery.h, &GRAVITY, &tol).unwrap();
    assert!(g_slip.feasible && g_grip.feasible);
    assert!(g_slip.margin <= g_grip.margin + 1e-12);
}

#[test]
fn translation_of_the_com_shifts_torques_only() {
    let tol = Tolerance::default();
    let mut robot = unit_quadruped(0.5);
    let base = fwp_intersection(&robot, &tol).unwrap();
    robot.com = [0.1, -0.05, 0.3];
    let moved = fwp_intersection(&robot, &tol).unwrap();
    assert_eq!(base.v.vertices().len(), moved.v.vertices().len());
    // each vertex keeps its force and gains (p_old - p_new) x f = -com x f
    let c = robot.com;
    for v in base.v.vertices() {
        let t = [
            v[3] - (c[1] * v[2] - c[2] * v[1]),
            v[4] - (c[2] * v[0] - c[0] * v[2]),
            v[5] - (c[0] * v[1] - c[1] * v[0]),
        ];
        let w = [v[0], v[1], v[2], t[0], t[1], t[2]];
        assert!(moved.v.vertices().iter().any(|u| u.iter().zip(&w).all(|(a, b)| (a - b).abs() <= 1e-9)));
    }
}
