//! Feasibility and robustness queries against a halfspace description.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{chebyshev_center, linalg::dot, Chebyshev, HPolytope, Tolerance};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// Radius of the largest ball around the query inside the set when
    /// feasible; otherwise the most negative slack.
    pub margin: f64,
    /// Inequality rows active within `eps_contain`.
    pub binding_facets: Vec<usize>,
}

/// Halfspace membership of `w` with its distance to the boundary.
/// Equality pairs only decide membership; the margin is taken over the
/// remaining facets.
pub fn check_wrench(fwp: &HPolytope, w: &[f64], tol: &Tolerance) -> Result<FeasibilityResult> {
    check_wrench_scaled(fwp, w, None, tol)
}

/// As [`check_wrench`], measuring distance in coordinates divided by the
/// characteristic scales `scale` (e.g. newtons vs newton-metres).
pub fn check_wrench_scaled(
    fwp: &HPolytope,
    w: &[f64],
    scale: Option<&[f64]>,
    tol: &Tolerance,
) -> Result<FeasibilityResult> {
    fwp.check_dim(w.len())?;
    if let Some(s) = scale {
        fwp.check_dim(s.len())?;
        if s.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::InvalidInput("characteristic scales must be positive".into()));
        }
    }
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite query component".into()));
    }
    // row norm in scaled coordinates: a·w = (a∘s)·(w/s)
    let row_norm = |a: &[f64]| -> f64 {
        match scale {
            None => 1.0,
            Some(s) => a.iter().zip(s).map(|(x, y)| (x * y) * (x * y)).sum::<f64>().sqrt(),
        }
    };
    let mut worst = f64::INFINITY;
    let mut margin = f64::INFINITY;
    let mut binding = Vec::new();
    for (i, (a, b)) in fwp.normals().iter().zip(fwp.offsets()).enumerate() {
        let n = row_norm(a);
        let slack = if n > 0.0 { (b - dot(a, w)) / n } else { *b };
        worst = worst.min(slack);
        if !fwp.is_equality(i) {
            margin = margin.min(slack);
            if slack.abs() <= tol.eps_contain {
                binding.push(i);
            }
        }
    }
    let feasible = worst >= -tol.eps_contain;
    Ok(FeasibilityResult {
        feasible,
        margin: if feasible { margin.max(0.0) } else { worst },
        binding_facets: binding,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    Finite(f64),
    /// The ray `w0 + s·d` never leaves the set.
    Unbounded,
}

/// Largest `s >= 0` with `w0 + s·d` inside, by a ratio test over rows.
/// Inside means accepted by [`check_wrench`], so each row may be
/// overshot by `eps_contain`.
pub fn max_scale(fwp: &HPolytope, w0: &[f64], d: &[f64], tol: &Tolerance) -> Result<Scale> {
    fwp.check_dim(w0.len())?;
    fwp.check_dim(d.len())?;
    if d.iter().all(|&x| x == 0.0) || d.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("direction must be finite and nonzero".into()));
    }
    let mut best = f64::INFINITY;
    for (i, (a, b)) in fwp.normals().iter().zip(fwp.offsets()).enumerate() {
        let slack = b - dot(a, w0);
        if slack < -tol.eps_contain {
            return Err(Error::OutsidePolytope {
                facet: i,
                violation: -slack,
            });
        }
        let rate = dot(a, d);
        if rate > 0.0 {
            best = best.min((slack + tol.eps_contain) / rate);
        }
    }
    Ok(if best.is_finite() { Scale::Finite(best) } else { Scale::Unbounded })
}

/// Wrench with the largest uniform slack and that slack.
pub fn fwp_margin(fwp: &HPolytope) -> Chebyshev {
    chebyshev_center(fwp)
}
