use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every kernel operation.
///
/// All quantities are absolute, in the units of the coordinates they are
/// compared against. Hull and DD predicates run on rescaled coordinates, so
/// `eps_hull` is effectively relative to the extent of the point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Singular-value threshold for affine-dimension and Jacobian rank tests.
    pub eps_rank: f64,
    /// Incidence threshold used while building hulls.
    pub eps_hull: f64,
    /// Slack allowed by membership tests.
    pub eps_contain: f64,
    /// Rounding quantum for canonical ordering and duplicate merging.
    pub eps_canon: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_rank: 1e-9,
            eps_hull: 1e-9,
            eps_contain: 1e-7,
            eps_canon: 1e-8,
        }
    }
}

impl Tolerance {
    /// Derives a full tolerance record from a single containment slack,
    /// keeping the default ratios between the four thresholds.
    pub fn from_contain(eps_contain: f64) -> Result<Self> {
        let tol = Tolerance {
            eps_rank: eps_contain * 1e-2,
            eps_hull: eps_contain * 1e-2,
            eps_contain,
            eps_canon: eps_contain * 1e-1,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.eps_rank, self.eps_hull, self.eps_contain, self.eps_canon];
        if all.iter().any(|e| !e.is_finite() || *e <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be finite and strictly positive: {self:?}"
            )));
        }
        if self.eps_contain < self.eps_hull {
            return Err(Error::InvalidInput(format!(
                "eps_contain ({:e}) must be at least eps_hull ({:e})",
                self.eps_contain, self.eps_hull
            )));
        }
        Ok(())
    }
}
