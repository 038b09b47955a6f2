use super::linalg::{canonical_cmp, dot, max_abs_diff, norm};
use super::Tolerance;
use crate::error::{Error, Result};

/// Convex polyhedron `{x : a_i·x <= b_i}`.
///
/// Normals are unit length and rows are sorted canonically with duplicates
/// merged. Equalities are stored as opposing pairs `a·x <= b`, `-a·x <= -b`;
/// the pairing is detected on construction and exposed through
/// [`HPolytope::is_equality`].
///
/// The empty set has a single canonical form, the row `0·x <= -1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    dim: usize,
    normals: Vec<Vec<f64>>,
    offsets: Vec<f64>,
    equality: Vec<bool>,
}

impl HPolytope {
    pub fn new(dim: usize, normals: Vec<Vec<f64>>, offsets: Vec<f64>, tol: &Tolerance) -> Result<Self> {
        if normals.len() != offsets.len() {
            return Err(Error::InvalidInput(format!(
                "{} normals but {} offsets",
                normals.len(),
                offsets.len()
            )));
        }
        let mut rows = Vec::with_capacity(normals.len());
        for (a, b) in normals.into_iter().zip(offsets) {
            if a.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
            if !b.is_finite() || a.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite halfspace coefficient".into()));
            }
            let n = norm(&a);
            if n <= 1e-14 {
                if b < -tol.eps_contain {
                    return Ok(HPolytope::empty(dim));
                }
                continue;
            }
            let mut row: Vec<f64> = a.iter().map(|x| x / n).collect();
            row.push(b / n);
            rows.push(row);
        }
        Ok(Self::from_unit_rows(dim, rows, tol))
    }

    /// Rows are `[a.., b]` with unit `a`.
    pub(crate) fn from_unit_rows(dim: usize, mut rows: Vec<Vec<f64>>, tol: &Tolerance) -> Self {
        rows.sort_by(|x, y| canonical_cmp(x, y, tol.eps_canon));
        rows.dedup_by(|x, y| max_abs_diff(x, y) <= tol.eps_canon);
        let (normals, offsets): (Vec<Vec<f64>>, Vec<f64>) = rows
            .into_iter()
            .map(|mut r| {
                let b = r.pop().expect("row has offset");
                (r, b)
            })
            .unzip();
        let equality = detect_equalities(&normals, &offsets, tol);
        HPolytope {
            dim,
            normals,
            offsets,
            equality,
        }
    }

    /// Takes rows as given; used when reading files whose ordering must be
    /// preserved bit-exactly.
    pub fn from_parts(dim: usize, normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if normals.len() != offsets.len() {
            return Err(Error::InvalidInput(format!(
                "{} normals but {} offsets",
                normals.len(),
                offsets.len()
            )));
        }
        for a in &normals {
            if a.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
        }
        let equality = detect_equalities(&normals, &offsets, &Tolerance::default());
        Ok(HPolytope {
            dim,
            normals,
            offsets,
            equality,
        })
    }

    pub fn empty(dim: usize) -> Self {
        HPolytope {
            dim,
            normals: vec![vec![0.0; dim]],
            offsets: vec![-1.0],
            equality: vec![false],
        }
    }

    /// The whole space (no constraints).
    pub fn universe(dim: usize) -> Self {
        HPolytope {
            dim,
            normals: Vec::new(),
            offsets: Vec::new(),
            equality: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.len() == 1 && self.offsets[0] < 0.0 && self.normals[0].iter().all(|&x| x == 0.0)
    }

    /// True for halfspaces that belong to an equality pair.
    pub fn is_equality(&self, i: usize) -> bool {
        self.equality[i]
    }

    /// Number of inequality rows not part of an equality pair.
    pub fn num_facets(&self) -> usize {
        self.equality.iter().filter(|e| !**e).count()
    }

    pub fn is_cone(&self) -> bool {
        !self.is_empty() && self.offsets.iter().all(|&b| b == 0.0)
    }

    pub(crate) fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| (a.as_slice(), *b))
    }

    /// `b_i - a_i·x` for each row.
    pub fn slacks(&self, x: &[f64]) -> Vec<f64> {
        self.rows().map(|(a, b)| b - dot(a, x)).collect()
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

fn detect_equalities(normals: &[Vec<f64>], offsets: &[f64], tol: &Tolerance) -> Vec<bool> {
    let m = normals.len();
    let mut eq = vec![false; m];
    for i in 0..m {
        if eq[i] {
            continue;
        }
        for j in (i + 1)..m {
            let opposite = normals[i]
                .iter()
                .zip(&normals[j])
                .all(|(x, y)| (x + y).abs() <= tol.eps_canon);
            if opposite
                && (offsets[i] + offsets[j]).abs()
                    <= tol.eps_canon * (1.0 + offsets[i].abs())
            {
                eq[i] = true;
                eq[j] = true;
                break;
            }
        }
    }
    eq
}
