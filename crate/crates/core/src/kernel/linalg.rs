//! Small dense helpers over `&[f64]` points plus the affine-hull frame.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    (n > 0.0 && n.is_finite()).then(|| a.iter().map(|x| x / n).collect())
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Lexicographic order on coordinates rounded to `quantum`, falling back to
/// exact comparison so the order is total.
pub(crate) fn canonical_cmp(a: &[f64], b: &[f64], quantum: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let kx = round_key(*x, quantum);
        let ky = round_key(*y, quantum);
        match kx.cmp(&ky) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

fn round_key(x: f64, quantum: f64) -> i64 {
    let k = (x / quantum).round();
    // `as` saturates; coordinates this large are outside the supported range anyway
    k as i64
}

/// Sorts canonically and drops points within `eps` (max-norm) of an
/// already-kept point. The result depends only on the input set, not its order.
pub(crate) fn canonical_dedup(mut points: Vec<Vec<f64>>, eps: f64) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| canonical_cmp(a, b, eps));
    // sweep on the exact first coordinate so clusters straddling a rounding
    // boundary still merge
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i][0].total_cmp(&points[j][0]).then(i.cmp(&j)));
    let mut keep = vec![false; points.len()];
    let mut window: Vec<usize> = Vec::new();
    for &i in &order {
        window.retain(|&j| points[i][0] - points[j][0] <= eps);
        if !window
            .iter()
            .any(|&j| max_abs_diff(&points[i], &points[j]) <= eps)
        {
            keep[i] = true;
            window.push(i);
        }
    }
    points
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

/// Numerical rank of a set of row vectors via singular values.
pub(crate) fn rank(rows: &[&[f64]], dim: usize, eps: f64) -> usize {
    if rows.is_empty() || dim == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), dim, |r, c| rows[r][c]);
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let thresh = eps * smax.max(1.0);
    sv.iter().filter(|&&s| s > thresh).count()
}

/// Orthonormal basis of `span(cols)` by Gram–Schmidt with pivoting on the
/// largest remaining norm. Stops at `max_count` vectors or once every
/// remaining column is shorter than `thresh`.
pub(crate) fn pivoted_basis(mut cols: Vec<Vec<f64>>, max_count: usize, thresh: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_count);
    while basis.len() < max_count {
        let (best, len) = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (i, norm(c)))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if len <= thresh {
            break;
        }
        let mut v: Vec<f64> = cols.swap_remove(best).iter().map(|x| x / len).collect();
        // second pass restores orthogonality lost to cancellation
        for u in &basis {
            let d = dot(u, &v);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
        }
        let Some(v) = normalized(&v) else { break };
        for c in cols.iter_mut() {
            let d = dot(&v, c);
            c.iter_mut().zip(&v).for_each(|(x, y)| *x -= d * y);
        }
        basis.push(v);
    }
    basis
}

/// Greedy choice of up to `dim` linearly independent rows, visiting them in
/// `order`; a row is taken when the part of it orthogonal to the rows
/// already taken keeps at least `min_ratio` of its norm.
pub(crate) fn independent_rows(
    rows: &[&[f64]],
    order: impl IntoIterator<Item = usize>,
    dim: usize,
    min_ratio: f64,
) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for i in order {
        if chosen.len() == dim {
            break;
        }
        let len = norm(rows[i]);
        if len == 0.0 {
            continue;
        }
        let mut v: Vec<f64> = rows[i].to_vec();
        for _ in 0..2 {
            for u in &ortho {
                let d = dot(u, &v);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
            }
        }
        let rest = norm(&v);
        if rest > min_ratio * len {
            ortho.push(v.iter().map(|x| x / rest).collect());
            chosen.push(i);
        }
    }
    chosen
}

/// Solves the square system made of `rows[idx]` by LU.
pub(crate) fn solve_rows(rows: &[&[f64]], rhs: &[f64], idx: &[usize]) -> Option<Vec<f64>> {
    let d = idx.len();
    let m = DMatrix::from_fn(d, d, |r, c| rows[idx[r]][c]);
    let b = DVector::from_iterator(d, idx.iter().map(|&i| rhs[i]));
    m.lu().solve(&b).map(|x| x.iter().copied().collect())
}

/// Affine hull of a point set (plus recession directions), expressed as an
/// origin and an orthonormal basis, with an orthonormal basis of the orthogonal
/// complement for equality constraints.
#[derive(Debug, Clone)]
pub(crate) struct AffineFrame {
    pub(crate) origin: Vec<f64>,
    /// `dim × k`, orthonormal columns.
    pub(crate) basis: DMatrix<f64>,
    /// Unit normals `u` with `u·x = u·origin` on the hull.
    pub(crate) equalities: Vec<Vec<f64>>,
}

impl AffineFrame {
    pub(crate) fn compute(
        dim: usize,
        points: &[Vec<f64>],
        rays: &[Vec<f64>],
        eps_rank: f64,
    ) -> AffineFrame {
        let origin = if points.is_empty() {
            vec![0.0; dim]
        } else {
            let mut c = vec![0.0; dim];
            for p in points {
                for (ci, pi) in c.iter_mut().zip(p) {
                    *ci += pi;
                }
            }
            c.iter_mut().for_each(|x| *x /= points.len() as f64);
            c
        };
        let cols: Vec<Vec<f64>> = points
            .iter()
            .map(|p| sub(p, &origin))
            .chain(rays.iter().cloned())
            .collect();
        let largest = cols.iter().map(|c| norm(c)).fold(0.0, f64::max);
        let span = pivoted_basis(cols, dim, eps_rank * largest.max(1.0));
        let k = span.len();
        let basis = DMatrix::from_fn(dim, k, |r, c| span[c][r]);
        let equalities = if k == dim {
            Vec::new()
        } else {
            let proj = DMatrix::<f64>::identity(dim, dim) - &basis * basis.transpose();
            let cols = (0..dim).map(|c| proj.column(c).iter().copied().collect()).collect();
            pivoted_basis(cols, dim - k, 1e-12)
        };
        AffineFrame {
            origin,
            basis,
            equalities,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub(crate) fn to_local(&self, x: &[f64]) -> Vec<f64> {
        let d = sub(x, &self.origin);
        self.direction_to_local(&d)
    }

    pub(crate) fn direction_to_local(&self, d: &[f64]) -> Vec<f64> {
        (0..self.basis.ncols())
            .map(|c| (0..d.len()).map(|r| self.basis[(r, c)] * d[r]).sum())
            .collect()
    }

    pub(crate) fn direction_to_global(&self, y: &[f64]) -> Vec<f64> {
        (0..self.basis.nrows())
            .map(|r| (0..y.len()).map(|c| self.basis[(r, c)] * y[c]).sum())
            .collect()
    }
}
