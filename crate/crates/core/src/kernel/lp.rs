//! Dense two-phase simplex for the small LPs the kernel needs: few equality
//! rows (at most ambient dimension plus a handful), many columns.
//!
//! Inequality-form problems `max c·x, G x <= h, E x = f, x free` are solved
//! through their dual, which is in standard form with one row per primal
//! variable; the primal optimum is read off the simplex multipliers.

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub(crate) struct StandardSolution {
    pub(crate) status: Status,
    /// Simplex multipliers `c_B B^-1` for the original (unflipped) rows.
    pub(crate) duals: Vec<f64>,
    pub(crate) value: f64,
}

/// `min c·y  s.t.  A y = b, y >= 0`, with `A` given column by column.
pub(crate) fn solve_standard(columns: &[Vec<f64>], b: &[f64], c: &[f64]) -> StandardSolution {
    let m = b.len();
    let n = columns.len();
    debug_assert_eq!(c.len(), n);
    let width = n + m + 1;
    let rhs = n + m;
    let mut t = vec![0.0; (m + 1) * width];
    let mut sign = vec![1.0; m];
    for i in 0..m {
        if b[i] < 0.0 {
            sign[i] = -1.0;
        }
        for (j, col) in columns.iter().enumerate() {
            t[i * width + j] = sign[i] * col[i];
        }
        t[i * width + n + i] = 1.0;
        t[i * width + rhs] = sign[i] * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1 objective: sum of artificials, expressed in non-basic terms
    {
        let obj = m * width;
        for j in 0..width {
            if j >= n && j < n + m {
                continue;
            }
            let s: f64 = (0..m).map(|i| t[i * width + j]).sum();
            t[obj + j] = -s;
        }
    }
    let scale = b.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let mut tab = Tableau {
        t,
        m,
        width,
        basis,
    };
    // unbounded is impossible in phase 1
    tab.iterate(n);
    let infeas = -tab.t[m * width + rhs];
    if infeas > FEAS_TOL * scale {
        return StandardSolution {
            status: Status::Infeasible,
            duals: vec![],
            value: f64::NAN,
        };
    }
    // drive basic artificials out where possible
    for i in 0..m {
        if tab.basis[i] >= n {
            let row = i * width;
            if let Some(j) = (0..n).find(|&j| tab.t[row + j].abs() > 1e-9) {
                tab.pivot(i, j);
            }
        }
    }

    // phase 2 objective
    let obj = m * width;
    for j in 0..width {
        let cj = if j < n { c[j] } else { 0.0 };
        let s: f64 = (0..m)
            .map(|i| {
                let bj = tab.basis[i];
                let cb = if bj < n { c[bj] } else { 0.0 };
                cb * tab.t[i * width + j]
            })
            .sum();
        tab.t[obj + j] = if j == rhs { -s } else { cj - s };
    }
    if !tab.iterate(n) {
        return StandardSolution {
            status: Status::Unbounded,
            duals: vec![],
            value: f64::NEG_INFINITY,
        };
    }
    let mut y = vec![0.0; n];
    for i in 0..m {
        if tab.basis[i] < n {
            y[tab.basis[i]] = tab.t[i * width + rhs];
        }
    }
    basis = tab.basis.clone();
    let duals = (0..m)
        .map(|k| {
            let s: f64 = (0..m)
                .map(|i| {
                    let bj = basis[i];
                    let cb = if bj < n { c[bj] } else { 0.0 };
                    cb * tab.t[i * width + n + k]
                })
                .sum();
            s * sign[k]
        })
        .collect();
    let value = y.iter().zip(c).map(|(a, b)| a * b).sum();
    StandardSolution {
        status: Status::Optimal,
        duals,
        value,
    }
}

struct Tableau {
    t: Vec<f64>,
    m: usize,
    width: usize,
    basis: Vec<usize>,
}

impl Tableau {
    /// Runs simplex pivots on the objective row; only columns `< enter_limit`
    /// may enter. Returns false when unbounded.
    fn iterate(&mut self, enter_limit: usize) -> bool {
        let (m, width) = (self.m, self.width);
        let rhs = width - 1;
        let obj = m * width;
        let mut degenerate = 0usize;
        let max_iter = 50 * (m + enter_limit) + 1000;
        for _ in 0..max_iter {
            let bland = degenerate >= DEGENERATE_LIMIT;
            let mut enter = None;
            let mut best = -COST_TOL;
            for j in 0..enter_limit {
                let r = self.t[obj + j];
                if r < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = r;
                }
            }
            let Some(j) = enter else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.t[i * width + j];
                if a > PIVOT_TOL {
                    let ratio = self.t[i * width + rhs].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            let tie = ratio <= lr + 1e-12;
                            let better_tie = if bland {
                                self.basis[i] < self.basis[li]
                            } else {
                                a > self.t[li * width + j]
                            };
                            if ratio < lr - 1e-12 || (tie && better_tie) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    }
                }
            }
            let Some((i, ratio)) = leave else {
                return false;
            };
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            // a roundoff-negative rhs would make the step negative
            if self.t[i * width + rhs] < 0.0 {
                self.t[i * width + rhs] = 0.0;
            }
            self.pivot(i, j);
        }
        true
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let width = self.width;
        let p = self.t[pr * width + pc];
        let row_start = pr * width;
        for j in 0..width {
            self.t[row_start + j] /= p;
        }
        let pivot_row: Vec<f64> = self.t[row_start..row_start + width].to_vec();
        for i in 0..=self.m {
            if i == pr {
                continue;
            }
            let f = self.t[i * width + pc];
            if f != 0.0 {
                let r = &mut self.t[i * width..(i + 1) * width];
                for (x, pv) in r.iter_mut().zip(&pivot_row) {
                    *x -= f * pv;
                }
                r[pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Outcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

/// `max c·x  s.t.  G x <= h (rows `ineq`), E x = f (rows `eq`), x free`.
pub(crate) fn maximize(c: &[f64], ineq: &[(&[f64], f64)], eq: &[(&[f64], f64)]) -> Outcome {
    let n = c.len();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(ineq.len() + 2 * eq.len());
    let mut cost = Vec::with_capacity(columns.capacity());
    for (g, h) in ineq {
        columns.push(g.to_vec());
        cost.push(*h);
    }
    for (e, f) in eq {
        columns.push(e.to_vec());
        cost.push(*f);
        columns.push(e.iter().map(|x| -x).collect());
        cost.push(-*f);
    }
    let sol = solve_standard(&columns, c, &cost);
    match sol.status {
        Status::Optimal => Outcome::Optimal {
            x: sol.duals,
            value: sol.value,
        },
        Status::Unbounded => Outcome::Infeasible,
        Status::Infeasible => {
            // dual infeasible: primal is unbounded or infeasible
            let zero = vec![0.0; n];
            let probe = solve_standard(&columns, &zero, &cost);
            if probe.status == Status::Unbounded {
                Outcome::Infeasible
            } else {
                Outcome::Unbounded
            }
        }
    }
}
