//! Dense two-phase simplex for small linear programs in equality form.
//!
//! Solves `maximize c·x subject to A x = b, x >= 0`. Pivoting follows
//! Bland's rule so degenerate problems terminate. Sized for the tiny
//! tableaus that arise from matrix games and common-information columns.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Dual prices `y` with `y·A_j >= c_j` for every column at optimum.
    pub duals: Vec<f64>,
}

struct Tableau {
    rows: usize,
    width: usize,
    data: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width;
        let p = self.at(r, e);
        for c in 0..w {
            self.data[r * w + c] /= p;
        }
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for rr in 0..self.rows {
            if rr == r {
                continue;
            }
            let f = self.data[rr * w + e];
            if f != 0.0 {
                for c in 0..w {
                    self.data[rr * w + c] -= f * pivot_row[c];
                }
                self.data[rr * w + e] = 0.0;
            }
        }
        let f = self.obj[e];
        if f != 0.0 {
            for c in 0..w {
                self.obj[c] -= f * pivot_row[c];
            }
            self.obj[e] = 0.0;
        }
        self.basis[r] = e;
    }

    /// Runs simplex iterations with columns `< allowed` eligible to enter.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        for _ in 0..MAX_PIVOTS {
            let Some(e) = (0..allowed).find(|&j| self.obj[j] < -COST_EPS) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, e);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-15 || (ratio <= lratio + 1e-15 && self.basis[r] < self.basis[lr]) {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return Err(Error::Lp("objective is unbounded".into())),
            }
        }
        Err(Error::Lp("pivot limit reached".into()))
    }
}

/// Maximizes `c·x` subject to `A x = b`, `x >= 0`.
pub fn maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("linear program shapes disagree".into()));
    }
    let width = n + m + 1;
    let mut data = vec![0.0; m * width];
    let mut sign = vec![1.0; m];
    for i in 0..m {
        if b[i] < 0.0 {
            sign[i] = -1.0;
        }
        for j in 0..n {
            data[i * width + j] = sign[i] * a[i][j];
        }
        data[i * width + n + i] = 1.0;
        data[i * width + width - 1] = sign[i] * b[i];
    }
    // Phase 1: maximize -sum(artificials).
    let mut obj = vec![0.0; width];
    for i in 0..m {
        for j in 0..n {
            obj[j] -= data[i * width + j];
        }
        obj[width - 1] -= data[i * width + width - 1];
    }
    let mut t = Tableau { rows: m, width, data, obj, basis: (n..n + m).collect() };
    t.optimize(n + m)?;
    if -t.obj[width - 1] > FEAS_EPS * (1.0 + b.iter().map(|x| x.abs()).sum::<f64>()) {
        return Err(Error::Infeasible("linear program has no feasible point".into()));
    }
    // Drive leftover artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(e) = (0..n).find(|&j| t.at(r, j).abs() > 1e-9) {
                t.pivot(r, e);
            }
        }
    }
    // Phase 2 with artificials barred from entering.
    let cost = |j: usize| if j < n { c[j] } else { 0.0 };
    let mut obj = vec![0.0; width];
    for j in 0..width {
        let mut z = 0.0;
        for r in 0..m {
            z += cost(t.basis[r]) * t.at(r, j);
        }
        obj[j] = if j < width - 1 { z - cost(j) } else { z };
    }
    t.obj = obj;
    t.optimize(n)?;

    let mut x = vec![0.0; n];
    for r in 0..m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs(r).max(0.0);
        }
    }
    let objective = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    let duals = (0..m).map(|i| sign[i] * t.obj[n + i]).collect();
    Ok(LpSolution { x, objective, duals })
}
