//! Dense two-phase simplex for the small linear programs behind the hull
//! oracle.
//!
//! Problems are `lhs * x <= rhs` with `x >= 0`. Pivoting follows Bland's
//! rule (smallest eligible index for both the entering and the leaving
//! variable), which rules out cycling, so the solver terminates on every
//! input. Every `Optimal` answer is re-verified against the original data
//! before it is returned.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::PointMatrix;

/// Combined variable + constraint limit for [`simplex_solve`].
pub const LP_DIMENSION_CAP: usize = 2000;

/// Feasibility / reduced-cost tolerance.
pub const LP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `sense (objective . x)` subject to `lhs x <= rhs`, `x >= 0`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub lhs: PointMatrix,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    /// Problem size beyond what the dense tableau is meant for.
    #[error("problem size {size} exceeds the dimension cap {cap}")]
    DimensionCap { size: usize, cap: usize },
    /// The final verification re-check failed; the answer was withheld.
    #[error("simplex verification failed: {0}")]
    Numerical(&'static str),
}

/// Dense tableau: constraint rows plus one cost row, all sharing the column
/// layout `[structural | slack | artificial | rhs]`.
struct Tableau {
    rows: Vec<Vec<f64>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    ncols: usize,
}

enum StepEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let inv = 1.0 / self.rows[r][e];
        for v in &mut self.rows[r] {
            *v *= inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && row[e] != 0.0 {
                let f = row[e];
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                row[e] = 0.0;
            }
        }
        if self.cost[e] != 0.0 {
            let f = self.cost[e];
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.cost[e] = 0.0;
        }
        self.basis[r] = e;
    }

    /// Runs Bland-rule pivots until no eligible entering column remains.
    /// `allowed` restricts which columns may enter (used to bar artificials).
    fn iterate(&mut self, allowed: impl Fn(usize) -> bool) -> Result<StepEnd, LpError> {
        // Bland's rule cannot cycle, so this cap only guards against bugs.
        let cap = 1000 * (self.rows.len() + self.ncols + 10);
        for _ in 0..cap {
            let Some(e) = (0..self.ncols).find(|&j| allowed(j) && self.cost[j] < -LP_TOL) else {
                return Ok(StepEnd::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[e] > LP_TOL {
                    let ratio = row[self.ncols] / row[e];
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - LP_TOL
                                || (ratio < lr + LP_TOL && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return Ok(StepEnd::Unbounded),
            }
        }
        Err(LpError::Numerical("pivot cap exceeded"))
    }

    /// Subtracts basic-variable costs so the cost row is properly reduced.
    fn reduce_cost_row(&mut self) {
        for i in 0..self.rows.len() {
            let f = self.cost[self.basis[i]];
            if f != 0.0 {
                let row = self.rows[i].clone();
                for (v, p) in self.cost.iter_mut().zip(&row) {
                    *v -= f * p;
                }
                self.cost[self.basis[i]] = 0.0;
            }
        }
    }
}

/// Solves the LP, or reports that its feasible region is empty or unbounded.
pub fn simplex_solve(p: &LpProblem) -> Result<LpOutcome, LpError> {
    let nv = p.objective.len();
    let m = p.lhs.rows();
    assert_eq!(p.lhs.cols(), nv, "objective/constraint width mismatch");
    assert_eq!(p.rhs.len(), m, "rhs length mismatch");
    if nv + m > LP_DIMENSION_CAP {
        return Err(LpError::DimensionCap {
            size: nv + m,
            cap: LP_DIMENSION_CAP,
        });
    }

    // Slack per row; artificial per row whose rhs is negative (those rows are
    // sign-flipped so every tableau rhs starts nonnegative).
    let n_art = p.rhs.iter().filter(|&&b| b < 0.0).count();
    let ncols = nv + m + n_art;
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        cost: vec![0.0; ncols + 1],
        basis: vec![0; m],
        ncols,
    };
    let mut next_art = nv + m;
    for i in 0..m {
        let mut row = vec![0.0; ncols + 1];
        let sgn = if p.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for (v, a) in row.iter_mut().zip(p.lhs.row(i)) {
            *v = sgn * a;
        }
        row[nv + i] = sgn;
        row[ncols] = sgn * p.rhs[i];
        if sgn < 0.0 {
            row[next_art] = 1.0;
            t.basis[i] = next_art;
            next_art += 1;
        } else {
            t.basis[i] = nv + i;
        }
        t.rows.push(row);
    }

    if n_art > 0 {
        // Phase 1: minimize the sum of artificials.
        for j in nv + m..ncols {
            t.cost[j] = 1.0;
        }
        t.reduce_cost_row();
        match t.iterate(|_| true)? {
            StepEnd::Optimal => {}
            StepEnd::Unbounded => {
                return Err(LpError::Numerical("phase-1 objective unbounded"))
            }
        }
        let infeas = -t.cost[ncols];
        let scale = 1.0 + p.rhs.iter().fold(0.0_f64, |s, b| s.max(b.abs()));
        if infeas > LP_TOL * scale {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining artificials out of the basis; a row that offers no
        // pivot is linearly dependent on the others and is dropped.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= nv + m {
                match (0..nv + m).find(|&j| t.rows[i][j].abs() > LP_TOL) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase 2 on the original objective (artificial columns barred).
    t.cost = vec![0.0; ncols + 1];
    for j in 0..nv {
        t.cost[j] = match p.sense {
            Sense::Minimize => p.objective[j],
            Sense::Maximize => -p.objective[j],
        };
    }
    t.reduce_cost_row();
    match t.iterate(|j| j < nv + m)? {
        StepEnd::Unbounded => return Ok(LpOutcome::Unbounded),
        StepEnd::Optimal => {}
    }

    let mut x = vec![0.0; nv];
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < nv {
            x[bi] = t.rows[i][ncols].max(0.0);
        }
    }
    verify_optimal(p, &x)?;
    let value = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { value, point: x })
}

/// Independent primal-feasibility re-check of a claimed optimum against the
/// original (un-pivoted) data.
fn verify_optimal(p: &LpProblem, x: &[f64]) -> Result<(), LpError> {
    if x.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(LpError::Numerical("solution component negative or non-finite"));
    }
    for i in 0..p.lhs.rows() {
        let mut dot = 0.0;
        let mut mag = 0.0;
        for (a, &v) in p.lhs.row(i).iter().zip(x) {
            dot += a * v;
            mag += (a * v).abs();
        }
        let tol = LP_TOL * (1.0 + mag + p.rhs[i].abs());
        if dot > p.rhs[i] + tol {
            return Err(LpError::Numerical("constraint violated at claimed optimum"));
        }
    }
    Ok(())
}
