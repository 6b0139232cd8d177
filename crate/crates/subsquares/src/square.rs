//! Verified solving of one square interval system: midpoint-inverse
//! preconditioning, a contraction-based initial enclosure, and interval
//! Gauss-Seidel / Jacobi narrowing sweeps.

use alloc::vec::Vec;

use crate::interval::{Interval, IntervalError};
use crate::linalg::{IntervalMatrix, IntervalVector};

/// Failure modes of the square-system machinery. All of them mean "this
/// subsystem produced no usable narrowing", never "the returned box is wrong".
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SquareError {
    /// The midpoint matrix could not be inverted, so no preconditioner exists.
    #[error("midpoint matrix is singular; this subsystem must be skipped or replaced")]
    SingularMidpoint,
    /// The preconditioned system has contraction bound >= 1, so the norm-based
    /// initial enclosure does not exist.
    #[error("preconditioned system is not contracting, no initial enclosure")]
    NotContracting,
    /// A diagonal entry of the preconditioned matrix contains zero, so the
    /// narrowing step cannot divide by it.
    #[error("preconditioned diagonal entry {index} contains zero")]
    DiagonalContainsZero { index: usize },
}

/// Why a solve ended without a definite answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    SingularMidpoint,
    NotContracting,
    DiagonalContainsZero,
    /// Every subsystem of an overdetermined solve failed to precondition or
    /// contract, so there was nothing to iterate.
    AllSubsquaresInconclusive,
}

impl From<SquareError> for InconclusiveReason {
    fn from(e: SquareError) -> Self {
        match e {
            SquareError::SingularMidpoint => InconclusiveReason::SingularMidpoint,
            SquareError::NotContracting => InconclusiveReason::NotContracting,
            SquareError::DiagonalContainsZero { .. } => InconclusiveReason::DiagonalContainsZero,
        }
    }
}

/// How a solve ended.
///
/// `Enclosure` and `ProvenUnsolvable` are verified claims; `Inconclusive`
/// claims nothing (the accompanying box is still never wrong, merely loose).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The box contains the whole solution set.
    Enclosure,
    /// The solution set is empty: some narrowing step produced an empty
    /// intersection, which is a machine-checked proof of unsolvability.
    ProvenUnsolvable,
    /// The method could not run to a verdict.
    Inconclusive(InconclusiveReason),
}

impl SolveStatus {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, SolveStatus::Inconclusive(_))
    }
}

/// A square system left-multiplied by the inverse of its midpoint matrix.
///
/// `c` encloses every product `M * A'` and `d` every `M * b'` for point
/// members `A'`, `b'` of the original system, so the original solution set is
/// contained in the solution set of `(c, d)`.
#[derive(Debug, Clone)]
pub struct PreconditionedSystem {
    pub c: IntervalMatrix,
    pub d: IntervalVector,
    /// Indices of the original system rows this subsystem was built from.
    pub rows: Vec<usize>,
}

impl PreconditionedSystem {
    pub fn n(&self) -> usize {
        self.d.len()
    }
}

/// Preconditions the square system `a_sq x = b_sq` by the floating-point
/// inverse of its midpoint matrix.
pub fn precondition(
    a_sq: &IntervalMatrix,
    b_sq: &IntervalVector,
) -> Result<PreconditionedSystem, SquareError> {
    precondition_rows(a_sq, b_sq, (0..a_sq.rows()).collect())
}

/// Like [`precondition`], recording which original rows the subsystem uses.
pub fn precondition_rows(
    a_sq: &IntervalMatrix,
    b_sq: &IntervalVector,
    rows: Vec<usize>,
) -> Result<PreconditionedSystem, SquareError> {
    assert_eq!(a_sq.rows(), a_sq.cols(), "subsystem must be square");
    assert_eq!(a_sq.rows(), b_sq.len(), "rhs length mismatch");
    let mid = a_sq
        .midpoint()
        .map_err(|_| SquareError::SingularMidpoint)?;
    let m = mid.inverse().map_err(|_| SquareError::SingularMidpoint)?;
    Ok(PreconditionedSystem {
        c: m.mul_imat(a_sq),
        d: m.mul_ivec(b_sq),
        rows,
    })
}

/// Builds the subsystem of `(a, b)` from the given row indices and
/// preconditions it.
pub fn precondition_subsquare(
    a: &IntervalMatrix,
    b: &IntervalVector,
    rows: &[usize],
) -> Result<PreconditionedSystem, SquareError> {
    precondition_rows(&a.select_rows(rows), &b.select(rows), rows.to_vec())
}

/// Norm-based starting box for the preconditioned system.
///
/// With `R = I - C`, any real solution `x` of a point member satisfies
/// `|x| <= |R||x| + |d|`, so when `rho = ||mag R||_inf < 1` every solution
/// lies in `[-r, r]^n` with `r = max_i mag(d_i) / (1 - rho)`. The bound is
/// evaluated in interval arithmetic so `r` errs on the large side.
pub fn initial_enclosure(p: &PreconditionedSystem) -> Result<IntervalVector, SquareError> {
    let n = p.n();
    let mut rho = 0.0_f64;
    for i in 0..n {
        let mut row_sum = Interval::point(0.0);
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            let r_ij = Interval::point(delta) - p.c[(i, j)];
            row_sum = row_sum + Interval::point(r_ij.mag());
        }
        rho = rho.max(row_sum.hi());
    }
    if rho.is_nan() || rho >= 1.0 {
        return Err(SquareError::NotContracting);
    }
    let delta = p.d.iter().map(Interval::mag).fold(0.0, f64::max);
    let r = Interval::point(delta)
        .checked_div(Interval::point(1.0) - Interval::point(rho))
        .expect("1 - rho is positive")
        .hi();
    Ok(IntervalVector::symmetric(n, r))
}

/// One narrowing update of component `i`: express `x_i` from equation `i`
/// using the current entries of `x`, then intersect with `x[i]`.
///
/// Returns the empty interval when the intersection is void — that is a
/// proof that `x` contains no solution.
pub fn gs_step(
    p: &PreconditionedSystem,
    x: &IntervalVector,
    i: usize,
) -> Result<Interval, SquareError> {
    let n = p.n();
    let mut num = p.d[i];
    for j in 0..n {
        if j != i {
            num = num - p.c[(i, j)] * x[j];
        }
    }
    // An empty numerator (some x[j] was already empty) or an empty x[i]
    // makes the intersection empty regardless of the division.
    if num.is_empty() || x[i].is_empty() {
        return Ok(Interval::EMPTY);
    }
    match num.checked_div(p.c[(i, i)]) {
        Ok(q) => Ok(q.intersect(&x[i])),
        Err(IntervalError::DivisionByZero) => Err(SquareError::DiagonalContainsZero { index: i }),
        Err(_) => unreachable!("operands checked non-empty above"),
    }
}

/// One full pass `i = 0..n` where each update is visible to the later ones.
/// Stops early once a component empties (the box is then empty as a set).
pub fn gs_sweep(
    p: &PreconditionedSystem,
    x: &IntervalVector,
) -> Result<IntervalVector, SquareError> {
    let mut out = x.clone();
    for i in 0..p.n() {
        let xi = gs_step(p, &out, i)?;
        out[i] = xi;
        if xi.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// One full pass where every update reads only the pre-sweep box, so the
/// component updates are order-independent.
pub fn jacobi_sweep(
    p: &PreconditionedSystem,
    x: &IntervalVector,
) -> Result<IntervalVector, SquareError> {
    let mut out = x.clone();
    for i in 0..p.n() {
        out[i] = gs_step(p, x, i)?;
    }
    Ok(out)
}

/// Per-endpoint stopping test: every bound moved less than `eps` (unchanged
/// infinite bounds count as converged).
pub fn boxes_converged(prev: &IntervalVector, next: &IntervalVector, eps: f64) -> bool {
    assert_eq!(prev.len(), next.len());
    prev.iter().zip(next.iter()).all(|(p, q)| {
        match (p.bounds(), q.bounds()) {
            (Some((pl, ph)), Some((ql, qh))) => {
                (pl == ql || (pl - ql).abs() < eps) && (ph == qh || (ph - qh).abs() < eps)
            }
            _ => false,
        }
    })
}

/// Result of a square solve (or of the driver loops built on it).
#[derive(Debug, Clone)]
pub struct SquareOutcome {
    pub status: SolveStatus,
    /// The final box. Empty components exactly when status is
    /// `ProvenUnsolvable`; the full space when an `Inconclusive` solve never
    /// produced a bound.
    pub x: IntervalVector,
    /// Narrowing sweeps performed.
    pub iterations: usize,
}

impl SquareOutcome {
    fn inconclusive(reason: impl Into<InconclusiveReason>, n: usize) -> Self {
        SquareOutcome {
            status: SolveStatus::Inconclusive(reason.into()),
            x: IntervalVector::filled(n, Interval::ENTIRE),
            iterations: 0,
        }
    }
}

/// Solves one square interval system to a verified verdict: precondition,
/// take the norm-based starting box, then narrow by repeated sweeps until
/// the `eps` criterion holds or `max_iter` sweeps elapse.
pub fn solve_square(
    a_sq: &IntervalMatrix,
    b_sq: &IntervalVector,
    eps: f64,
    max_iter: usize,
) -> SquareOutcome {
    let n = a_sq.cols();
    let p = match precondition(a_sq, b_sq) {
        Ok(p) => p,
        Err(e) => return SquareOutcome::inconclusive(e, n),
    };
    let x0 = match initial_enclosure(&p) {
        Ok(x) => x,
        Err(e) => return SquareOutcome::inconclusive(e, n),
    };
    solve_preconditioned(&p, x0, eps, max_iter)
}

/// Like [`solve_square`] but narrowing a caller-supplied starting box
/// instead of the norm-based one. An empty intersection then proves the
/// system has no solution *inside `x0`*; if `x0` encloses the whole solution
/// set this is full unsolvability.
pub fn solve_square_from(
    a_sq: &IntervalMatrix,
    b_sq: &IntervalVector,
    x0: &IntervalVector,
    eps: f64,
    max_iter: usize,
) -> SquareOutcome {
    let p = match precondition(a_sq, b_sq) {
        Ok(p) => p,
        Err(e) => return SquareOutcome::inconclusive(e, a_sq.cols()),
    };
    solve_preconditioned(&p, x0.clone(), eps, max_iter)
}

/// The shared narrowing loop of the two entry points above.
pub fn solve_preconditioned(
    p: &PreconditionedSystem,
    x0: IntervalVector,
    eps: f64,
    max_iter: usize,
) -> SquareOutcome {
    let mut x = x0;
    for k in 1..=max_iter {
        let next = match gs_sweep(p, &x) {
            Ok(v) => v,
            Err(e) => {
                return SquareOutcome {
                    status: SolveStatus::Inconclusive(e.into()),
                    x,
                    iterations: k - 1,
                }
            }
        };
        if next.has_empty_component() {
            return SquareOutcome {
                status: SolveStatus::ProvenUnsolvable,
                x: next,
                iterations: k,
            };
        }
        let done = boxes_converged(&x, &next, eps);
        x = next;
        if done {
            return SquareOutcome {
                status: SolveStatus::Enclosure,
                x,
                iterations: k,
            };
        }
    }
    SquareOutcome {
        status: SolveStatus::Enclosure,
        x,
        iterations: max_iter,
    }
}
