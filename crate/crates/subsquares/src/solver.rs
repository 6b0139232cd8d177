//! The overdetermined solvers: pick square subsystems, solve or sweep them,
//! and combine their narrowings into one enclosure of the united solution
//! set.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::interval::Interval;
use crate::linalg::{IntervalMatrix, IntervalVector};
use crate::selection::{choose_subsquares, count_subsquares, SelectionError};
use crate::square::{
    boxes_converged, gs_sweep, initial_enclosure, jacobi_sweep, precondition_subsquare,
    solve_square, InconclusiveReason, PreconditionedSystem, SolveStatus,
};

/// Upper limit on how many subsystems [`Budget::AllSubsquares`] may enumerate.
pub const ALL_SUBSQUARES_CAP: usize = 5000;

/// How many subsystems the simple solver consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// Every possible `n`-row subsystem, provided there are at most
    /// [`ALL_SUBSQUARES_CAP`] of them.
    AllSubsquares,
    /// This many distinct subsystems drawn at random (fewer when the system
    /// has fewer in total).
    Random(usize),
}

/// Picks [`Budget::AllSubsquares`] whenever the enumeration fits under the
/// cap, otherwise three times the covering count at the given overlap.
pub fn default_budget(m: usize, n: usize, overlap: usize) -> Result<Budget, SelectionError> {
    if combinations(m, n) <= ALL_SUBSQUARES_CAP as u128 {
        Ok(Budget::AllSubsquares)
    } else {
        Ok(Budget::Random(3 * count_subsquares(m, n, overlap)?))
    }
}

/// Starting box for the shared-box solvers.
#[derive(Debug, Clone)]
pub enum StartBox {
    /// Seed from the first subsystem whose norm-based enclosure exists.
    Auto,
    /// Narrow the given box. The result then encloses the part of the
    /// solution set inside this box; unsolvability verdicts are relative to
    /// it unless it is known to contain the whole solution set.
    Given(IntervalVector),
}

/// Which narrowing pass the shared-box solvers run per subsystem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    GaussSeidel,
    Jacobi,
}

/// Convergence threshold and round cap shared by all solvers.
#[derive(Debug, Clone, Copy)]
pub struct SolveParams {
    /// Per-endpoint movement below which a round counts as converged.
    pub eps: f64,
    /// Maximum narrowing rounds (sweeps over all subsystems).
    pub max_iter: usize,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            eps: 1e-6,
            max_iter: 100,
        }
    }
}

/// Errors from solver entry points (distinct from the per-run verdict).
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    /// `AllSubsquares` was requested but the enumeration is too large.
    #[error("{combinations} subsystems exceed the all-subsquares cap of {cap}")]
    BudgetExceeded { combinations: u128, cap: usize },
    /// Invalid subsystem selection parameters.
    #[error(transparent)]
    Selection(#[from] SelectionError),
}

/// Result of an overdetermined solve.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Final box; has empty components exactly when status is
    /// `ProvenUnsolvable`.
    pub x: IntervalVector,
    /// Subsystems that contributed narrowing (intersected boxes, or active
    /// participants of the shared-box iteration).
    pub subsquares_used: usize,
    /// Total narrowing sweeps (simple solver) or rounds (shared-box solvers).
    pub iterations: usize,
}

/// Number of `n`-row subsets of `m` rows, saturating far above any cap.
pub fn combinations(m: usize, n: usize) -> u128 {
    assert!(m >= n);
    let k = n.min(m - n);
    let mut c: u128 = 1;
    for i in 0..k {
        // Multiply before dividing: the running product of i+1 consecutive
        // binomial steps is always divisible by i+1.
        c = c.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    c
}

/// Lexicographic stream of all `n`-element subsets of `0..m`.
struct Combinations {
    m: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(m: usize, n: usize) -> Self {
        Combinations {
            m,
            cur: Some((0..n).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let c = self.cur.as_mut().unwrap();
        let n = c.len();
        let mut i = n;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if c[i] < self.m - (n - i) {
                c[i] += 1;
                for j in i + 1..n {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Solves each chosen subsystem independently and intersects the boxes.
///
/// Starts from the whole space, so the result is an enclosure of the
/// solution set whatever subset of subsystems ends up contributing. Returns
/// `ProvenUnsolvable` the moment the running intersection empties — that is
/// a proof the overdetermined system has no solution. Subsystems whose solve
/// is inconclusive are skipped (they still consume random-budget draws).
pub fn simple_solve<R: Rng + ?Sized>(
    a: &IntervalMatrix,
    b: &IntervalVector,
    budget: Budget,
    params: SolveParams,
    rng: &mut R,
) -> Result<SolveOutcome, SolverError> {
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n && n >= 1, "need m >= n >= 1, got {m}x{n}");
    assert_eq!(b.len(), m, "rhs length mismatch");

    let mut x = IntervalVector::filled(n, Interval::ENTIRE);
    let mut used = 0;
    let mut sweeps = 0;

    let mut visit = |rows: &[usize], x: &mut IntervalVector| -> Option<SolveOutcome> {
        let sub = solve_square(&a.select_rows(rows), &b.select(rows), params.eps, params.max_iter);
        sweeps += sub.iterations;
        match sub.status {
            SolveStatus::Inconclusive(_) => None,
            SolveStatus::ProvenUnsolvable => {
                // The subsystem alone is unsolvable, hence so is the system.
                used += 1;
                Some(SolveOutcome {
                    status: SolveStatus::ProvenUnsolvable,
                    x: sub.x,
                    subsquares_used: used,
                    iterations: sweeps,
                })
            }
            SolveStatus::Enclosure => {
                used += 1;
                *x = x.intersect(&sub.x);
                if x.has_empty_component() {
                    Some(SolveOutcome {
                        status: SolveStatus::ProvenUnsolvable,
                        x: x.clone(),
                        subsquares_used: used,
                        iterations: sweeps,
                    })
                } else {
                    None
                }
            }
        }
    };

    match budget {
        Budget::AllSubsquares => {
            let total = combinations(m, n);
            if total > ALL_SUBSQUARES_CAP as u128 {
                return Err(SolverError::BudgetExceeded {
                    combinations: total,
                    cap: ALL_SUBSQUARES_CAP,
                });
            }
            for rows in Combinations::new(m, n) {
                if let Some(out) = visit(&rows, &mut x) {
                    return Ok(out);
                }
            }
        }
        Budget::Random(k) => {
            let total = combinations(m, n);
            let target = (k as u128).min(total) as usize;
            let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
            while seen.len() < target {
                let mut rows: Vec<usize> =
                    rand::seq::index::sample(rng, m, n).iter().collect();
                rows.sort_unstable();
                if !seen.insert(rows.clone()) {
                    continue;
                }
                if let Some(out) = visit(&rows, &mut x) {
                    return Ok(out);
                }
            }
        }
    }

    let status = if used == 0 {
        SolveStatus::Inconclusive(InconclusiveReason::AllSubsquaresInconclusive)
    } else {
        SolveStatus::Enclosure
    };
    Ok(SolveOutcome {
        status,
        x,
        subsquares_used: used,
        iterations: sweeps,
    })
}

/// Common preparation for the shared-box solvers: select a covering set of
/// subsystems, precondition each once, and resolve the starting box. Kept in
/// one place so the threaded variant sets up identically to the sequential
/// one (including random-stream consumption).
pub(crate) enum Setup {
    Ready {
        systems: Vec<PreconditionedSystem>,
        start: IntervalVector,
    },
    /// Nothing to iterate; the finished outcome is already known.
    Degenerate(SolveOutcome),
}

pub(crate) fn shared_setup<R: Rng + ?Sized>(
    a: &IntervalMatrix,
    b: &IntervalVector,
    x0: &StartBox,
    overlap: usize,
    rng: &mut R,
) -> Result<Setup, SelectionError> {
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n && n >= 1, "need m >= n >= 1, got {m}x{n}");
    assert_eq!(b.len(), m, "rhs length mismatch");

    let sel = choose_subsquares(m, n, overlap, rng)?;
    let systems: Vec<PreconditionedSystem> = sel
        .sets
        .iter()
        .filter_map(|rows| precondition_subsquare(a, b, rows).ok())
        .collect();

    let start = match x0 {
        StartBox::Given(v) => {
            assert_eq!(v.len(), n, "start box length mismatch");
            v.clone()
        }
        StartBox::Auto => match systems.iter().find_map(|p| initial_enclosure(p).ok()) {
            Some(x) => x,
            None => {
                return Ok(Setup::Degenerate(SolveOutcome {
                    status: SolveStatus::Inconclusive(
                        InconclusiveReason::AllSubsquaresInconclusive,
                    ),
                    x: IntervalVector::filled(n, Interval::ENTIRE),
                    subsquares_used: 0,
                    iterations: 0,
                }))
            }
        },
    };
    if systems.is_empty() {
        return Ok(Setup::Degenerate(SolveOutcome {
            status: SolveStatus::Inconclusive(InconclusiveReason::AllSubsquaresInconclusive),
            x: start,
            subsquares_used: 0,
            iterations: 0,
        }));
    }
    Ok(Setup::Ready { systems, start })
}

/// Narrows one shared box by cycling Gauss-Seidel sweeps over a covering set
/// of subsystems, so every narrowing is immediately visible to the next
/// subsystem. See [`sequential_solve_sweep`] for the Jacobi variant.
pub fn sequential_solve<R: Rng + ?Sized>(
    a: &IntervalMatrix,
    b: &IntervalVector,
    x0: &StartBox,
    overlap: usize,
    params: SolveParams,
    rng: &mut R,
) -> Result<SolveOutcome, SelectionError> {
    sequential_solve_sweep(a, b, x0, overlap, params, Sweep::GaussSeidel, rng)
}

/// The shared-box iteration with an explicit sweep kind.
///
/// One round = one sweep per active subsystem, in selection order. A
/// subsystem that fails to precondition, or whose sweep cannot divide, is
/// dropped and the rest continue. Stops when a full round moves every
/// endpoint by less than `eps`, when the box empties (`ProvenUnsolvable`),
/// or after `max_iter` rounds (the box is sound regardless).
pub fn sequential_solve_sweep<R: Rng + ?Sized>(
    a: &IntervalMatrix,
    b: &IntervalVector,
    x0: &StartBox,
    overlap: usize,
    params: SolveParams,
    sweep: Sweep,
    rng: &mut R,
) -> Result<SolveOutcome, SelectionError> {
    let (systems, start) = match shared_setup(a, b, x0, overlap, rng)? {
        Setup::Ready { systems, start } => (systems, start),
        Setup::Degenerate(out) => return Ok(out),
    };
    let used = systems.len();
    let mut active = vec![true; used];
    let mut any_progress = false;
    let mut x = start;
    for round in 1..=params.max_iter {
        let round_start = x.clone();
        for (idx, p) in systems.iter().enumerate() {
            if !active[idx] {
                continue;
            }
            let swept = match sweep {
                Sweep::GaussSeidel => gs_sweep(p, &x),
                Sweep::Jacobi => jacobi_sweep(p, &x),
            };
            match swept {
                Err(_) => active[idx] = false,
                Ok(next) => {
                    any_progress = true;
                    if next.has_empty_component() {
                        return Ok(SolveOutcome {
                            status: SolveStatus::ProvenUnsolvable,
                            x: next,
                            subsquares_used: used,
                            iterations: round,
                        });
                    }
                    x = next;
                }
            }
        }
        if active.iter().all(|a| !a) {
            let status = if any_progress {
                SolveStatus::Enclosure
            } else {
                SolveStatus::Inconclusive(InconclusiveReason::AllSubsquaresInconclusive)
            };
            return Ok(SolveOutcome {
                status,
                x,
                subsquares_used: used,
                iterations: round,
            });
        }
        if boxes_converged(&round_start, &x, params.eps) {
            return Ok(SolveOutcome {
                status: SolveStatus::Enclosure,
                x,
                subsquares_used: used,
                iterations: round,
            });
        }
    }
    Ok(SolveOutcome {
        status: SolveStatus::Enclosure,
        x,
        subsquares_used: used,
        iterations: params.max_iter,
    })
}
