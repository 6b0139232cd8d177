//! Thread-parallel variant of the shared-box iteration.
//!
//! Subsystems are distributed over worker threads; all workers narrow one
//! shared box. Each component lives in its own atomic cell, and a worker
//! only ever replaces a component with a sub-interval of what it read, via
//! compare-and-swap retry. Soundness therefore never depends on scheduling:
//! at every instant the shared box contains everything every subsystem has
//! jointly ruled in. Only tightness (and which round converges) can vary
//! with thread timing — except with one worker, which reproduces the
//! sequential Jacobi run bit for bit.
//!
//! Workers use the Jacobi sweep, not Gauss-Seidel: its updates read only the
//! pre-sweep snapshot, so concurrent narrowing by other workers between a
//! read and a write can only make the stored result wider than ideal, never
//! wrong.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Barrier;

use crossbeam_utils::atomic::AtomicCell;
use rand::Rng;

use crate::interval::Interval;
use crate::linalg::{IntervalMatrix, IntervalVector};
use crate::selection::SelectionError;
use crate::solver::{shared_setup, Setup, SolveOutcome, SolveParams, StartBox};
use crate::square::{boxes_converged, jacobi_sweep, InconclusiveReason, SolveStatus};

/// One interval as raw endpoint bits. Stored bits always round-trip exactly,
/// and bit equality is well-defined even for the NaN-encoded empty interval,
/// which plain float comparison would mishandle in compare-and-swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct IntervalBits {
    lo: u64,
    hi: u64,
}

impl IntervalBits {
    fn pack(iv: Interval) -> Self {
        IntervalBits {
            lo: iv.lo().to_bits(),
            hi: iv.hi().to_bits(),
        }
    }

    fn unpack(self) -> Interval {
        Interval::from_raw(f64::from_bits(self.lo), f64::from_bits(self.hi))
    }
}

fn load_box(cells: &[AtomicCell<IntervalBits>]) -> IntervalVector {
    cells.iter().map(|c| c.load().unpack()).collect()
}

/// Stores `next` into the cell, retrying on contention; the stored value is
/// always a subset of whatever is currently there. Writing `next`'s own bits
/// when it already is a subset keeps the single-worker run identical to the
/// sequential one.
fn merge_component(cell: &AtomicCell<IntervalBits>, next: Interval) {
    let mut cur = cell.load();
    loop {
        let cur_iv = cur.unpack();
        let store = if next.subset_of(&cur_iv) {
            next
        } else {
            cur_iv.intersect(&next)
        };
        let store_bits = IntervalBits::pack(store);
        if store_bits == cur {
            return;
        }
        match cell.compare_exchange(cur, store_bits) {
            Ok(_) => return,
            Err(actual) => cur = actual,
        }
    }
}

/// The shared-box iteration with subsystems spread over `workers` threads.
///
/// Verdict semantics match [`crate::solver::sequential_solve_sweep`] with
/// the Jacobi sweep; with `workers = 1` the result is bitwise identical to
/// that run given the same seed.
pub fn parallel_sequential_solve<R: Rng + ?Sized>(
    a: &IntervalMatrix,
    b: &IntervalVector,
    x0: &StartBox,
    overlap: usize,
    params: SolveParams,
    workers: usize,
    rng: &mut R,
) -> Result<SolveOutcome, SelectionError> {
    assert!(workers >= 1, "need at least one worker");
    let (systems, start) = match shared_setup(a, b, x0, overlap, rng)? {
        Setup::Ready { systems, start } => (systems, start),
        Setup::Degenerate(out) => return Ok(out),
    };
    let used = systems.len();

    let cells: Vec<AtomicCell<IntervalBits>> = start
        .iter()
        .map(|&iv| AtomicCell::new(IntervalBits::pack(iv)))
        .collect();
    let empty_found = AtomicBool::new(false);
    let any_progress = AtomicBool::new(false);
    let active_count = AtomicUsize::new(used);
    let stop = AtomicBool::new(false);
    // Work phase barrier + decision barrier per round; the main thread joins
    // both as the coordinator.
    let barrier = Barrier::new(workers + 1);

    let mut verdict: Option<(SolveStatus, usize)> = None;
    std::thread::scope(|scope| {
        for w in 0..workers {
            let systems = &systems;
            let cells = &cells;
            let barrier = &barrier;
            let empty_found = &empty_found;
            let any_progress = &any_progress;
            let active_count = &active_count;
            let stop = &stop;
            scope.spawn(move || {
                // Owned subsystems in selection order; worker 0 of a
                // single-worker run owns everything, in order.
                let owned: Vec<usize> = (w..systems.len()).step_by(workers).collect();
                let mut active: Vec<bool> = vec![true; owned.len()];
                for _round in 1..=params.max_iter {
                    for (slot, &idx) in owned.iter().enumerate() {
                        if !active[slot] || empty_found.load(Ordering::SeqCst) {
                            continue;
                        }
                        let snapshot = load_box(cells);
                        match jacobi_sweep(&systems[idx], &snapshot) {
                            Err(_) => {
                                active[slot] = false;
                                active_count.fetch_sub(1, Ordering::SeqCst);
                            }
                            Ok(next) => {
                                any_progress.store(true, Ordering::SeqCst);
                                for (cell, &iv) in cells.iter().zip(next.iter()) {
                                    merge_component(cell, iv);
                                }
                                if next.has_empty_component() {
                                    empty_found.store(true, Ordering::SeqCst);
                                }
                            }
                        }
                    }
                    barrier.wait();
                    barrier.wait();
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                }
            });
        }

        // Coordinator: one decision per round, mirroring the sequential
        // driver's checks in the same order.
        let mut round_start = start.clone();
        for round in 1..=params.max_iter {
            barrier.wait();
            let current = load_box(&cells);
            if empty_found.load(Ordering::SeqCst) {
                verdict = Some((SolveStatus::ProvenUnsolvable, round));
            } else if active_count.load(Ordering::SeqCst) == 0 {
                let status = if any_progress.load(Ordering::SeqCst) {
                    SolveStatus::Enclosure
                } else {
                    SolveStatus::Inconclusive(InconclusiveReason::AllSubsquaresInconclusive)
                };
                verdict = Some((status, round));
            } else if boxes_converged(&round_start, &current, params.eps) {
                verdict = Some((SolveStatus::Enclosure, round));
            }
            if verdict.is_some() {
                stop.store(true, Ordering::SeqCst);
            }
            round_start = current;
            barrier.wait();
            if verdict.is_some() {
                break;
            }
        }
    });

    let (status, iterations) =
        verdict.unwrap_or((SolveStatus::Enclosure, params.max_iter));
    Ok(SolveOutcome {
        status,
        x: load_box(&cells),
        subsquares_used: used,
        iterations,
    })
}
