//! Verified enclosures for overdetermined interval linear systems.
//!
//! An interval linear system pairs an `m x n` matrix of intervals with an
//! interval right-hand side; its *united solution set* collects every point
//! that solves `Ax = b` for some choice of real matrix and vector inside the
//! bounds. For `m > n` this crate computes rigorous outer enclosures of that
//! set by carving the tall system into square `n x n` subsystems: every
//! solution of the whole system solves each subsystem, so intersecting
//! subsystem enclosures only sharpens the result — and an empty intersection
//! proves the system has no solution at all.
//!
//! Three solvers trade cost for tightness:
//!
//! * [`solver::simple_solve`] — solve each chosen subsystem independently and
//!   intersect the resulting boxes.
//! * [`solver::sequential_solve`] — iterate subsystems against one shared
//!   box, so each narrowing feeds the next subsystem immediately.
//! * [`parallel::parallel_sequential_solve`] *(std only)* — the shared-box
//!   iteration with subsystems distributed across worker threads that merge
//!   narrowings through lock-free intersection writes.
//!
//! Square subsystems are handled by midpoint-inverse preconditioning plus
//! interval Gauss-Seidel / Jacobi sweeps ([`square`]), and [`hull`] provides
//! a linear-programming oracle for the exact solution hull of small systems,
//! used to judge enclosure quality.
//!
//! All endpoint arithmetic is outward-rounded ([`interval`]), so every box
//! returned under the `Enclosure` status is a machine-checked superset of the
//! true solution set, and `ProvenUnsolvable` is a machine-checked proof of
//! emptiness.
//!
//! ```
//! use rand::SeedableRng;
//! use subsquares::solver::{simple_solve, Budget, SolveParams};
//! use subsquares::square::SolveStatus;
//! use subsquares::{Interval, IntervalMatrix, IntervalVector};
//!
//! // Three equations, two unknowns: x + y = 2, x - y = 0, 2x + y = 3,
//! // with every coefficient fattened to a small interval around its value.
//! let iv = |v: f64| Interval::new(v - 0.01, v + 0.01);
//! let a = IntervalMatrix::from_rows(&[
//!     vec![iv(1.0), iv(1.0)],
//!     vec![iv(1.0), iv(-1.0)],
//!     vec![iv(2.0), iv(1.0)],
//! ]);
//! let b = IntervalVector::new(vec![iv(2.0), iv(0.0), iv(3.0)]);
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
//! let out = simple_solve(&a, &b, Budget::AllSubsquares, SolveParams::default(), &mut rng)?;
//! assert_eq!(out.status, SolveStatus::Enclosure);
//! assert!(out.x.contains_point(&[1.0, 1.0]));
//! # Ok::<(), subsquares::solver::SolverError>(())
//! ```
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std` feature
//! adds the thread-based parallel solver.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod hull;
pub mod interval;
pub mod linalg;
#[cfg(feature = "std")]
pub mod parallel;
pub mod selection;
pub mod simplex;
pub mod solver;
pub mod square;

pub use interval::{Interval, IntervalError};
pub use linalg::{IntervalMatrix, IntervalVector, PointMatrix};
