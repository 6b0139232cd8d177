//! Ground-truth machinery: membership in the united solution set, the exact
//! interval hull of small systems via orthant-wise linear programming, and a
//! sampling-based inner hull.
//!
//! The united solution set of `(A, b)` collects every `x` with `A'x = b'`
//! for some point members `A' in A`, `b' in b`. Membership has a closed
//! characterization: `x` belongs iff `|A_c x - b_c| <= A_D |x| + b_D`
//! componentwise, with `c` the midpoints and `D` the radii. Restricted to
//! one orthant, `|x|` becomes linear, so per orthant the set is a polyhedron
//! whose coordinate extremes a linear program finds exactly (up to solver
//! tolerance); the hull is the union over orthants.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::interval::Interval;
use crate::linalg::{IntervalMatrix, IntervalVector, PointMatrix};
use crate::simplex::{simplex_solve, LpError, LpOutcome, LpProblem, Sense};

/// Default limit on unknowns for [`exact_hull`] (each unknown doubles the
/// orthant count).
pub const DEFAULT_HULL_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum HullError {
    /// Too many unknowns for the orthant enumeration.
    #[error("system has {n} unknowns, above the hull oracle cap of {cap}")]
    DimensionCap { n: usize, cap: usize },
    /// An underlying linear program failed.
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Outcome of the exact-hull computation.
#[derive(Debug, Clone, PartialEq)]
pub struct HullResult {
    /// The interval hull, or `None` when the solution set is empty — which
    /// is exactly an unsolvability verdict for the system.
    pub hull: Option<IntervalVector>,
    pub orthants_visited: usize,
}

/// Membership of `x` in the united solution set, decided by the midpoint /
/// radius inequality above (plain floating-point evaluation).
pub fn op_membership(a: &IntervalMatrix, b: &IntervalVector, x: &[f64]) -> bool {
    assert_eq!(a.cols(), x.len(), "point length mismatch");
    assert_eq!(a.rows(), b.len(), "rhs length mismatch");
    for i in 0..a.rows() {
        let (b_lo, b_hi) = b[i].bounds().expect("membership needs non-empty rhs");
        let b_c = 0.5 * b_lo + 0.5 * b_hi;
        let b_r = 0.5 * (b_hi - b_lo);
        let mut center = -b_c;
        let mut spread = b_r;
        for (j, &xj) in x.iter().enumerate() {
            let (lo, hi) = a[(i, j)].bounds().expect("membership needs non-empty matrix");
            center += (0.5 * lo + 0.5 * hi) * xj;
            spread += 0.5 * (hi - lo) * xj.abs();
        }
        if center.abs() > spread {
            return false;
        }
    }
    true
}

/// Additively widens every component by `pad` (used to absorb LP tolerance
/// before the oracle's box participates in inclusion assertions).
pub fn pad_box(v: &IntervalVector, pad: f64) -> IntervalVector {
    assert!(pad >= 0.0);
    v.iter()
        .map(|iv| {
            let (lo, hi) = iv.bounds().expect("cannot pad an empty box");
            Interval::new(lo - pad, hi + pad)
        })
        .collect()
}

/// The tightest box around the united solution set, found by minimizing and
/// maximizing each coordinate over every orthant's polyhedron.
///
/// `hull: None` means every orthant was infeasible, i.e. the system is
/// unsolvable. Coordinates may come out infinite when the solution set is
/// unbounded (possible when the matrix contains singular point members).
pub fn exact_hull(
    a: &IntervalMatrix,
    b: &IntervalVector,
    n_cap: usize,
) -> Result<HullResult, HullError> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m, "rhs length mismatch");
    assert!(n >= 1);
    if n > n_cap {
        return Err(HullError::DimensionCap { n, cap: n_cap });
    }
    let a_c = a.midpoint().expect("hull oracle needs finite matrix entries");
    let a_r = a.radius().expect("hull oracle needs finite matrix entries");
    let b_c = b.midpoint().expect("hull oracle needs finite rhs entries");
    let b_r = b.radius().expect("hull oracle needs finite rhs entries");

    let mut hull: Option<Vec<Interval>> = None;
    let mut visited = 0;
    for mask in 0u32..(1u32 << n) {
        visited += 1;
        let sign = |j: usize| if mask & (1 << j) != 0 { 1.0 } else { -1.0 };
        // In this orthant x = diag(s) y with y >= 0, so |x| = y and the
        // membership inequality splits into two linear constraint blocks.
        let mut lhs = Vec::with_capacity(2 * m * n);
        let mut rhs = Vec::with_capacity(2 * m);
        for i in 0..m {
            for j in 0..n {
                lhs.push(a_c[(i, j)] * sign(j) - a_r[(i, j)]);
            }
            rhs.push(b_c[i] + b_r[i]);
        }
        for i in 0..m {
            for j in 0..n {
                lhs.push(-a_c[(i, j)] * sign(j) - a_r[(i, j)]);
            }
            rhs.push(-b_c[i] + b_r[i]);
        }
        let lhs = PointMatrix::new(2 * m, n, lhs);

        let solve_coord = |j: usize, sense: Sense| -> Result<Option<f64>, HullError> {
            let mut objective = vec![0.0; n];
            objective[j] = 1.0;
            let p = LpProblem {
                sense,
                objective,
                lhs: lhs.clone(),
                rhs: rhs.clone(),
            };
            match simplex_solve(&p)? {
                LpOutcome::Optimal { value, .. } => Ok(Some(value)),
                LpOutcome::Infeasible => Ok(None),
                LpOutcome::Unbounded => Ok(Some(f64::INFINITY)),
            }
        };

        let mut orthant: Vec<Interval> = Vec::with_capacity(n);
        let mut feasible = true;
        for j in 0..n {
            let Some(y_min) = solve_coord(j, Sense::Minimize)? else {
                feasible = false;
                break;
            };
            let Some(y_max) = solve_coord(j, Sense::Maximize)? else {
                feasible = false;
                break;
            };
            // Map back to x_j = s_j * y_j; y_min is finite (y >= 0 bounds
            // the minimum below), y_max may be +inf.
            let (lo, hi) = if sign(j) > 0.0 {
                (y_min, y_max)
            } else {
                (-y_max, -y_min)
            };
            orthant.push(Interval::new(lo, hi));
        }
        if !feasible {
            continue;
        }
        hull = Some(match hull {
            None => orthant,
            Some(acc) => acc
                .iter()
                .zip(&orthant)
                .map(|(x, y)| x.hull(y))
                .collect(),
        });
    }
    Ok(HullResult {
        hull: hull.map(IntervalVector::new),
        orthants_visited: visited,
    })
}

/// One random value inside the interval, biased toward the endpoints so
/// extreme point systems are sampled often.
fn draw_point<R: Rng + ?Sized>(iv: Interval, rng: &mut R) -> f64 {
    let (lo, hi) = iv.bounds().expect("cannot sample an empty interval");
    match rng.random_range(0..4u8) {
        0 => lo,
        1 => hi,
        _ => rng.random_range(lo..=hi),
    }
}

/// Hull of solution-set members found by sampling: draw random square row
/// subsets and random point systems inside the bounds, solve them, and keep
/// each solution that passes [`op_membership`]. Returns `None` when no
/// member was found — for unsolvable systems that is the expected result.
///
/// The returned box is an *inner* bound: it never exceeds the exact hull,
/// and it approaches it as `samples` grows.
pub fn inner_hull_sampling<R: Rng + ?Sized>(
    a: &IntervalMatrix,
    b: &IntervalVector,
    samples: usize,
    rng: &mut R,
) -> Option<IntervalVector> {
    assert!(samples >= 1);
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n && n >= 1, "need m >= n >= 1, got {m}x{n}");
    assert_eq!(b.len(), m, "rhs length mismatch");

    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    let mut found = false;
    for _ in 0..samples {
        let rows: Vec<usize> = rand::seq::index::sample(rng, m, n).iter().collect();
        let mut data = Vec::with_capacity(n * n);
        for &i in &rows {
            for j in 0..n {
                data.push(draw_point(a[(i, j)], rng));
            }
        }
        let a_sq = PointMatrix::new(n, n, data);
        let b_sq: Vec<f64> = rows.iter().map(|&i| draw_point(b[i], rng)).collect();
        let Ok(x) = a_sq.solve(&b_sq) else { continue };
        if op_membership(a, b, &x) {
            found = true;
            for j in 0..n {
                lo[j] = lo[j].min(x[j]);
                hi[j] = hi[j].max(x[j]);
            }
        }
    }
    found.then(|| (0..n).map(|j| Interval::new(lo[j], hi[j])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    #[test]
    fn membership_point_system() {
        let a = IntervalMatrix::from_rows(&[vec![Interval::point(2.0)]]);
        let b = IntervalVector::new(vec![Interval::point(4.0)]);
        assert!(op_membership(&a, &b, &[2.0]));
        assert!(!op_membership(&a, &b, &[3.0]));
    }

    #[test]
    fn membership_interval_boundary() {
        // Midpoints 2 and 4, radii 1 and 1: x qualifies iff |2x-4| <= x+1.
        let a = IntervalMatrix::from_rows(&[vec![iv(1.0, 3.0)]]);
        let b = IntervalVector::new(vec![iv(3.0, 5.0)]);
        assert!(op_membership(&a, &b, &[1.0]));
        assert!(op_membership(&a, &b, &[2.0]));
        assert!(!op_membership(&a, &b, &[0.0]));
        assert!(!op_membership(&a, &b, &[6.0]));
    }

    #[test]
    fn hull_one_dimensional() {
        // x = 2/a over a in [1,2].
        let a = IntervalMatrix::from_rows(&[vec![iv(1.0, 2.0)]]);
        let b = IntervalVector::new(vec![iv(2.0, 2.0)]);
        let r = exact_hull(&a, &b, DEFAULT_HULL_CAP).unwrap();
        assert_eq!(r.orthants_visited, 2);
        let h = r.hull.unwrap();
        assert!((h[0].lo() - 1.0).abs() < 1e-7);
        assert!((h[0].hi() - 2.0).abs() < 1e-7);
    }

    #[test]
    fn hull_point_square_system() {
        // x + y = 3, x - y = 1 -> (2, 1).
        let a = IntervalMatrix::from_rows(&[
            vec![Interval::point(1.0), Interval::point(1.0)],
            vec![Interval::point(1.0), Interval::point(-1.0)],
        ]);
        let b = IntervalVector::new(vec![Interval::point(3.0), Interval::point(1.0)]);
        let h = exact_hull(&a, &b, DEFAULT_HULL_CAP).unwrap().hull.unwrap();
        assert!((h[0].midpoint().unwrap() - 2.0).abs() < 1e-7);
        assert!((h[1].midpoint().unwrap() - 1.0).abs() < 1e-7);
        assert!(h.width_sum().unwrap() < 1e-6);
    }

    #[test]
    fn hull_detects_unsolvable() {
        // x = 0 and x = 1.
        let a = IntervalMatrix::from_rows(&[
            vec![Interval::point(1.0)],
            vec![Interval::point(1.0)],
        ]);
        let b = IntervalVector::new(vec![Interval::point(0.0), Interval::point(1.0)]);
        let r = exact_hull(&a, &b, DEFAULT_HULL_CAP).unwrap();
        assert_eq!(r.hull, None);
    }

    #[test]
    fn hull_unbounded_when_matrix_hits_zero() {
        // a*x = 1 with a in [-1,1]: solutions exist with |x| >= 1, no bound.
        let a = IntervalMatrix::from_rows(&[vec![iv(-1.0, 1.0)]]);
        let b = IntervalVector::new(vec![iv(1.0, 1.0)]);
        let h = exact_hull(&a, &b, DEFAULT_HULL_CAP).unwrap().hull.unwrap();
        assert_eq!(h[0].lo(), f64::NEG_INFINITY);
        assert_eq!(h[0].hi(), f64::INFINITY);
    }

    #[test]
    fn hull_cap() {
        let n = 11;
        let a = IntervalMatrix::new(n, n, vec![Interval::point(1.0); n * n]);
        let b = IntervalVector::filled(n, Interval::point(0.0));
        assert_eq!(
            exact_hull(&a, &b, DEFAULT_HULL_CAP),
            Err(HullError::DimensionCap { n: 11, cap: 10 })
        );
    }

    #[test]
    fn inner_hull_approaches_exact_hull() {
        let a = IntervalMatrix::from_rows(&[vec![iv(1.0, 2.0)]]);
        let b = IntervalVector::new(vec![iv(2.0, 2.0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let inner = inner_hull_sampling(&a, &b, 10_000, &mut rng).unwrap();
        assert!(inner[0].lo() >= 1.0 - 1e-12 && inner[0].hi() <= 2.0 + 1e-12);
        assert!(inner[0].width().unwrap() >= 0.9);
    }

    #[test]
    fn inner_hull_misses_empty_set() {
        let a = IntervalMatrix::from_rows(&[
            vec![Interval::point(1.0)],
            vec![Interval::point(1.0)],
        ]);
        let b = IntervalVector::new(vec![Interval::point(0.0), Interval::point(1.0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        assert_eq!(inner_hull_sampling(&a, &b, 500, &mut rng), None);
    }

    #[test]
    fn inner_within_padded_exact() {
        let a = IntervalMatrix::from_rows(&[
            vec![iv(0.9, 1.1), iv(-0.1, 0.1)],
            vec![iv(-0.1, 0.1), iv(0.9, 1.1)],
            vec![iv(0.9, 1.1), iv(0.9, 1.1)],
        ]);
        let b = IntervalVector::new(vec![iv(0.8, 1.2), iv(1.8, 2.2), iv(2.7, 3.3)]);
        let exact = exact_hull(&a, &b, DEFAULT_HULL_CAP).unwrap().hull.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let inner = inner_hull_sampling(&a, &b, 2_000, &mut rng).unwrap();
        assert!(inner.subset_of(&pad_box(&exact, 1e-7)));
    }

    #[test]
    fn padding_grows_box() {
        let v = IntervalVector::new(vec![iv(0.0, 1.0)]);
        let p = pad_box(&v, 1e-7);
        assert!(v.subset_of(&p));
        assert!((p[0].width().unwrap() - (1.0 + 2e-7)).abs() < 1e-12);
    }
}
