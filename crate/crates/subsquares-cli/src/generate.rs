//! Random interval systems built around a point system with a known
//! solution.
//!
//! The recipe: draw a point matrix A' and a point solution x* uniformly
//! entrywise from [−20, 20], take b' = A'x*, then widen every coefficient to
//! an interval of width 2·radius whose center is offset from the coefficient
//! by a kind-dependent amount. The right-hand side intervals are built from
//! an interval evaluation of A'x*, so for the solvable kinds the *exact*
//! real product lies inside b and x* provably belongs to the united solution
//! set — even at radius 0, where float evaluation of b' alone would break
//! that guarantee. The `Unsolvable` kind discards the planted relation and
//! draws the right-hand side independently.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subsquares::interval::Interval;
use subsquares::linalg::{IntervalMatrix, IntervalVector};

/// Where interval coefficients sit relative to the generating point system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Coefficient offset uniform in [−radius, +radius]: each point
    /// coefficient lands at a random position inside its interval, so the
    /// planted solution is guaranteed to stay in the solution set.
    Shifted,
    /// No offset: intervals are centered on the point coefficients, keeping
    /// the midpoint system (essentially) the solvable point system.
    Centered,
    /// A as in `Shifted`, but each right-hand side is knocked off the
    /// consistent value A'x* by a uniform offset of fixed scale
    /// (radius-independent). The overdetermined system then has no solution
    /// unless the interval slack — which grows like n·radius — absorbs the
    /// offsets, so small-radius systems are unsolvable in practice and
    /// detection gets harder as n·radius approaches the offset scale.
    Unsolvable,
}

impl GeneratorKind {
    fn offset_scale(self) -> f64 {
        match self {
            GeneratorKind::Shifted | GeneratorKind::Unsolvable => 1.0,
            GeneratorKind::Centered => 0.0,
        }
    }
}

pub struct GeneratedSystem {
    pub a: IntervalMatrix,
    pub b: IntervalVector,
    /// Solution of the generating point system. Guaranteed to lie in the
    /// united solution set for `Shifted` and `Centered`; usually not for
    /// `Unsolvable`.
    pub x_star: Vec<f64>,
    pub a_point: Vec<Vec<f64>>,
    /// Point right-hand side: the float evaluation of A'x* for the solvable
    /// kinds (reporting only — the b intervals come from an interval
    /// evaluation), or the independent draws for `Unsolvable`.
    pub b_point: Vec<f64>,
}

const COEFF_RANGE: f64 = 20.0;
/// Per-unknown scale of the right-hand-side offsets in the unsolvable kind.
/// The slack an interval system offers a candidate solution grows with
/// n·radius, so the offsets grow with n too; this keeps detection feasible
/// across sizes instead of hitting a sharp frontier.
pub const RHS_OFFSET_PER_UNKNOWN: f64 = 1.25;

pub fn generate<R: Rng + ?Sized>(
    kind: GeneratorKind,
    m: usize,
    n: usize,
    radius: f64,
    rng: &mut R,
) -> GeneratedSystem {
    assert!(m >= n && n >= 1, "need m >= n >= 1, got {m}x{n}");
    assert!(radius >= 0.0 && radius.is_finite());
    let scale = kind.offset_scale();
    // All kinds consume the randomness stream identically (the offset draw
    // is scaled, never skipped), so one seed yields the same A' and x*
    // across kinds — paired comparisons rely on this.
    let x_star: Vec<f64> = (0..n).map(|_| rng.random_range(-COEFF_RANGE..COEFF_RANGE)).collect();

    let widen = |center: Interval, offset: f64| -> Interval {
        if radius == 0.0 && offset == 0.0 {
            center
        } else {
            center + Interval::point(offset) + Interval::new(-radius, radius)
        }
    };

    let mut a_rows = Vec::with_capacity(m);
    let mut a_point = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    let mut b_point = Vec::with_capacity(m);
    for _ in 0..m {
        let mut row = Vec::with_capacity(n);
        let mut row_pt = Vec::with_capacity(n);
        for _ in 0..n {
            let c = rng.random_range(-COEFF_RANGE..COEFF_RANGE);
            let u = rng.random_range(-1.0..=1.0) * scale * radius;
            row_pt.push(c);
            row.push(widen(Interval::point(c), u));
        }
        // Enclosure of the exact real product A'_i · x*.
        let mut prod = Interval::point(0.0);
        for (c, x) in row_pt.iter().zip(&x_star) {
            prod = prod + Interval::point(*c) * Interval::point(*x);
        }
        // Drawn by every kind (keeps the streams aligned for paired seeds),
        // applied only by `Unsolvable`.
        let eta = rng.random_range(-1.0..=1.0) * RHS_OFFSET_PER_UNKNOWN * n as f64;
        let u = rng.random_range(-1.0..=1.0) * scale * radius;
        let fl: f64 = row_pt.iter().zip(&x_star).map(|(c, x)| c * x).sum();
        if kind == GeneratorKind::Unsolvable {
            b.push(widen(prod + Interval::point(eta), u));
            b_point.push(fl + eta);
        } else {
            b.push(widen(prod, u));
            b_point.push(fl);
        }
        a_rows.push(row);
        a_point.push(row_pt);
    }
    GeneratedSystem {
        a: IntervalMatrix::from_rows(&a_rows),
        b: IntervalVector::new(b),
        x_star,
        a_point,
        b_point,
    }
}

/// Splitmix64 step: turns (master seed, stream index) into an independent
/// child seed, so trials can be regenerated individually.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_rng(master: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream))
}
