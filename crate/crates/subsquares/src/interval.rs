//! Closed intervals with outward-rounded f64 endpoint arithmetic.
//!
//! Every arithmetic operation returns an interval guaranteed to contain the
//! exact real result set. Endpoints are computed in the default
//! round-to-nearest mode and then stepped one float outward (`next_down` for
//! lower bounds, `next_up` for upper bounds), so no rounding-mode switching
//! is needed and containment holds on any IEEE 754 platform.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// Errors raised by interval queries and checked arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    /// An operand was the empty interval.
    #[error("operand is the empty interval")]
    EmptyOperand,
    /// A bound was infinite where a finite value is required.
    #[error("interval bound is infinite")]
    InfiniteBound,
    /// The divisor interval contains zero.
    #[error("divisor interval contains zero")]
    DivisionByZero,
}

/// A closed real interval `[lo, hi]`, possibly empty.
///
/// The empty interval is a distinguished value (`Interval::EMPTY`), stored as
/// NaN bounds so it can never be mistaken for `[0, 0]`. Non-empty intervals
/// satisfy `lo <= hi`; bounds may be infinite (used for initial boxes), but
/// `[+inf, +inf]` and `[-inf, -inf]` are rejected since they contain no real.
#[derive(Clone, Copy)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// One outward step: largest float strictly below `x` (identity on -inf).
#[inline]
fn step_down(x: f64) -> f64 {
    x.next_down()
}

/// One outward step: smallest float strictly above `x` (identity on +inf).
#[inline]
fn step_up(x: f64) -> f64 {
    x.next_up()
}

/// Product candidate for endpoint selection.
///
/// `exact` marks products that are exactly zero because an operand is zero;
/// those endpoints need no outward step. The zero rule also gives the correct
/// set value for `0 * inf` (the product set of `{0}` with anything is `{0}`),
/// which would otherwise surface as NaN.
#[inline]
fn mul_candidate(a: f64, b: f64) -> (f64, bool) {
    if a == 0.0 || b == 0.0 {
        (0.0, true)
    } else {
        (a * b, false)
    }
}

impl Interval {
    /// The empty interval.
    pub const EMPTY: Interval = Interval {
        lo: f64::NAN,
        hi: f64::NAN,
    };

    /// The whole real line `[-inf, +inf]`.
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Creates `[lo, hi]`.
    ///
    /// Panics if the bounds are NaN, out of order, or describe an interval
    /// containing no real number.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(
            !lo.is_nan() && !hi.is_nan() && lo <= hi,
            "invalid interval bounds [{lo}, {hi}]"
        );
        assert!(
            lo < f64::INFINITY && hi > f64::NEG_INFINITY,
            "interval [{lo}, {hi}] contains no real number"
        );
        Interval { lo, hi }
    }

    /// The degenerate interval `[v, v]`.
    pub fn point(v: f64) -> Self {
        Self::new(v, v)
    }

    /// Rebuilds an interval from endpoints known to come from a valid one
    /// (round-tripping through the lock-free bit packing).
    #[cfg(feature = "std")]
    pub(crate) const fn from_raw(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lo.is_nan()
    }

    /// Lower bound; NaN for the empty interval.
    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Upper bound; NaN for the empty interval.
    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// `(lo, hi)` for non-empty intervals.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        if self.is_empty() {
            None
        } else {
            Some((self.lo, self.hi))
        }
    }

    /// Non-empty with finite bounds.
    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        !self.is_empty() && self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// Set inclusion; the empty interval is a subset of everything.
    pub fn subset_of(&self, other: &Interval) -> bool {
        self.is_empty() || (!other.is_empty() && other.lo <= self.lo && self.hi <= other.hi)
    }

    /// `(lo + hi) / 2`, evaluated as `0.5*lo + 0.5*hi` to avoid overflow.
    pub fn midpoint(&self) -> Result<f64, IntervalError> {
        let (lo, hi) = self.finite_bounds()?;
        Ok(0.5 * lo + 0.5 * hi)
    }

    /// `hi - lo`.
    pub fn width(&self) -> Result<f64, IntervalError> {
        let (lo, hi) = self.finite_bounds()?;
        Ok(hi - lo)
    }

    /// Half the width.
    pub fn radius(&self) -> Result<f64, IntervalError> {
        self.width().map(|w| 0.5 * w)
    }

    /// Magnitude `max(|lo|, |hi|)`; NaN for the empty interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    fn finite_bounds(&self) -> Result<(f64, f64), IntervalError> {
        match self.bounds() {
            None => Err(IntervalError::EmptyOperand),
            Some((lo, hi)) if lo.is_infinite() || hi.is_infinite() => {
                Err(IntervalError::InfiniteBound)
            }
            Some(b) => Ok(b),
        }
    }

    /// Exact set intersection (no rounding is involved).
    pub fn intersect(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Interval::EMPTY;
        }
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Interval { lo, hi }
        } else {
            Interval::EMPTY
        }
    }

    /// Smallest interval containing both operands (exact).
    pub fn hull(&self, other: &Interval) -> Interval {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => Interval::EMPTY,
            (true, false) => *other,
            (false, true) => *self,
            (false, false) => Interval {
                lo: self.lo.min(other.lo),
                hi: self.hi.max(other.hi),
            },
        }
    }

    /// Widens about the midpoint so the width scales by `factor >= 1`.
    ///
    /// The result is outward-rounded and always contains `self`.
    pub fn inflated(&self, factor: f64) -> Interval {
        assert!(factor >= 1.0, "inflation factor must be >= 1");
        if self.is_empty() || !self.is_finite() {
            return *self;
        }
        let mid = 0.5 * self.lo + 0.5 * self.hi;
        let r = 0.5 * (self.hi - self.lo) * factor;
        Interval {
            lo: step_down(mid - r),
            hi: step_up(mid + r),
        }
        .hull(self)
    }

    /// Interval division with explicit error reporting.
    ///
    /// Requires a divisor that excludes zero; extended division is out of
    /// scope for this crate.
    pub fn checked_div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if self.is_empty() || rhs.is_empty() {
            return Err(IntervalError::EmptyOperand);
        }
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let mut lo = (f64::INFINITY, false);
        let mut hi = (f64::NEG_INFINITY, false);
        for a in [self.lo, self.hi] {
            for b in [rhs.lo, rhs.hi] {
                let c = if a == 0.0 { (0.0, true) } else { (a / b, false) };
                if c.0 < lo.0 {
                    lo = c;
                }
                if c.0 > hi.0 {
                    hi = c;
                }
            }
        }
        Ok(Interval {
            lo: if lo.1 { lo.0 } else { step_down(lo.0) },
            hi: if hi.1 { hi.0 } else { step_up(hi.0) },
        })
    }
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => true,
            (false, false) => self.lo == other.lo && self.hi == other.hi,
            _ => false,
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[empty]")
        } else {
            write!(f, "[{:?}, {:?}]", self.lo, self.hi)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[empty]")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

// Empty operands absorb: the image of the empty set under any map is empty.
impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval {
            lo: step_down(self.lo + rhs.lo),
            hi: step_up(self.hi + rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval {
            lo: step_down(self.lo - rhs.hi),
            hi: step_up(self.hi - rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        if self.is_empty() {
            return Interval::EMPTY;
        }
        // Negation is exact in IEEE arithmetic; no outward step.
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        let mut lo = (f64::INFINITY, false);
        let mut hi = (f64::NEG_INFINITY, false);
        for a in [self.lo, self.hi] {
            for b in [rhs.lo, rhs.hi] {
                let c = mul_candidate(a, b);
                if c.0 < lo.0 {
                    lo = c;
                }
                if c.0 > hi.0 {
                    hi = c;
                }
            }
        }
        Interval {
            lo: if lo.1 { lo.0 } else { step_down(lo.0) },
            hi: if hi.1 { hi.0 } else { step_up(hi.0) },
        }
    }
}
