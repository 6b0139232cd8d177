//! Choosing square subsystems: which `n`-row subsets of a tall system the
//! solvers iterate over.

use alloc::vec::Vec;

use rand::Rng;

/// Selection parameter errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SelectionError {
    /// `overlap` must leave at least one fresh row per subsystem.
    #[error("overlap {overlap} must be smaller than the subsystem size {n}")]
    InvalidOverlap { overlap: usize, n: usize },
}

/// An ordered list of row-index sets, each of size `n`, jointly covering all
/// `m` rows. Sets are sorted ascending and contain no repeated index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsquareSelection {
    pub sets: Vec<Vec<usize>>,
    pub overlap: usize,
}

impl SubsquareSelection {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Default overlap: a third of the subsystem size, at least 1, and always
/// small enough to leave a fresh row (`n = 1` forces 0).
pub fn default_overlap(n: usize) -> usize {
    assert!(n >= 1);
    (n / 3).max(1).min(n - 1)
}

/// Number of subsystems the covering scheme produces:
/// `1 + ceil((m - n) / (n - overlap))`, and exactly 1 when `m = n`.
pub fn count_subsquares(m: usize, n: usize, overlap: usize) -> Result<usize, SelectionError> {
    assert!(m >= n && n >= 1, "need m >= n >= 1, got {m}x{n}");
    if overlap >= n {
        return Err(SelectionError::InvalidOverlap { overlap, n });
    }
    Ok(1 + (m - n).div_ceil(n - overlap))
}

/// `k` distinct elements of `list`, in selection order.
fn randsel<R: Rng + ?Sized>(k: usize, list: &[usize], rng: &mut R) -> Vec<usize> {
    rand::seq::index::sample(rng, list.len(), k)
        .iter()
        .map(|i| list[i])
        .collect()
}

/// Covers the row set `{0..m}` with square subsystems.
///
/// The first set is drawn entirely at random; each further set reuses
/// `overlap` already-covered rows plus `n - overlap` fresh ones; the final
/// set takes every remaining fresh row and pads *from the covered rows* up
/// to size `n` (padding from the fresh rows would repeat indices within the
/// set). The number of sets always equals [`count_subsquares`].
pub fn choose_subsquares<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    overlap: usize,
    rng: &mut R,
) -> Result<SubsquareSelection, SelectionError> {
    let expected = count_subsquares(m, n, overlap)?;
    // Both worklists stay sorted so runs are reproducible from the seed alone.
    let mut covered: Vec<usize> = Vec::with_capacity(m);
    let mut waiting: Vec<usize> = (0..m).collect();
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(expected);
    while !waiting.is_empty() {
        let mut indices = if covered.is_empty() {
            randsel(n, &waiting, rng)
        } else if waiting.len() <= n - overlap {
            let mut last = waiting.clone();
            last.extend(randsel(n - last.len(), &covered, rng));
            last
        } else {
            let mut mid = randsel(overlap, &covered, rng);
            mid.extend(randsel(n - overlap, &waiting, rng));
            mid
        };
        indices.sort_unstable();
        for &i in &indices {
            if let Ok(pos) = waiting.binary_search(&i) {
                waiting.remove(pos);
            }
            if let Err(pos) = covered.binary_search(&i) {
                covered.insert(pos, i);
            }
        }
        sets.push(indices);
    }
    debug_assert_eq!(sets.len(), expected);
    Ok(SubsquareSelection { sets, overlap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_invariants(sel: &SubsquareSelection, m: usize, n: usize) {
        let mut seen = alloc::vec![false; m];
        for set in &sel.sets {
            assert_eq!(set.len(), n);
            assert!(set.windows(2).all(|w| w[0] < w[1]), "unsorted or repeated");
            for &i in set {
                assert!(i < m);
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "rows left uncovered");
    }

    #[test]
    fn count_formula() {
        assert_eq!(count_subsquares(15, 10, 3), Ok(2));
        assert_eq!(count_subsquares(25, 13, 5), Ok(3));
        assert_eq!(count_subsquares(7, 7, 0), Ok(1));
        assert_eq!(count_subsquares(7, 7, 3), Ok(1));
        assert_eq!(
            count_subsquares(10, 4, 4),
            Err(SelectionError::InvalidOverlap { overlap: 4, n: 4 })
        );
    }

    #[test]
    fn square_shape_selects_all_rows_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sel = choose_subsquares(5, 5, 0, &mut rng).unwrap();
        assert_eq!(sel.sets, alloc::vec![alloc::vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn three_rows_two_unknowns() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sel = choose_subsquares(3, 2, 1, &mut rng).unwrap();
        assert_eq!(sel.len(), 2);
        check_invariants(&sel, 3, 2);
    }

    #[test]
    fn fifteen_by_ten_needs_two_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let sel = choose_subsquares(15, 10, 3, &mut rng).unwrap();
        assert_eq!(sel.len(), 2);
        check_invariants(&sel, 15, 10);
    }

    #[test]
    fn count_matches_selection_length_across_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for m in 1..=20 {
            for n in 1..=m {
                for overlap in 0..n {
                    let sel = choose_subsquares(m, n, overlap, &mut rng).unwrap();
                    assert_eq!(sel.len(), count_subsquares(m, n, overlap).unwrap());
                    check_invariants(&sel, m, n);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_selection() {
        let a = choose_subsquares(20, 7, 2, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = choose_subsquares(20, 7, 2, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn default_overlap_bounds() {
        assert_eq!(default_overlap(1), 0);
        assert_eq!(default_overlap(2), 1);
        assert_eq!(default_overlap(3), 1);
        assert_eq!(default_overlap(10), 3);
        assert_eq!(default_overlap(23), 7);
    }
}
