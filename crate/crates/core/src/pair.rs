use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered pair of distinct leaf labels `{i, j}`, stored with `i < j`.
/// Labels are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairIndex {
    i: usize,
    j: usize,
}

impl PairIndex {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::Structure(format!("pair {{{a},{b}}} repeats a label")));
        }
        if a == 0 || b == 0 {
            return Err(Error::Structure("labels are 1-based".into()));
        }
        Ok(Self::of(a, b))
    }

    /// Unchecked constructor for internal use; panics on `a == b`.
    pub fn of(a: usize, b: usize) -> Self {
        assert!(a != b && a > 0 && b > 0, "invalid pair {{{a},{b}}}");
        Self { i: a.min(b), j: a.max(b) }
    }

    pub fn i(self) -> usize {
        self.i
    }

    pub fn j(self) -> usize {
        self.j
    }

    /// Position of this pair in the lexicographic order of all pairs over `[n]`.
    pub fn rank(self, n: usize) -> usize {
        let (i, j) = (self.i - 1, self.j - 1);
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    pub fn contains(self, label: usize) -> bool {
        self.i == label || self.j == label
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.i, self.j)
    }
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All pairs over `[n]` in lexicographic order (the order of [`PairIndex::rank`]).
pub fn all_pairs(n: usize) -> impl Iterator<Item = PairIndex> {
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| PairIndex { i, j }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_matches_enumeration_order() {
        for n in 2..9 {
            for (k, p) in all_pairs(n).enumerate() {
                assert_eq!(p.rank(n), k);
            }
            assert_eq!(all_pairs(n).count(), pair_count(n));
        }
    }

    #[test]
    fn pair_is_unordered() {
        assert_eq!(PairIndex::of(3, 1), PairIndex::of(1, 3));
        assert!(PairIndex::new(2, 2).is_err());
    }
}
