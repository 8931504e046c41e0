use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair::{all_pairs, pair_count, PairIndex};
use crate::rational::{format_rational, Rational};

/// Which realization question an interval family poses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Positive-weighted graph, closed intervals.
    GraphClosed,
    /// Tree with arbitrary real weights, open intervals.
    TreeGeneralOpen,
    /// Tree with arbitrary real weights, closed intervals.
    TreeGeneralClosed,
    /// Positive-weighted tree, open intervals.
    TreePositiveOpen,
    /// Star with arbitrary pendant weights, open intervals.
    StarOpen,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::GraphClosed,
        Variant::TreeGeneralOpen,
        Variant::TreeGeneralClosed,
        Variant::TreePositiveOpen,
        Variant::StarOpen,
    ];

    pub fn is_open(self) -> bool {
        matches!(self, Variant::TreeGeneralOpen | Variant::TreePositiveOpen | Variant::StarOpen)
    }

    /// Variants whose witnesses must have strictly positive weights and
    /// whose bounds must be positive.
    pub fn is_positive(self) -> bool {
        matches!(self, Variant::GraphClosed | Variant::TreePositiveOpen)
    }

    pub fn is_tree(self) -> bool {
        matches!(self, Variant::TreeGeneralOpen | Variant::TreeGeneralClosed | Variant::TreePositiveOpen)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::GraphClosed => "graph-closed",
            Variant::TreeGeneralOpen => "tree-general-open",
            Variant::TreeGeneralClosed => "tree-general-closed",
            Variant::TreePositiveOpen => "tree-positive-open",
            Variant::StarOpen => "star-open",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| Error::Parse(format!("unknown variant {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, value: &Rational, open: bool) -> bool {
        if open {
            &self.lo < value && value < &self.hi
        } else {
            &self.lo <= value && value <= &self.hi
        }
    }
}

/// Lower and upper bounds on every pairwise distance of `n` labeled points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalFamily {
    n: usize,
    variant: Variant,
    bounds: Vec<Interval>,
}

impl IntervalFamily {
    /// `bounds` is indexed by [`PairIndex::rank`].
    pub fn new(n: usize, variant: Variant, bounds: Vec<Interval>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Family(format!("need at least 2 points, got {n}")));
        }
        if bounds.len() != pair_count(n) {
            return Err(Error::Family(format!(
                "expected {} intervals for n = {n}, got {}",
                pair_count(n),
                bounds.len()
            )));
        }
        for (pair, iv) in all_pairs(n).zip(&bounds) {
            let describe = || format!("pair {pair}: [{}, {}]", format_rational(&iv.lo), format_rational(&iv.hi));
            if iv.lo > iv.hi {
                return Err(Error::Family(format!("{} has lo > hi", describe())));
            }
            if variant.is_open() && iv.lo == iv.hi {
                return Err(Error::Family(format!(
                    "{} is empty as an open interval ({variant} needs lo < hi)",
                    describe()
                )));
            }
            if variant.is_positive() && !(iv.lo.is_positive() && iv.hi.is_positive()) {
                return Err(Error::Family(format!("{} must be positive for {variant}", describe())));
            }
        }
        Ok(Self { n, variant, bounds })
    }

    pub fn from_fn(n: usize, variant: Variant, mut f: impl FnMut(PairIndex) -> (Rational, Rational)) -> Result<Self> {
        let bounds = all_pairs(n)
            .map(|p| {
                let (lo, hi) = f(p);
                Interval::new(lo, hi)
            })
            .collect();
        Self::new(n, variant, bounds)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn interval(&self, pair: PairIndex) -> &Interval {
        &self.bounds[pair.rank(self.n)]
    }

    pub fn lo(&self, pair: PairIndex) -> &Rational {
        &self.interval(pair).lo
    }

    pub fn hi(&self, pair: PairIndex) -> &Rational {
        &self.interval(pair).hi
    }

    pub fn intervals(&self) -> impl Iterator<Item = (PairIndex, &Interval)> {
        all_pairs(self.n).zip(&self.bounds)
    }

    /// Same bounds, different question.
    pub fn with_variant(&self, variant: Variant) -> Result<Self> {
        Self::new(self.n, variant, self.bounds.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("tree".parse::<Variant>().is_err());
    }

    #[test]
    fn open_variants_reject_point_intervals() {
        let err = IntervalFamily::from_fn(2, Variant::TreeGeneralOpen, |_| (int(1), int(1)));
        assert!(err.is_err());
        assert!(IntervalFamily::from_fn(2, Variant::TreeGeneralClosed, |_| (int(1), int(1))).is_ok());
    }

    #[test]
    fn positive_variants_reject_nonpositive_bounds() {
        assert!(IntervalFamily::from_fn(3, Variant::GraphClosed, |_| (int(0), int(1))).is_err());
        assert!(IntervalFamily::from_fn(3, Variant::TreeGeneralOpen, |_| (int(-2), int(1))).is_ok());
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert!(IntervalFamily::from_fn(3, Variant::GraphClosed, |_| (int(3), int(2))).is_err());
    }
}
