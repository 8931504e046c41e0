use crate::error::{Error, Result};
use crate::pair::{all_pairs, pair_count, PairIndex};
use crate::rational::Rational;

/// A value for every pair of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DissimilarityVector {
    n: usize,
    values: Vec<Rational>,
}

impl DissimilarityVector {
    /// `values` is indexed by [`PairIndex::rank`].
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        if values.len() != pair_count(n) {
            return Err(Error::Structure(format!(
                "dissimilarity over n = {n} needs {} values, got {}",
                pair_count(n),
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(PairIndex) -> Rational) -> Self {
        Self { n, values: all_pairs(n).map(f).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, pair: PairIndex) -> &Rational {
        &self.values[pair.rank(self.n)]
    }

    /// Convenience accessor by labels, in either order.
    pub fn at(&self, a: usize, b: usize) -> &Rational {
        self.get(PairIndex::of(a, b))
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (PairIndex, &Rational)> {
        all_pairs(self.n).zip(&self.values)
    }

    /// The three pair-sums of a quartet, ordered as
    /// `(ab + cd, ac + bd, ad + bc)`.
    pub fn quartet_sums(&self, [a, b, c, d]: [usize; 4]) -> [Rational; 3] {
        [self.at(a, b) + self.at(c, d), self.at(a, c) + self.at(b, d), self.at(a, d) + self.at(b, c)]
    }

    /// At least two of the three pair-sums agree in every quartet.
    pub fn four_point_violation(&self) -> Option<[usize; 4]> {
        crate::splits::quartets(self.n).find(|&q| {
            let [x, y, z] = self.quartet_sums(q);
            x != y && y != z && x != z
        })
    }

    /// The maximum pair-sum is attained at least twice in every quartet.
    pub fn buneman_violation(&self) -> Option<[usize; 4]> {
        crate::splits::quartets(self.n).find(|&q| {
            let sums = self.quartet_sums(q);
            let max = sums.iter().max().expect("three sums");
            sums.iter().filter(|s| *s == max).count() < 2
        })
    }

    /// Some `D_ij > D_ik + D_kj`.
    pub fn triangle_violation(&self) -> Option<(PairIndex, usize)> {
        for p in all_pairs(self.n) {
            for k in 1..=self.n {
                if !p.contains(k) && self.get(p) > &(self.at(p.i(), k) + self.at(k, p.j())) {
                    return Some((p, k));
                }
            }
        }
        None
    }
}
