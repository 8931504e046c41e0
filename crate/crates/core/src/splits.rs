//! Quartet split systems: the fat / transitive / saturated predicates, the
//! system induced by a tree, and candidate enumeration.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{all_topologies, Topology};
use crate::weighted::WeightedTree;

/// Sorted 4-subsets of `[n]` in lexicographic order.
pub fn quartets(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (1..=n).flat_map(move |a| {
        (a + 1..=n).flat_map(move |b| (b + 1..=n).flat_map(move |c| (c + 1..=n).map(move |d| [a, b, c, d])))
    })
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Colex rank of a sorted quartet.
fn quartet_rank(q: [usize; 4]) -> usize {
    binom(q[0] - 1, 1) + binom(q[1] - 1, 2) + binom(q[2] - 1, 3) + binom(q[3] - 1, 4)
}

fn sorted4(mut q: [usize; 4]) -> [usize; 4] {
    q.sort_unstable();
    q
}

/// A split `(a, b | c, d)` of a quartet. Stored as the sorted quartet plus
/// the index of the partner of its smallest element (0, 1, 2 for the
/// second, third, fourth element).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuartetSplit {
    quartet: [usize; 4],
    index: u8,
}

impl QuartetSplit {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Result<Self> {
        let quartet = sorted4([a, b, c, d]);
        if quartet[0] == 0 || quartet.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure(format!("({a},{b}|{c},{d}) is not a split of four distinct labels")));
        }
        Ok(Self::of(a, b, c, d))
    }

    /// Unchecked constructor; labels must be distinct and positive.
    pub fn of(a: usize, b: usize, c: usize, d: usize) -> Self {
        let quartet = sorted4([a, b, c, d]);
        let low = quartet[0];
        let partner = if low == a {
            b
        } else if low == b {
            a
        } else if low == c {
            d
        } else {
            c
        };
        let index = quartet.iter().position(|&x| x == partner).expect("partner in quartet") - 1;
        Self { quartet, index: index as u8 }
    }

    fn from_index(quartet: [usize; 4], index: u8) -> Self {
        Self { quartet, index }
    }

    pub fn quartet(&self) -> [usize; 4] {
        self.quartet
    }

    /// `([a, b], [c, d])` with `a < b`, `c < d` and `a < c`.
    pub fn pairs(&self) -> ([usize; 2], [usize; 2]) {
        let q = self.quartet;
        let k = self.index as usize + 1;
        let rest: Vec<usize> = (1..4).filter(|&x| x != k).map(|x| q[x]).collect();
        ([q[0], q[k]], [rest[0], rest[1]])
    }

    pub fn all_of(quartet: [usize; 4]) -> [QuartetSplit; 3] {
        let q = sorted4(quartet);
        [0, 1, 2].map(|i| Self::from_index(q, i))
    }
}

impl fmt::Display for QuartetSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ([a, b], [c, d]) = self.pairs();
        write!(f, "({a},{b}|{c},{d})")
    }
}

impl Serialize for QuartetSplit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ([a, b], [c, d]) = self.pairs();
        s.serialize_str(&format!("{a},{b}|{c},{d}"))
    }
}

impl<'de> Deserialize<'de> for QuartetSplit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let bad = || serde::de::Error::custom(format!("{text:?} is not a split \"a,b|c,d\""));
        let (left, right) = text.split_once('|').ok_or_else(bad)?;
        let parse = |s: &str| -> Option<[usize; 2]> {
            let (x, y) = s.split_once(',')?;
            Some([x.trim().parse().ok()?, y.trim().parse().ok()?])
        };
        let ([a, b], [c, d]) = (parse(left).ok_or_else(bad)?, parse(right).ok_or_else(bad)?);
        QuartetSplit::new(a, b, c, d).map_err(serde::de::Error::custom)
    }
}

/// Why a split system fails one of the predicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitViolation {
    /// The quartet carries neither exactly one nor all three of its splits.
    NotFat { quartet: [usize; 4], present: usize },
    /// `first` and `second` are present but `missing` is not.
    NotTransitive { first: QuartetSplit, second: QuartetSplit, missing: QuartetSplit },
    /// Neither replacement of `split` by `x` is present.
    NotSaturated { split: QuartetSplit, x: usize },
}

impl fmt::Display for SplitViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitViolation::NotFat { quartet, present } => {
                write!(f, "quartet {quartet:?} carries {present} of its 3 splits")
            }
            SplitViolation::NotTransitive { first, second, missing } => {
                write!(f, "{first} and {second} present but {missing} missing")
            }
            SplitViolation::NotSaturated { split, x } => {
                write!(f, "{split} has no replacement by {x}")
            }
        }
    }
}

/// A set of quartet splits over `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitSystem {
    n: usize,
    // bit k of masks[colex rank] = split with index k present
    masks: Vec<u8>,
}

impl SplitSystem {
    pub fn empty(n: usize) -> Self {
        Self { n, masks: vec![0; binom(n, 4)] }
    }

    pub fn from_splits(n: usize, splits: impl IntoIterator<Item = QuartetSplit>) -> Result<Self> {
        let mut s = Self::empty(n);
        for split in splits {
            if split.quartet[3] > n {
                return Err(Error::Structure(format!("split {split} uses a label outside 1..={n}")));
            }
            s.insert(split);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, split: QuartetSplit) {
        self.masks[quartet_rank(split.quartet)] |= 1 << split.index;
    }

    pub fn contains(&self, split: QuartetSplit) -> bool {
        self.masks[quartet_rank(split.quartet)] & (1 << split.index) != 0
    }

    /// Is `(a, b | c, d)` a member.
    pub fn has(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        self.contains(QuartetSplit::of(a, b, c, d))
    }

    /// Splits of `quartet` present in the system.
    pub fn splits_of(&self, quartet: [usize; 4]) -> Vec<QuartetSplit> {
        let q = sorted4(quartet);
        let mask = self.masks[quartet_rank(q)];
        (0..3u8).filter(|i| mask & (1 << i) != 0).map(|i| QuartetSplit::from_index(q, i)).collect()
    }

    fn mask_of(&self, q: [usize; 4]) -> u8 {
        self.masks[quartet_rank(q)]
    }

    fn set_mask(&mut self, q: [usize; 4], mask: u8) {
        self.masks[quartet_rank(q)] = mask;
    }

    /// Members in quartet order.
    pub fn members(&self) -> Vec<QuartetSplit> {
        quartets(self.n).flat_map(|q| self.splits_of(q)).collect()
    }

    pub fn len(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// If a quartet carries exactly one split, that split.
    pub fn unique_split(&self, quartet: [usize; 4]) -> Option<QuartetSplit> {
        let s = self.splits_of(quartet);
        (s.len() == 1).then(|| s[0])
    }

    pub fn check_fat(&self) -> Result<(), SplitViolation> {
        for q in quartets(self.n) {
            let present = self.mask_of(q).count_ones() as usize;
            if present != 1 && present != 3 {
                return Err(SplitViolation::NotFat { quartet: q, present });
            }
        }
        Ok(())
    }

    pub fn check_transitive(&self) -> Result<(), SplitViolation> {
        for five in fives(self.n) {
            self.check_transitive_in(five)?;
        }
        Ok(())
    }

    pub fn check_saturated(&self) -> Result<(), SplitViolation> {
        for five in fives(self.n) {
            self.check_saturated_in(five)?;
        }
        Ok(())
    }

    pub fn is_fat(&self) -> bool {
        self.check_fat().is_ok()
    }

    pub fn is_transitive(&self) -> bool {
        self.check_transitive().is_ok()
    }

    pub fn is_saturated(&self) -> bool {
        self.check_saturated().is_ok()
    }

    /// All three predicates, reporting the first that fails.
    pub fn check_all(&self) -> Result<()> {
        let wrap = |predicate| move |violation| Error::SplitPredicate { predicate, violation: Box::new(violation) };
        self.check_fat().map_err(wrap("fat"))?;
        self.check_transitive().map_err(wrap("transitive"))?;
        self.check_saturated().map_err(wrap("saturated"))?;
        Ok(())
    }

    // Both transitivity and saturation only relate splits inside one
    // 5-subset, so they are checked 5-subset by 5-subset.
    fn check_transitive_in(&self, five: [usize; 5]) -> Result<(), SplitViolation> {
        for x in 0..5 {
            for y in x + 1..5 {
                let (a, b) = (five[x], five[y]);
                let rest: Vec<usize> = (0..5).filter(|&k| k != x && k != y).map(|k| five[k]).collect();
                for ci in 0..3 {
                    let c = rest[ci];
                    let (d, e) = (rest[(ci + 1) % 3], rest[(ci + 2) % 3]);
                    if self.has(a, b, c, d) && self.has(a, b, c, e) && !self.has(a, b, d, e) {
                        return Err(SplitViolation::NotTransitive {
                            first: QuartetSplit::of(a, b, c, d),
                            second: QuartetSplit::of(a, b, c, e),
                            missing: QuartetSplit::of(a, b, d, e),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_saturated_in(&self, five: [usize; 5]) -> Result<(), SplitViolation> {
        for skip in 0..5 {
            let x = five[skip];
            let q: Vec<usize> = (0..5).filter(|&k| k != skip).map(|k| five[k]).collect();
            for split in self.splits_of([q[0], q[1], q[2], q[3]]) {
                let (p, r) = split.pairs();
                // every reading (a1, a2 | b1, b2) of the unordered split
                for (side_a, side_b) in [(p, r), (r, p)] {
                    for ai in 0..2 {
                        for bi in 0..2 {
                            let (a1, a2) = (side_a[ai], side_a[1 - ai]);
                            let (b1, b2) = (side_b[bi], side_b[1 - bi]);
                            if !self.has(a1, x, b1, b2) && !self.has(a1, a2, b1, x) {
                                return Err(SplitViolation::NotSaturated { split, x });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn fives(n: usize) -> impl Iterator<Item = [usize; 5]> {
    quartets(n).flat_map(move |[a, b, c, d]| (d + 1..=n).map(move |e| [a, b, c, d, e]))
}

/// Leaf-path vertex sets, indexed by label pair.
fn leaf_paths(tree: &WeightedTree) -> Vec<Vec<FixedBitSet>> {
    let adj = tree.adjacency();
    let n = tree.n();
    let v = tree.vertex_count();
    let mut paths = vec![vec![FixedBitSet::with_capacity(v); n + 1]; n + 1];
    for a in 1..=n {
        let root = tree.leaf_vertex(a);
        let mut parent = vec![usize::MAX; v];
        let mut seen = vec![false; v];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(x) = stack.pop() {
            for &(y, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        for b in 1..=n {
            let mut set = FixedBitSet::with_capacity(v);
            let mut x = tree.leaf_vertex(b);
            set.insert(x);
            while x != root {
                x = parent[x];
                set.insert(x);
            }
            paths[a][b] = set;
        }
    }
    paths
}

/// `(a, b | c, d)` is induced iff `a, b` and `c, d` are neighbours in the
/// restriction of the tree to the quartet: the a-b and c-d paths are
/// disjoint, or the restriction is a star (no two paths disjoint) and all
/// three splits are induced. Depends on topology only.
pub fn tree_induced_splits(tree: &WeightedTree) -> SplitSystem {
    let n = tree.n();
    let mut system = SplitSystem::empty(n);
    if n < 4 {
        return system;
    }
    let paths = leaf_paths(tree);
    for q in quartets(n) {
        let disjoint: Vec<QuartetSplit> = QuartetSplit::all_of(q)
            .into_iter()
            .filter(|s| {
                let ([a, b], [c, d]) = s.pairs();
                paths[a][b].is_disjoint(&paths[c][d])
            })
            .collect();
        let mask = match disjoint.as_slice() {
            [] => 0b111,
            [s] => 1 << s.index,
            _ => unreachable!("two disjoint pairings in one quartet of a tree"),
        };
        system.set_mask(q, mask);
    }
    system
}

/// How candidate split systems are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// One system per leaf-labeled tree topology.
    Topology,
    /// Backtracking over per-quartet choices with predicate pruning.
    Raw,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "topology" => Ok(Strategy::Topology),
            "raw" => Ok(Strategy::Raw),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Candidate systems for the tree deciders, in deterministic order.
///
/// `Topology` yields the induced system of every leaf-labeled topology on
/// `[n]` (ascending internal-edge count). `Raw` yields every fat, transitive
/// and saturated system; it is only practical for `n <= 6`.
pub fn enumerate_candidate_systems(n: usize, strategy: Strategy) -> Vec<SplitSystem> {
    match strategy {
        Strategy::Topology => all_topologies(n).iter().map(Topology::induced_splits).collect(),
        Strategy::Raw => raw_systems(n),
    }
}

fn raw_systems(n: usize) -> Vec<SplitSystem> {
    let qs: Vec<[usize; 4]> = quartets(n).collect();
    if qs.is_empty() {
        return vec![SplitSystem::empty(n)];
    }
    // 5-subsets whose lexicographically last quartet is qs[k]: checkable
    // once qs[k] is assigned.
    let mut ready: Vec<Vec<[usize; 5]>> = vec![Vec::new(); qs.len()];
    let pos = |q: [usize; 4]| qs.iter().position(|&x| x == q).expect("quartet");
    for five in fives(n) {
        let last = (0..5)
            .map(|skip| {
                let v: Vec<usize> = (0..5).filter(|&k| k != skip).map(|k| five[k]).collect();
                pos([v[0], v[1], v[2], v[3]])
            })
            .max()
            .expect("five quartets");
        ready[last].push(five);
    }
    let mut out = Vec::new();
    let mut current = SplitSystem::empty(n);
    fn go(
        k: usize,
        qs: &[[usize; 4]],
        ready: &[Vec<[usize; 5]>],
        current: &mut SplitSystem,
        out: &mut Vec<SplitSystem>,
    ) {
        if k == qs.len() {
            out.push(current.clone());
            return;
        }
        for mask in [0b001u8, 0b010, 0b100, 0b111] {
            current.set_mask(qs[k], mask);
            let ok = ready[k]
                .iter()
                .all(|&five| current.check_transitive_in(five).is_ok() && current.check_saturated_in(five).is_ok());
            if ok {
                go(k + 1, qs, ready, current, out);
            }
        }
        current.set_mask(qs[k], 0);
    }
    go(0, &qs, &ready, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{caterpillar5, star, unit_quartet};

    fn sys(n: usize, splits: &[(usize, usize, usize, usize)]) -> SplitSystem {
        SplitSystem::from_splits(n, splits.iter().map(|&(a, b, c, d)| QuartetSplit::of(a, b, c, d))).unwrap()
    }

    #[test]
    fn split_identity_ignores_rewriting() {
        let s = QuartetSplit::of(1, 2, 3, 4);
        for (a, b, c, d) in [(2, 1, 3, 4), (3, 4, 1, 2), (4, 3, 2, 1)] {
            assert_eq!(QuartetSplit::of(a, b, c, d), s);
        }
        assert_ne!(QuartetSplit::of(1, 3, 2, 4), s);
        assert_eq!(s.to_string(), "(1,2|3,4)");
        assert!(QuartetSplit::new(1, 1, 2, 3).is_err());
    }

    #[test]
    fn fatness() {
        assert!(sys(4, &[(1, 2, 3, 4)]).is_fat());
        assert_eq!(
            SplitSystem::empty(4).check_fat(),
            Err(SplitViolation::NotFat { quartet: [1, 2, 3, 4], present: 0 })
        );
        assert!(!sys(4, &[(1, 2, 3, 4), (1, 3, 2, 4)]).is_fat());
    }

    #[test]
    fn transitivity() {
        let s = sys(5, &[(1, 2, 3, 4), (1, 2, 3, 5)]);
        match s.check_transitive() {
            Err(SplitViolation::NotTransitive { missing, .. }) => {
                assert_eq!(missing, QuartetSplit::of(1, 2, 4, 5))
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(sys(5, &[(1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 4, 5)]).is_transitive());
        assert!(sys(4, &[(1, 2, 3, 4), (1, 3, 2, 4)]).is_transitive());
    }

    #[test]
    fn saturation() {
        assert_eq!(
            sys(5, &[(1, 2, 3, 4)]).check_saturated(),
            Err(SplitViolation::NotSaturated { split: QuartetSplit::of(1, 2, 3, 4), x: 5 })
        );
        assert!(sys(4, &[(1, 2, 3, 4)]).is_saturated());
        assert!(tree_induced_splits(&caterpillar5()).is_saturated());
    }

    #[test]
    fn degenerate_sizes_are_vacuous() {
        for n in 2..4 {
            let s = SplitSystem::empty(n);
            assert!(s.is_fat() && s.is_transitive() && s.is_saturated());
        }
    }

    #[test]
    fn quartet_tree_induces_one_split() {
        let t = unit_quartet();
        assert_eq!(tree_induced_splits(&t).members(), vec![QuartetSplit::of(1, 2, 3, 4)]);
    }

    #[test]
    fn star_induces_all_splits() {
        assert_eq!(tree_induced_splits(&star(&[1, 1, 1, 1])).len(), 3);
    }

    #[test]
    fn caterpillar_induced_system() {
        let s = tree_induced_splits(&caterpillar5());
        let expected = sys(5, &[(1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 4, 5), (4, 5, 1, 3), (4, 5, 2, 3)]);
        assert_eq!(s, expected);
        assert!(s.check_all().is_ok());
    }

    #[test]
    fn candidate_counts() {
        assert_eq!(enumerate_candidate_systems(4, Strategy::Topology).len(), 4);
        assert_eq!(enumerate_candidate_systems(5, Strategy::Topology).len(), 26);
        let mut topo = enumerate_candidate_systems(4, Strategy::Topology);
        let mut raw = enumerate_candidate_systems(4, Strategy::Raw);
        topo.sort();
        raw.sort();
        assert_eq!(topo, raw);
    }

    #[test]
    fn raw_order_is_singles_then_all_three() {
        let raw = enumerate_candidate_systems(4, Strategy::Raw);
        assert_eq!(raw[0].members(), vec![QuartetSplit::of(1, 2, 3, 4)]);
        assert_eq!(raw[3].len(), 3);
    }

    #[test]
    fn split_text_form() {
        let s = QuartetSplit::of(4, 3, 2, 1);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"1,2|3,4\"");
        assert_eq!(serde_json::from_str::<QuartetSplit>(&json).unwrap(), s);
    }
}
