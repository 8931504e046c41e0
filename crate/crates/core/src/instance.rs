//! Seeded random instances with a known realization.
//!
//! Everything is drawn from a `ChaCha8Rng` seeded with `InstanceSpec::seed`,
//! so an instance is reproducible from its `InstanceSpec` alone. Weights are
//! fractions `p/q` with `1 <= q <= 16`.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::{Interval, IntervalFamily, Variant};
use crate::rational::{half, int, ratio, Rational};
use crate::topology::random_topology;
use crate::weighted::{Edge, WeightedGraph, WeightedTree};

pub const MAX_DENOMINATOR: i64 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub n: usize,
    pub variant: Variant,
    pub seed: u64,
    /// Edge weights are drawn from this closed range, excluding zero (and
    /// everything nonpositive for positive variants).
    pub weight_range: (Rational, Rational),
    pub half_width: Rational,
    /// Each interval center is shifted by up to this much, so the instance
    /// may become infeasible.
    pub perturbation: Rational,
}

impl InstanceSpec {
    /// Weights in `[-3, 5]` (general) or `(0, 5]` (positive), half-width
    /// 1/4, no perturbation.
    pub fn new(n: usize, variant: Variant, seed: u64) -> Self {
        let low = if variant.is_positive() { int(0) } else { int(-3) };
        Self { n, variant, seed, weight_range: (low, int(5)), half_width: ratio(1, 4), perturbation: Rational::zero() }
    }

    /// Half-width and perturbation drawn from the seed, giving a mix of
    /// feasible and infeasible instances.
    pub fn mixed(n: usize, variant: Variant, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_1a57);
        let widths = [ratio(1, 4), ratio(1, 2), int(1)];
        let shifts = [int(0), int(0), ratio(1, 2), int(1), int(2)];
        Self {
            half_width: widths[rng.gen_range(0..widths.len())].clone(),
            perturbation: shifts[rng.gen_range(0..shifts.len())].clone(),
            ..Self::new(n, variant, seed)
        }
    }

    pub fn with_half_width(mut self, h: Rational) -> Self {
        self.half_width = h;
        self
    }

    pub fn with_weight_range(mut self, lo: Rational, hi: Rational) -> Self {
        self.weight_range = (lo, hi);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundTruth {
    Tree(WeightedTree),
    Graph(WeightedGraph),
}

/// Uniform over fractions `p/q` in `[lo, hi]`: denominator first, then
/// numerator. Returns `None` if the range holds no such fraction.
pub fn random_fraction<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> Option<Rational> {
    for _ in 0..64 {
        let q = rng.gen_range(1..=MAX_DENOMINATOR);
        let qr = int(q);
        let a = (lo * &qr).ceil().to_integer().to_i64()?;
        let b = (hi * &qr).floor().to_integer().to_i64()?;
        if a <= b {
            return Some(ratio(rng.gen_range(a..=b), q));
        }
    }
    None
}

/// Round to a multiple of `1 / MAX_DENOMINATOR`, up or down.
fn to_grid(value: &Rational, up: bool) -> Rational {
    let scaled = value * int(MAX_DENOMINATOR);
    let whole = if up { scaled.ceil() } else { scaled.floor() };
    whole / int(MAX_DENOMINATOR)
}

fn random_weight<R: Rng>(rng: &mut R, spec: &InstanceSpec) -> Result<Rational> {
    let (lo, hi) = &spec.weight_range;
    for _ in 0..256 {
        let w =
            random_fraction(rng, lo, hi).ok_or_else(|| Error::Family("weight range contains no fraction".into()))?;
        if w.is_positive() || (!w.is_zero() && !spec.variant.is_positive()) {
            return Ok(w);
        }
    }
    Err(Error::Family("weight range admits no usable weight".into()))
}

fn random_graph<R: Rng>(rng: &mut R, spec: &InstanceSpec) -> Result<WeightedGraph> {
    let n = spec.n;
    let v = n + rng.gen_range(0..=2);
    let mut present = vec![vec![false; v]; v];
    let mut edges = Vec::new();
    for x in 1..v {
        let y = rng.gen_range(0..x);
        present[y][x] = true;
        edges.push(Edge::new(y, x, random_weight(rng, spec)?));
    }
    for x in 0..v {
        for y in x + 1..v {
            if !present[x][y] && rng.gen_bool(0.4) {
                edges.push(Edge::new(x, y, random_weight(rng, spec)?));
            }
        }
    }
    WeightedGraph::new(v, edges, (0..n).collect())
}

/// A family of intervals around the 2-weights of a random realization.
///
/// Intervals of positive half-width are rounded outward to multiples of
/// 1/16; point intervals keep the exact 2-weights.
pub fn random_instance(spec: &InstanceSpec) -> Result<(IntervalFamily, GroundTruth)> {
    if spec.n < 2 {
        return Err(Error::Family("n must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (truth, d) = if spec.variant == Variant::GraphClosed {
        let g = random_graph(&mut rng, spec)?;
        let d = g.two_weights()?;
        (GroundTruth::Graph(g), d)
    } else {
        let contract = if spec.variant == Variant::StarOpen { 1.0 } else { 0.25 };
        let t = random_topology(spec.n, contract, &mut rng);
        let weights = (0..t.edges().len()).map(|_| random_weight(&mut rng, spec)).collect::<Result<Vec<_>>>()?;
        let tree = t.to_tree(&weights)?;
        let d = tree.two_weights();
        (GroundTruth::Tree(tree), d)
    };
    let p = &spec.perturbation;
    let h = &spec.half_width;
    let positive = spec.variant.is_positive();
    let mut bounds = Vec::with_capacity(d.values().len());
    for value in d.values() {
        let mut center = value.clone();
        if p.is_positive() {
            center += random_fraction(&mut rng, &-p.clone(), p).unwrap_or_default();
        }
        if positive && center < half(value) {
            center = half(value);
        }
        let mut lo = &center - h;
        if positive && lo < half(&center) {
            lo = half(&center);
        }
        let mut hi = &center + h;
        if h.is_positive() {
            lo = to_grid(&lo, false);
            hi = to_grid(&hi, true);
            if positive && !lo.is_positive() {
                lo = ratio(1, MAX_DENOMINATOR);
            }
        }
        bounds.push(Interval::new(lo, hi));
    }
    Ok((IntervalFamily::new(spec.n, spec.variant, bounds)?, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_graph, verify_tree};

    #[test]
    fn deterministic() {
        let spec = InstanceSpec::mixed(5, Variant::TreeGeneralOpen, 11);
        assert_eq!(random_instance(&spec).unwrap(), random_instance(&spec).unwrap());
    }

    #[test]
    fn unperturbed_truth_verifies() {
        for variant in Variant::ALL {
            for seed in 0..20 {
                let spec = InstanceSpec::new(5, variant, seed);
                let (f, truth) = random_instance(&spec).unwrap();
                let report = match &truth {
                    GroundTruth::Tree(t) => verify_tree(t, &f).unwrap(),
                    GroundTruth::Graph(g) => verify_graph(g, &f).unwrap(),
                };
                assert!(report.passed(), "{variant} seed {seed}\n{report}");
                for (_, iv) in f.intervals() {
                    assert!(iv.lo.denom() <= &16.into() && iv.hi.denom() <= &16.into());
                }
            }
        }
    }

    #[test]
    fn positive_tree_widths() {
        let (f, _) = random_instance(&InstanceSpec::new(5, Variant::TreePositiveOpen, 3)).unwrap();
        for (_, iv) in f.intervals() {
            assert!(iv.lo.is_positive());
            assert!(&iv.hi - &iv.lo < int(1));
        }
    }

    #[test]
    fn zero_width_open_is_rejected() {
        let spec = InstanceSpec::new(4, Variant::TreeGeneralOpen, 1).with_half_width(int(0));
        assert!(random_instance(&spec).is_err());
        let spec = InstanceSpec::new(4, Variant::TreeGeneralClosed, 1).with_half_width(int(0));
        let (f, truth) = random_instance(&spec).unwrap();
        let GroundTruth::Tree(t) = truth else { panic!() };
        assert!(f.intervals().all(|(p, iv)| iv.lo == iv.hi && iv.lo == *t.two_weights().get(p)));
    }
}
