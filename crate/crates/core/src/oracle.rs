//! Brute-force deciders used to cross-check the main pipeline.
//!
//! Trees: every leaf-labeled topology gets one unknown per edge and each
//! distance is the sum along its path. Graphs: every chain of distinct
//! intermediates is enumerated. Neither path touches split systems.

use num_traits::Signed;

use crate::dissimilarity::DissimilarityVector;
use crate::error::{Error, Result};
use crate::family::{IntervalFamily, Variant};
use crate::linsys::{fm_feasible, Certificate, Constraint, FmOutcome, LinExpr, Sense};
use crate::pair::{all_pairs, PairIndex};
use crate::rational::{int, Rational};
use crate::topology::{all_topologies, Topology};
use crate::weighted::{WeightedGraph, WeightedTree};

pub const MAX_ORACLE_LEAVES: usize = 6;

fn check_size(n: usize) -> Result<()> {
    if n > MAX_ORACLE_LEAVES {
        return Err(Error::Size(format!("brute force supports n <= {MAX_ORACLE_LEAVES}, got {n}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleTreeOutcome {
    Feasible {
        witness: WeightedTree,
        topology: Topology,
    },
    /// One certificate per topology tried, over [`topology_system`].
    Infeasible {
        certificates: Vec<(Topology, Certificate)>,
    },
}

impl OracleTreeOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, OracleTreeOutcome::Feasible { .. })
    }
}

/// Bounds on path sums of edge unknowns (id = edge index), plus positivity
/// of every edge for positive variants.
pub fn topology_system(topology: &Topology, family: &IntervalFamily) -> Vec<Constraint> {
    let sense = if family.variant().is_open() { Sense::Positive } else { Sense::NonNegative };
    let mut rows = Vec::new();
    for (path, (_, iv)) in topology.leaf_paths().iter().zip(family.intervals()) {
        let sum = LinExpr::from_terms(path.iter().map(|&e| (e, int(1))), int(0));
        let mut lower = sum.clone();
        lower.add_constant(&-iv.lo.clone());
        let mut upper = sum.negated();
        upper.add_constant(&iv.hi);
        rows.push(Constraint::new(lower, sense));
        rows.push(Constraint::new(upper, sense));
    }
    if family.variant().is_positive() {
        rows.extend((0..topology.edges().len()).map(|e| Constraint::gt(LinExpr::var(e))));
    }
    rows
}

/// Tree variants search every topology; star-open only the star.
pub fn brute_force_tree_decide(family: &IntervalFamily) -> Result<OracleTreeOutcome> {
    let n = family.n();
    check_size(n)?;
    let topologies = match family.variant() {
        v if v.is_tree() => all_topologies(n),
        Variant::StarOpen => all_topologies(n).into_iter().take(1).collect(),
        v => return Err(Error::UnsupportedVariant(v)),
    };
    let mut certificates = Vec::new();
    for t in topologies {
        match fm_feasible(&topology_system(&t, family)) {
            FmOutcome::Sample(values) => {
                let weights: Vec<Rational> =
                    (0..t.edges().len()).map(|e| values.get(&e).cloned().unwrap_or_default()).collect();
                let witness = t.to_tree(&weights)?;
                return Ok(OracleTreeOutcome::Feasible { witness, topology: t });
            }
            FmOutcome::Infeasible(cert) => certificates.push((t, cert)),
        }
    }
    Ok(OracleTreeOutcome::Infeasible { certificates })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleGraphOutcome {
    Feasible { witness: WeightedGraph },
    Infeasible { pair: PairIndex, chain: Vec<usize>, slack: Rational },
}

impl OracleGraphOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, OracleGraphOutcome::Feasible { .. })
    }
}

/// Every sequence of distinct labels from `pool`, in prefix order.
fn chains(pool: &[usize]) -> Vec<Vec<usize>> {
    fn go(pool: &[usize], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for k in 0..pool.len() {
            if !used[k] {
                used[k] = true;
                cur.push(pool[k]);
                go(pool, used, cur, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(pool, &mut vec![false; pool.len()], &mut Vec::new(), &mut out);
    out
}

/// Check `lo_ij <= hi-sum` along every chain of distinct intermediates.
pub fn brute_force_graph_decide(family: &IntervalFamily) -> Result<OracleGraphOutcome> {
    if family.variant() != Variant::GraphClosed {
        return Err(Error::UnsupportedVariant(family.variant()));
    }
    let n = family.n();
    check_size(n)?;
    let hi = |a: usize, b: usize| family.hi(PairIndex::of(a, b)).clone();
    let mut best = Vec::new();
    for pair in all_pairs(n) {
        let pool: Vec<usize> = (1..=n).filter(|&k| !pair.contains(k)).collect();
        let mut min: Option<Rational> = None;
        for chain in chains(&pool) {
            let mut stops = vec![pair.i()];
            stops.extend(&chain);
            stops.push(pair.j());
            let sum: Rational = stops.windows(2).map(|w| hi(w[0], w[1])).sum();
            let slack = family.lo(pair) - &sum;
            if slack.is_positive() {
                return Ok(OracleGraphOutcome::Infeasible { pair, chain, slack });
            }
            if min.as_ref().is_none_or(|m| sum < *m) {
                min = Some(sum);
            }
        }
        best.push(min.expect("the direct chain"));
    }
    let weights = DissimilarityVector::new(n, best)?;
    Ok(OracleGraphOutcome::Feasible { witness: WeightedGraph::complete(&weights) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::verify::{verify_graph, verify_tree};

    fn family(n: usize, variant: Variant, values: &[(i64, i64)]) -> IntervalFamily {
        let mut k = 0;
        IntervalFamily::from_fn(n, variant, |_| {
            k += 1;
            (int(values[k - 1].0), int(values[k - 1].1))
        })
        .unwrap()
    }

    #[test]
    fn unit_quartet_window() {
        let d = [2, 3, 3, 3, 3, 2];
        let f = IntervalFamily::from_fn(4, Variant::TreeGeneralOpen, |p| {
            let v = int(d[p.rank(4)]);
            (&v - ratio(1, 2), &v + ratio(1, 2))
        })
        .unwrap();
        let OracleTreeOutcome::Feasible { witness, .. } = brute_force_tree_decide(&f).unwrap() else {
            panic!("infeasible")
        };
        assert!(verify_tree(&witness, &f).unwrap().passed());
    }

    #[test]
    fn distinct_sums_point() {
        let v: Vec<(i64, i64)> = [1, 2, 2, 5, 2, 1].iter().map(|&x| (x, x)).collect();
        let f = family(4, Variant::TreeGeneralClosed, &v);
        let OracleTreeOutcome::Infeasible { certificates } = brute_force_tree_decide(&f).unwrap() else {
            panic!("feasible")
        };
        assert_eq!(certificates.len(), 4);
        for (t, cert) in &certificates {
            cert.validate(&topology_system(t, &f)).unwrap();
        }
    }

    #[test]
    fn three_labels_always_feasible() {
        let f = family(3, Variant::TreeGeneralOpen, &[(9, 10), (0, 1), (-4, 1)]);
        assert!(brute_force_tree_decide(&f).unwrap().is_feasible());
    }

    #[test]
    fn graph_triangle() {
        let f = family(3, Variant::GraphClosed, &[(5, 5), (2, 2), (2, 2)]);
        assert_eq!(
            brute_force_graph_decide(&f).unwrap(),
            OracleGraphOutcome::Infeasible { pair: PairIndex::of(1, 2), chain: vec![3], slack: int(1) }
        );
        let f = family(3, Variant::GraphClosed, &[(4, 5), (2, 2), (2, 2)]);
        let OracleGraphOutcome::Feasible { witness } = brute_force_graph_decide(&f).unwrap() else { panic!() };
        assert!(verify_graph(&witness, &f).unwrap().passed());
    }

    #[test]
    fn graph_two_labels() {
        assert!(brute_force_graph_decide(&family(2, Variant::GraphClosed, &[(3, 4)])).unwrap().is_feasible());
    }

    #[test]
    fn chain_enumeration() {
        assert_eq!(chains(&[1, 2]), vec![vec![], vec![1], vec![1, 2], vec![2], vec![2, 1]]);
    }

    #[test]
    fn size_limit() {
        let f = IntervalFamily::from_fn(7, Variant::GraphClosed, |_| (int(1), int(2))).unwrap();
        assert!(matches!(brute_force_graph_decide(&f), Err(Error::Size(_))));
    }
}
