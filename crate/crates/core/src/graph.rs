//! Realization by positive-weighted graphs.
//!
//! An interval family is realizable iff every lower bound is at most the
//! min-plus closure of the upper bounds; the complete graph weighted by
//! the closure is then a witness.

use num_traits::Signed;

use crate::dissimilarity::DissimilarityVector;
use crate::error::{Error, Result};
use crate::family::{IntervalFamily, Variant};
use crate::pair::{all_pairs, PairIndex};
use crate::rational::Rational;
use crate::verify::verify_graph;
use crate::weighted::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    m_tilde: DissimilarityVector,
    via: Vec<Vec<usize>>,
}

impl ClosureResult {
    pub fn m_tilde(&self) -> &DissimilarityVector {
        &self.m_tilde
    }

    /// Intermediate labels of an optimal chain from `pair.i()` to
    /// `pair.j()`; empty when the direct bound is optimal.
    pub fn via(&self, pair: PairIndex) -> &[usize] {
        &self.via[pair.rank(self.m_tilde.n())]
    }

    /// Upper-bound sum along `i, chain..., j`.
    pub fn chain_sum(m: &DissimilarityVector, pair: PairIndex, chain: &[usize]) -> Rational {
        let mut stops = vec![pair.i()];
        stops.extend_from_slice(chain);
        stops.push(pair.j());
        stops.windows(2).map(|w| m.at(w[0], w[1]).clone()).sum()
    }
}

/// Floyd-Warshall over intermediates in increasing label order; a route is
/// replaced only on strict improvement, so ties keep the lowest labels.
pub fn minplus_closure(m: &DissimilarityVector) -> Result<ClosureResult> {
    let n = m.n();
    if let Some((p, v)) = m.iter().find(|(_, v)| !v.is_positive()) {
        return Err(Error::Family(format!("upper bound at {p} is {v}, must be positive")));
    }
    let mut dist = vec![vec![Rational::default(); n + 1]; n + 1];
    let mut mid = vec![vec![0usize; n + 1]; n + 1];
    for p in all_pairs(n) {
        dist[p.i()][p.j()] = m.get(p).clone();
        dist[p.j()][p.i()] = m.get(p).clone();
    }
    for k in 1..=n {
        for i in 1..=n {
            if i == k {
                continue;
            }
            for j in 1..=n {
                if j == k || j == i {
                    continue;
                }
                let through = &dist[i][k] + &dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                    mid[i][j] = k;
                }
            }
        }
    }
    fn chain(mid: &[Vec<usize>], i: usize, j: usize, out: &mut Vec<usize>) {
        let k = mid[i][j];
        if k != 0 {
            chain(mid, i, k, out);
            out.push(k);
            chain(mid, k, j, out);
        }
    }
    let via = all_pairs(n)
        .map(|p| {
            let mut out = Vec::new();
            chain(&mid, p.i(), p.j(), &mut out);
            out
        })
        .collect();
    let m_tilde = DissimilarityVector::from_fn(n, |p| dist[p.i()][p.j()].clone());
    Ok(ClosureResult { m_tilde, via })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphDecision {
    Feasible {
        witness: WeightedGraph,
    },
    /// `lo(pair)` exceeds the upper-bound sum along `i, chain..., j` by
    /// `slack`.
    Infeasible {
        pair: PairIndex,
        chain: Vec<usize>,
        slack: Rational,
    },
}

impl GraphDecision {
    pub fn is_feasible(&self) -> bool {
        matches!(self, GraphDecision::Feasible { .. })
    }
}

pub fn decide_graph(family: &IntervalFamily) -> Result<GraphDecision> {
    if family.variant() != Variant::GraphClosed {
        return Err(Error::UnsupportedVariant(family.variant()));
    }
    let n = family.n();
    let upper = DissimilarityVector::from_fn(n, |p| family.hi(p).clone());
    let closure = minplus_closure(&upper)?;
    for (pair, iv) in family.intervals() {
        let best = closure.m_tilde().get(pair);
        if iv.lo > *best {
            return Ok(GraphDecision::Infeasible { pair, chain: closure.via(pair).to_vec(), slack: &iv.lo - best });
        }
    }
    Ok(GraphDecision::Feasible { witness: WeightedGraph::complete(closure.m_tilde()) })
}

/// Re-check a graph decision against its family: a feasible witness must
/// verify, an infeasible chain must undercut the lower bound by `slack`.
pub fn check_graph_decision(decision: &GraphDecision, family: &IntervalFamily) -> Result<bool> {
    match decision {
        GraphDecision::Feasible { witness } => Ok(verify_graph(witness, family)?.passed()),
        GraphDecision::Infeasible { pair, chain, slack } => {
            let upper = DissimilarityVector::from_fn(family.n(), |p| family.hi(p).clone());
            let sum = ClosureResult::chain_sum(&upper, *pair, chain);
            Ok(slack.is_positive() && family.lo(*pair) - sum == *slack)
        }
    }
}
