//! Exact checks of a witness against an interval family.

use std::fmt;

use num_traits::Signed;

use crate::dissimilarity::DissimilarityVector;
use crate::error::{Error, Result};
use crate::family::IntervalFamily;
use crate::pair::PairIndex;
use crate::rational::{format_rational, Rational};
use crate::weighted::{WeightedGraph, WeightedTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCheck {
    pub pair: PairIndex,
    pub distance: Rational,
    pub lo: Rational,
    pub hi: Rational,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCheck {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

/// Per-pair verdicts plus any edge that breaks a positivity requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub open: bool,
    pub pairs: Vec<PairCheck>,
    pub nonpositive_edges: Vec<EdgeCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.nonpositive_edges.is_empty() && self.pairs.iter().all(|p| p.ok)
    }

    pub fn failed_pairs(&self) -> impl Iterator<Item = &PairCheck> {
        self.pairs.iter().filter(|p| !p.ok)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = if self.open { ("(", ")") } else { ("[", "]") };
        for p in &self.pairs {
            writeln!(
                f,
                "{} {} = {} in {l}{}, {}{r}",
                if p.ok { "ok  " } else { "FAIL" },
                p.pair,
                format_rational(&p.distance),
                format_rational(&p.lo),
                format_rational(&p.hi)
            )?;
        }
        for e in &self.nonpositive_edges {
            writeln!(f, "FAIL edge ({}, {}) has nonpositive weight {}", e.u, e.v, format_rational(&e.weight))?;
        }
        Ok(())
    }
}

/// Compare distances against the family's intervals, with the family's
/// openness.
pub fn check_distances(d: &DissimilarityVector, family: &IntervalFamily) -> Result<VerifyReport> {
    if d.n() != family.n() {
        return Err(Error::Structure(format!("witness has {} labels, instance has {}", d.n(), family.n())));
    }
    let open = family.variant().is_open();
    let pairs = family
        .intervals()
        .map(|(pair, iv)| {
            let distance = d.get(pair).clone();
            let ok = iv.contains(&distance, open);
            PairCheck { pair, distance, lo: iv.lo.clone(), hi: iv.hi.clone(), ok }
        })
        .collect();
    Ok(VerifyReport { open, pairs, nonpositive_edges: Vec::new() })
}

/// Shortest-path distances of a positive-weighted graph against `family`.
pub fn verify_graph(graph: &WeightedGraph, family: &IntervalFamily) -> Result<VerifyReport> {
    check_distances(&graph.two_weights()?, family)
}

/// Path weights of a tree against `family`; positive variants also need
/// every edge weight positive.
pub fn verify_tree(tree: &WeightedTree, family: &IntervalFamily) -> Result<VerifyReport> {
    let mut report = check_distances(&tree.two_weights(), family)?;
    if family.variant().is_positive() {
        report.nonpositive_edges = tree
            .edges()
            .iter()
            .filter(|e| !e.weight.is_positive())
            .map(|e| EdgeCheck { u: e.u, v: e.v, weight: e.weight.clone() })
            .collect();
    }
    Ok(report)
}
