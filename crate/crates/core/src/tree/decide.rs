use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::construct::construct_tree_from_d;
use super::system::{assemble, equality_parametrization, raw_rows, star_system, RowLabel};
use crate::dissimilarity::DissimilarityVector;
use crate::error::{Error, Result};
use crate::family::{IntervalFamily, Variant};
use crate::linsys::{fm_feasible, split_equalities, Certificate, Constraint, FmOutcome, Parametrization};
use crate::pair::{all_pairs, pair_count};
use crate::rational::{half, Rational};
use crate::splits::{enumerate_candidate_systems, quartets, QuartetSplit, SplitSystem, Strategy};
use crate::topology::MAX_TOPOLOGY_LEAVES;
use crate::verify::verify_tree;
use crate::weighted::{Edge, WeightedTree};

/// Largest `n` accepted with [`Strategy::Raw`].
pub const MAX_RAW_LEAVES: usize = 6;

/// The system a certificate refers to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CandidateKind {
    /// Split equalities of `splits` plus interval rows, over free distances.
    Splits { splits: Vec<QuartetSplit> },
    /// Interval rows over the pendant weights of a star.
    Star,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateCertificate {
    pub kind: CandidateKind,
    pub n: usize,
    pub certificate: Certificate,
}

impl CandidateCertificate {
    /// Rebuild the candidate's system from `family`.
    pub fn system(&self, family: &IntervalFamily) -> Result<(Vec<RowLabel>, Vec<Constraint>)> {
        match &self.kind {
            CandidateKind::Star => star_system(family),
            CandidateKind::Splits { splits } => {
                let s = SplitSystem::from_splits(self.n, splits.iter().copied())?;
                let sys = super::system::build_system(&s, family)?;
                Ok((sys.labels, sys.constraints))
            }
        }
    }

    /// Labels of the rows the certificate cites, in multiplier order.
    pub fn cited_rows(&self, family: &IntervalFamily) -> Result<Vec<RowLabel>> {
        let (labels, _) = self.system(family)?;
        self.certificate
            .multipliers
            .iter()
            .map(|m| labels.get(m.row).copied().ok_or(Error::Structure(format!("no row {}", m.row))))
            .collect()
    }

    pub fn validate(&self, family: &IntervalFamily) -> Result<()> {
        let (_, constraints) = self.system(family)?;
        Ok(self.certificate.validate(&constraints)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeDecision {
    Feasible {
        witness: WeightedTree,
        distances: DissimilarityVector,
        splits: SplitSystem,
    },
    /// One certificate per candidate, in candidate order.
    Infeasible {
        certificates: Vec<CandidateCertificate>,
    },
}

impl TreeDecision {
    pub fn is_feasible(&self) -> bool {
        matches!(self, TreeDecision::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&WeightedTree> {
        match self {
            TreeDecision::Feasible { witness, .. } => Some(witness),
            TreeDecision::Infeasible { .. } => None,
        }
    }
}

struct Candidate {
    splits: SplitSystem,
    param: Parametrization,
}

type CandidateSet = Arc<Vec<Candidate>>;

/// Candidate systems and their equality parametrizations, computed once
/// per `(n, strategy)`.
fn candidates(n: usize, strategy: Strategy) -> Result<CandidateSet> {
    let limit = match strategy {
        Strategy::Topology => MAX_TOPOLOGY_LEAVES,
        Strategy::Raw => MAX_RAW_LEAVES,
    };
    if n > limit {
        return Err(Error::Size(format!("{strategy:?} search supports n <= {limit}, got {n}")));
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, Strategy), CandidateSet>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    let set = guard.entry((n, strategy)).or_insert_with(|| {
        let list = enumerate_candidate_systems(n, strategy)
            .into_iter()
            .map(|splits| {
                let param = equality_parametrization(&splits);
                Candidate { splits, param }
            })
            .collect();
        Arc::new(list)
    });
    Ok(Arc::clone(set))
}

/// Split equalities that the interval box alone contradicts. Each equality
/// `sum s_I x_I = 0` needs `min <= 0 <= max` over the box; the certificate
/// adds the matching lower or upper rows, on which the equality vanishes.
fn screen(splits: &SplitSystem, family: &IntervalFamily) -> Option<Certificate> {
    let n = family.n();
    let open = family.variant().is_open();
    for eq in split_equalities(splits) {
        let (mut min, mut max) = (Rational::zero(), Rational::zero());
        for (&id, s) in eq.expr.coeffs() {
            let pair = all_pairs(n).nth(id).expect("pair rank");
            let iv = family.interval(pair);
            if s.is_positive() {
                min += s * &iv.lo;
                max += s * &iv.hi;
            } else {
                min += s * &iv.hi;
                max += s * &iv.lo;
            }
        }
        let contradicts = |v: &Rational| v.is_positive() || (open && v.is_zero());
        if contradicts(&min) {
            let rows = eq.expr.coeffs().iter().map(|(&id, s)| {
                if s.is_positive() {
                    (2 * id, s.clone())
                } else {
                    (2 * id + 1, -s.clone())
                }
            });
            return Some(Certificate::new(rows.collect::<Vec<_>>(), -min));
        }
        if contradicts(&-max.clone()) {
            let rows = eq.expr.coeffs().iter().map(|(&id, s)| {
                if s.is_positive() {
                    (2 * id + 1, s.clone())
                } else {
                    (2 * id, -s.clone())
                }
            });
            return Some(Certificate::new(rows.collect::<Vec<_>>(), max));
        }
    }
    None
}

/// Free distances at the midpoints of their own intervals, if the lifted
/// point satisfies every row. Pivots are checked one at a time so most
/// candidates are rejected after a few evaluations.
fn midpoint_hint(c: &Candidate, family: &IntervalFamily) -> Option<BTreeMap<usize, Rational>> {
    let n = family.n();
    let open = family.variant().is_open();
    let pairs: Vec<_> = all_pairs(n).collect();
    let mut point: BTreeMap<usize, Rational> = c
        .param
        .free()
        .iter()
        .map(|&id| {
            let iv = family.interval(pairs[id]);
            (id, half(&(&iv.lo + &iv.hi)))
        })
        .collect();
    for (&id, expr) in c.param.pivots() {
        let value = expr.eval(&point).expect("pivots depend on free unknowns only");
        if !family.interval(pairs[id]).contains(&value, open) {
            return None;
        }
        point.insert(id, value);
    }
    if family.variant() == Variant::TreePositiveOpen {
        let rows = raw_rows(&c.splits, family);
        if !rows[2 * pair_count(n)..].iter().all(|(_, r)| r.holds(&point)) {
            return None;
        }
    }
    Some(point)
}

fn finish(point: &BTreeMap<usize, Rational>, splits: &SplitSystem, family: &IntervalFamily) -> Result<TreeDecision> {
    let n = family.n();
    let distances = DissimilarityVector::from_fn(n, |p| point[&p.rank(n)].clone());
    let positive = family.variant().is_positive();
    let witness = construct_tree_from_d(&distances, positive)?;
    let report = verify_tree(&witness, family)?;
    if !report.passed() {
        return Err(Error::Structure(format!("witness fails verification:\n{report}")));
    }
    Ok(TreeDecision::Feasible { witness, distances, splits: splits.clone() })
}

/// Decide whether some tree of the family's variant realizes the family.
///
/// Candidates are tried in enumeration order. A first pass accepts any
/// candidate whose midpoint point already satisfies its system; a second
/// pass decides each candidate exactly, refuting it by interval screening
/// or by elimination, and stops at the first feasible one.
pub fn decide_tree(family: &IntervalFamily, strategy: Strategy) -> Result<TreeDecision> {
    let n = family.n();
    if !family.variant().is_tree() {
        return Err(Error::UnsupportedVariant(family.variant()));
    }
    let cands = candidates(n, strategy)?;
    for c in cands.iter() {
        if let Some(point) = midpoint_hint(c, family) {
            return finish(&point, &c.splits, family);
        }
    }
    let mut certificates = Vec::with_capacity(cands.len());
    for c in cands.iter() {
        let kind = CandidateKind::Splits { splits: c.splits.members() };
        if let Some(certificate) = screen(&c.splits, family) {
            certificates.push(CandidateCertificate { kind, n, certificate });
            continue;
        }
        let system = assemble(&c.param, &c.splits, family);
        match fm_feasible(&system.constraints) {
            FmOutcome::Sample(free) => return finish(&c.param.lift(&free), &c.splits, family),
            FmOutcome::Infeasible(certificate) => certificates.push(CandidateCertificate { kind, n, certificate }),
        }
    }
    Ok(TreeDecision::Infeasible { certificates })
}

fn all_splits(n: usize) -> SplitSystem {
    SplitSystem::from_splits(n, quartets(n).flat_map(QuartetSplit::all_of)).expect("labels in range")
}

/// Realization by a star with arbitrary pendant weights.
pub fn decide_star(family: &IntervalFamily) -> Result<TreeDecision> {
    let (_, rows) = star_system(family)?;
    let n = family.n();
    match fm_feasible(&rows) {
        FmOutcome::Infeasible(certificate) => Ok(TreeDecision::Infeasible {
            certificates: vec![CandidateCertificate { kind: CandidateKind::Star, n, certificate }],
        }),
        FmOutcome::Sample(y) => {
            let weight = |k: usize| y.get(&k).cloned().unwrap_or_else(Rational::zero);
            let edges = (0..n).map(|k| Edge::new(k, n, weight(k))).collect();
            let witness = WeightedTree::normalized(n + 1, edges, (0..n).collect())?;
            let report = verify_tree(&witness, family)?;
            if !report.passed() {
                return Err(Error::Structure(format!("witness fails verification:\n{report}")));
            }
            let distances = witness.two_weights();
            Ok(TreeDecision::Feasible { witness, distances, splits: all_splits(n) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::unit_quartet;
    use crate::pair::PairIndex;
    use crate::rational::{int, ratio};

    fn around(d: &DissimilarityVector, variant: Variant, h: Rational) -> IntervalFamily {
        IntervalFamily::from_fn(d.n(), variant, |p| (d.get(p) - &h, d.get(p) + &h)).unwrap()
    }

    fn distinct_sums(variant: Variant) -> IntervalFamily {
        // D12=1, D13=2, D14=2, D23=5, D24=2, D34=1
        let v = [1, 2, 2, 5, 2, 1];
        let mut k = 0;
        IntervalFamily::from_fn(4, variant, |_| {
            k += 1;
            (int(v[k - 1]), int(v[k - 1]))
        })
        .unwrap()
    }

    #[test]
    fn unit_quartet_half_widths() {
        let d = unit_quartet().two_weights();
        let f = around(&d, Variant::TreeGeneralOpen, ratio(1, 2));
        let TreeDecision::Feasible { witness, splits, .. } = decide_tree(&f, Strategy::Topology).unwrap() else {
            panic!("infeasible")
        };
        assert_eq!(splits.members(), vec![QuartetSplit::of(1, 2, 3, 4)]);
        assert!(verify_tree(&witness, &f).unwrap().passed());
    }

    #[test]
    fn distinct_sums_point_is_infeasible() {
        let f = distinct_sums(Variant::TreeGeneralClosed);
        let TreeDecision::Infeasible { certificates } = decide_tree(&f, Strategy::Topology).unwrap() else {
            panic!("feasible")
        };
        assert_eq!(certificates.len(), 4);
        for c in &certificates {
            c.validate(&f).unwrap();
        }
    }

    #[test]
    fn point_metric_round_trip() {
        let d = unit_quartet().two_weights();
        let f = around(&d, Variant::TreeGeneralClosed, Rational::zero());
        let decision = decide_tree(&f, Strategy::Topology).unwrap();
        assert_eq!(decision.witness().unwrap().two_weights(), d);
    }

    #[test]
    fn raw_strategy_agrees() {
        let d = unit_quartet().two_weights();
        for h in [ratio(1, 2), ratio(3, 2)] {
            let f = around(&d, Variant::TreePositiveOpen, h);
            let a = decide_tree(&f, Strategy::Topology).unwrap();
            let b = decide_tree(&f, Strategy::Raw).unwrap();
            assert_eq!(a.is_feasible(), b.is_feasible());
        }
    }

    #[test]
    fn screening_certificate_validates() {
        let f = distinct_sums(Variant::TreeGeneralClosed);
        let s = SplitSystem::from_splits(4, [QuartetSplit::of(1, 2, 3, 4)]).unwrap();
        let cert = screen(&s, &f).unwrap();
        let sys = super::super::build_system(&s, &f).unwrap();
        cert.validate(&sys.constraints).unwrap();
    }

    #[test]
    fn star_examples() {
        let f = IntervalFamily::from_fn(3, Variant::StarOpen, |_| (int(2), int(3))).unwrap();
        let TreeDecision::Feasible { distances, .. } = decide_star(&f).unwrap() else { panic!() };
        assert!(distances.iter().all(|(_, v)| *v > int(2) && *v < int(3)));

        // Every distance vector on three labels is a star metric, so use
        // four: y1+y2+y3+y4 = D12 + D34 = D13 + D24.
        let f = IntervalFamily::from_fn(4, Variant::StarOpen, |p| {
            if p == PairIndex::of(1, 2) || p == PairIndex::of(3, 4) {
                (int(10), int(11))
            } else {
                (int(0), int(1))
            }
        })
        .unwrap();
        let TreeDecision::Infeasible { certificates } = decide_star(&f).unwrap() else { panic!() };
        certificates[0].validate(&f).unwrap();

        let f = IntervalFamily::from_fn(2, Variant::StarOpen, |_| (int(0), int(1))).unwrap();
        let TreeDecision::Feasible { witness, .. } = decide_star(&f).unwrap() else { panic!() };
        assert_eq!(witness.edges().len(), 1);
        assert_eq!(witness.edges()[0].weight, ratio(1, 2));
    }

    #[test]
    fn wrong_variant() {
        let f = IntervalFamily::from_fn(3, Variant::GraphClosed, |_| (int(2), int(3))).unwrap();
        assert!(decide_tree(&f, Strategy::Topology).is_err());
        assert!(decide_star(&f).is_err());
    }
}
