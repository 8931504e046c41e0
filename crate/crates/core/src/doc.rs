//! JSON documents read and written by the command-line tool.
//!
//! Rationals are always strings (`"3"`, `"-7/4"`), never JSON numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{Interval, IntervalFamily, Variant};
use crate::graph::GraphDecision;
use crate::pair::{pair_count, PairIndex};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::tree::{CandidateCertificate, CandidateKind, TreeDecision};
use crate::verify::VerifyReport;
use crate::weighted::{Edge, WeightedGraph, WeightedTree};
use crate::DissimilarityVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalEntry {
    pub i: usize,
    pub j: usize,
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub n: usize,
    pub variant: String,
    pub intervals: Vec<IntervalEntry>,
}

fn field_rational(text: &str, at: usize, field: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| Error::Parse(format!("intervals[{at}].{field}: {e}")))
}

impl InstanceDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_family(family: &IntervalFamily) -> Self {
        Self {
            n: family.n(),
            variant: family.variant().name().to_string(),
            intervals: family
                .intervals()
                .map(|(p, iv)| IntervalEntry {
                    i: p.i(),
                    j: p.j(),
                    lo: format_rational(&iv.lo),
                    hi: format_rational(&iv.hi),
                })
                .collect(),
        }
    }

    /// Validate coverage (every pair exactly once) and the family's own
    /// invariants.
    pub fn to_family(&self) -> Result<IntervalFamily> {
        let variant: Variant = self.variant.parse().map_err(|e: Error| Error::Parse(format!("variant: {e}")))?;
        if self.n < 2 {
            return Err(Error::Parse(format!("n: must be at least 2, got {}", self.n)));
        }
        let mut slots: Vec<Option<Interval>> = vec![None; pair_count(self.n)];
        for (at, entry) in self.intervals.iter().enumerate() {
            let pair = PairIndex::new(entry.i, entry.j).ok().filter(|p| p.j() <= self.n).ok_or_else(|| {
                Error::Parse(format!("intervals[{at}]: {{{}, {}}} is not a pair of 1..={}", entry.i, entry.j, self.n))
            })?;
            let slot = &mut slots[pair.rank(self.n)];
            if slot.is_some() {
                return Err(Error::Parse(format!("intervals[{at}]: duplicate pair {pair}")));
            }
            *slot = Some(Interval::new(field_rational(&entry.lo, at, "lo")?, field_rational(&entry.hi, at, "hi")?));
        }
        let bounds = slots
            .into_iter()
            .zip(crate::pair::all_pairs(self.n))
            .map(|(slot, p)| slot.ok_or_else(|| Error::Parse(format!("intervals: missing pair {p}"))))
            .collect::<Result<Vec<_>>>()?;
        IntervalFamily::new(self.n, variant, bounds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: usize,
    pub v: usize,
    pub weight: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Graph,
    Tree,
}

/// A graph or tree; `labels[k - 1]` is the vertex carrying label `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    pub kind: WitnessKind,
    pub vertices: usize,
    pub labels: Vec<usize>,
    pub edges: Vec<EdgeEntry>,
}

pub enum Witness {
    Graph(WeightedGraph),
    Tree(WeightedTree),
}

fn edge_entries(edges: &[Edge]) -> Vec<EdgeEntry> {
    edges.iter().map(|e| EdgeEntry { u: e.u, v: e.v, weight: format_rational(&e.weight) }).collect()
}

impl WitnessDocument {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        Self {
            kind: WitnessKind::Graph,
            vertices: g.vertex_count(),
            labels: g.labeled().to_vec(),
            edges: edge_entries(g.edges()),
        }
    }

    pub fn from_tree(t: &WeightedTree) -> Self {
        Self {
            kind: WitnessKind::Tree,
            vertices: t.vertex_count(),
            labels: t.leaf_vertices().to_vec(),
            edges: edge_entries(t.edges()),
        }
    }

    /// Accepts a bare witness or any document with a `witness` field.
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let inner = match value.get("witness") {
            Some(w) => w.clone(),
            None => value,
        };
        serde_json::from_value(inner).map_err(|e| Error::Parse(format!("witness: {e}")))
    }

    pub fn to_witness(&self) -> Result<Witness> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let w = parse_rational(&e.weight).map_err(|err| Error::Parse(format!("edges[{k}].weight: {err}")))?;
                Ok(Edge::new(e.u, e.v, w))
            })
            .collect::<Result<Vec<_>>>()?;
        match self.kind {
            WitnessKind::Graph => Ok(Witness::Graph(WeightedGraph::new(self.vertices, edges, self.labels.clone())?)),
            WitnessKind::Tree => Ok(Witness::Tree(WeightedTree::new(self.vertices, edges, self.labels.clone())?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairValue {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

pub fn distance_entries(d: &DissimilarityVector) -> Vec<PairValue> {
    d.iter().map(|(p, v)| PairValue { i: p.i(), j: p.j(), value: format_rational(v) }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheckEntry {
    pub i: usize,
    pub j: usize,
    pub distance: String,
    pub lo: String,
    pub hi: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub passed: bool,
    pub open: bool,
    pub pairs: Vec<PairCheckEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nonpositive_edges: Vec<EdgeEntry>,
}

impl ReportDocument {
    pub fn from_report(r: &VerifyReport) -> Self {
        Self {
            passed: r.passed(),
            open: r.open,
            pairs: r
                .pairs
                .iter()
                .map(|p| PairCheckEntry {
                    i: p.pair.i(),
                    j: p.pair.j(),
                    distance: format_rational(&p.distance),
                    lo: format_rational(&p.lo),
                    hi: format_rational(&p.hi),
                    ok: p.ok,
                })
                .collect(),
            nonpositive_edges: r
                .nonpositive_edges
                .iter()
                .map(|e| EdgeEntry { u: e.u, v: e.v, weight: format_rational(&e.weight) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainViolation {
    pub pair: [usize; 2],
    pub chain: Vec<usize>,
    pub slack: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitedRow {
    pub row: usize,
    pub label: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    /// `["star"]` or the candidate's splits, e.g. `["(1,2|3,4)"]`.
    pub candidate: Vec<String>,
    pub residual: String,
    pub rows: Vec<CitedRow>,
}

impl CertificateEntry {
    pub fn new(c: &CandidateCertificate, family: &IntervalFamily) -> Result<Self> {
        let candidate = match &c.kind {
            CandidateKind::Star => vec!["star".to_string()],
            CandidateKind::Splits { splits } => splits.iter().map(|s| s.to_string()).collect(),
        };
        let labels = c.cited_rows(family)?;
        let rows = c
            .certificate
            .multipliers
            .iter()
            .zip(labels)
            .map(|(m, label)| CitedRow { row: m.row, label: label.to_string(), coeff: format_rational(&m.coeff) })
            .collect();
        Ok(Self { candidate, residual: format_rational(&c.certificate.residual), rows })
    }
}

/// Output of `decide`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub n: usize,
    pub variant: String,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splits: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<PairValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<ReportDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ChainViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates_refuted: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<CertificateEntry>>,
}

impl ResultDocument {
    fn empty(family: &IntervalFamily, feasible: bool) -> Self {
        Self {
            n: family.n(),
            variant: family.variant().name().to_string(),
            feasible,
            witness: None,
            splits: None,
            distances: None,
            verification: None,
            violation: None,
            candidates_refuted: None,
            certificates: None,
        }
    }

    pub fn from_graph(d: &GraphDecision, family: &IntervalFamily) -> Result<Self> {
        let mut doc = Self::empty(family, d.is_feasible());
        match d {
            GraphDecision::Feasible { witness } => {
                let report = crate::verify::verify_graph(witness, family)?;
                doc.witness = Some(WitnessDocument::from_graph(witness));
                doc.distances = Some(distance_entries(&witness.two_weights()?));
                doc.verification = Some(ReportDocument::from_report(&report));
            }
            GraphDecision::Infeasible { pair, chain, slack } => {
                doc.violation = Some(ChainViolation {
                    pair: [pair.i(), pair.j()],
                    chain: chain.clone(),
                    slack: format_rational(slack),
                });
            }
        }
        Ok(doc)
    }

    pub fn from_tree(d: &TreeDecision, family: &IntervalFamily, emit_certificates: bool) -> Result<Self> {
        let mut doc = Self::empty(family, d.is_feasible());
        match d {
            TreeDecision::Feasible { witness, distances, splits } => {
                let report = crate::verify::verify_tree(witness, family)?;
                doc.witness = Some(WitnessDocument::from_tree(witness));
                doc.splits = Some(splits.members().iter().map(|s| s.to_string()).collect());
                doc.distances = Some(distance_entries(distances));
                doc.verification = Some(ReportDocument::from_report(&report));
            }
            TreeDecision::Infeasible { certificates } => {
                doc.candidates_refuted = Some(certificates.len());
                if emit_certificates {
                    doc.certificates =
                        Some(certificates.iter().map(|c| CertificateEntry::new(c, family)).collect::<Result<_>>()?);
                }
            }
        }
        Ok(doc)
    }
}

/// Output of `crosscheck`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckDocument {
    pub n: usize,
    pub variant: String,
    pub strategy: String,
    pub seeds: u64,
    pub feasible: u64,
    pub infeasible: u64,
    pub agreed: u64,
    pub disagreements: Vec<u64>,
    /// Extra per-seed notes for disagreements.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<u64, String>,
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = r#"{
      "n": 3, "variant": "graph-closed",
      "intervals": [
        {"i": 1, "j": 2, "lo": "4", "hi": "5"},
        {"i": 1, "j": 3, "lo": "2", "hi": "2"},
        {"i": 2, "j": 3, "lo": "2", "hi": "2"}
      ]
    }"#;

    #[test]
    fn instance_round_trip() {
        let doc = InstanceDocument::parse(TRIANGLE).unwrap();
        let f = doc.to_family().unwrap();
        assert_eq!(f.variant(), Variant::GraphClosed);
        assert_eq!(InstanceDocument::from_family(&f), doc);
    }

    #[test]
    fn duplicate_pair_is_named() {
        let text = TRIANGLE.replace(r#""i": 2, "j": 3"#, r#""i": 2, "j": 1"#);
        let err = InstanceDocument::parse(&text).unwrap().to_family().unwrap_err();
        assert!(err.to_string().contains("duplicate pair {1,2}"), "{err}");
    }

    #[test]
    fn diagnostics_name_fields() {
        let text = TRIANGLE.replace(r#""lo": "4""#, r#""lo": "4.5""#);
        let err = InstanceDocument::parse(&text).unwrap().to_family().unwrap_err();
        assert!(err.to_string().contains("intervals[0].lo"), "{err}");
        let text = TRIANGLE.replace("graph-closed", "graph-open");
        assert!(InstanceDocument::parse(&text).unwrap().to_family().is_err());
        let text = TRIANGLE.replace(r#""lo": "4""#, r#""lo": 4"#);
        assert!(InstanceDocument::parse(&text).is_err());
        let text =
            TRIANGLE.replace(r#"{"i": 2, "j": 3, "lo": "2", "hi": "2"}"#, r#"{"i": 2, "j": 4, "lo": "2", "hi": "2"}"#);
        assert!(InstanceDocument::parse(&text).unwrap().to_family().is_err());
    }

    #[test]
    fn witness_accepts_wrapped_documents() {
        let bare = r#"{"kind": "tree", "vertices": 2, "labels": [0, 1], "edges": [{"u": 0, "v": 1, "weight": "3/2"}]}"#;
        let wrapped = format!(r#"{{"feasible": true, "witness": {bare}}}"#);
        assert_eq!(WitnessDocument::parse(bare).unwrap(), WitnessDocument::parse(&wrapped).unwrap());
        assert!(matches!(WitnessDocument::parse(bare).unwrap().to_witness().unwrap(), Witness::Tree(_)));
    }

    #[test]
    fn degree_two_tree_is_rejected() {
        let text = r#"{"kind": "tree", "vertices": 3, "labels": [0, 2],
            "edges": [{"u": 0, "v": 1, "weight": "1"}, {"u": 1, "v": 2, "weight": "1"}]}"#;
        assert!(WitnessDocument::parse(text).unwrap().to_witness().is_err());
    }
}
