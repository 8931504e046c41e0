use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{IntervalFamily, Variant};
use crate::linsys::{solve_equalities, split_equalities, Constraint, LinExpr, Parametrization, Sense};
use crate::pair::{all_pairs, pair_count, PairIndex};
use crate::rational::{int, Rational};
use crate::splits::{quartets, QuartetSplit, SplitSystem};

/// What a row of a tree system says, in terms of distance unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RowLabel {
    /// `x_I - lo_I` (> 0 or >= 0)
    Lower { pair: PairIndex },
    /// `hi_I - x_I`
    Upper { pair: PairIndex },
    /// `x_ac + x_cb - x_ab > 0`
    Triangle { pair: PairIndex, via: usize },
    /// `x_ac + x_bd - x_ab - x_cd > 0` for the only split `(a,b|c,d)` of a quartet
    Split { split: QuartetSplit },
    /// `x_I > 0`
    Positive { pair: PairIndex },
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowLabel::Lower { pair } => write!(f, "lower {pair}"),
            RowLabel::Upper { pair } => write!(f, "upper {pair}"),
            RowLabel::Triangle { pair, via } => write!(f, "triangle {pair} via {via}"),
            RowLabel::Split { split } => write!(f, "split {split}"),
            RowLabel::Positive { pair } => write!(f, "positive {pair}"),
        }
    }
}

/// Constraints over the free unknowns of the split equalities.
#[derive(Debug, Clone)]
pub struct TreeSystem {
    pub param: Parametrization,
    pub constraints: Vec<Constraint>,
    pub labels: Vec<RowLabel>,
}

fn x(n: usize, a: usize, b: usize) -> usize {
    PairIndex::of(a, b).rank(n)
}

/// Interval rows: for each pair in lexicographic order, lower then upper.
/// Rows `2r` and `2r + 1` belong to the pair of rank `r`.
pub(crate) fn interval_rows(
    family: &IntervalFamily,
    distance: impl Fn(PairIndex) -> LinExpr,
) -> Vec<(RowLabel, Constraint)> {
    let sense = if family.variant().is_open() { Sense::Positive } else { Sense::NonNegative };
    let mut rows = Vec::with_capacity(2 * pair_count(family.n()));
    for (pair, iv) in family.intervals() {
        let d = distance(pair);
        let mut lower = d.clone();
        lower.add_constant(&-iv.lo.clone());
        let mut upper = d.negated();
        upper.add_constant(&iv.hi);
        rows.push((RowLabel::Lower { pair }, Constraint::new(lower, sense)));
        rows.push((RowLabel::Upper { pair }, Constraint::new(upper, sense)));
    }
    rows
}

/// All rows over the raw distance unknowns (id = pair rank).
pub(crate) fn raw_rows(splits: &SplitSystem, family: &IntervalFamily) -> Vec<(RowLabel, Constraint)> {
    let n = family.n();
    let mut rows = interval_rows(family, |p| LinExpr::var(p.rank(n)));
    if family.variant() != Variant::TreePositiveOpen {
        return rows;
    }
    let zero = Rational::zero();
    for pair in all_pairs(n) {
        let (a, b) = (pair.i(), pair.j());
        for c in (1..=n).filter(|&c| c != a && c != b) {
            let e =
                LinExpr::from_terms([(x(n, a, c), int(1)), (x(n, c, b), int(1)), (x(n, a, b), int(-1))], zero.clone());
            rows.push((RowLabel::Triangle { pair, via: c }, Constraint::gt(e)));
        }
    }
    for q in quartets(n) {
        if let Some(split) = splits.unique_split(q) {
            let ([a, b], [c, d]) = split.pairs();
            let e = LinExpr::from_terms(
                [(x(n, a, c), int(1)), (x(n, b, d), int(1)), (x(n, a, b), int(-1)), (x(n, c, d), int(-1))],
                zero.clone(),
            );
            rows.push((RowLabel::Split { split }, Constraint::gt(e)));
        }
    }
    for pair in all_pairs(n) {
        rows.push((RowLabel::Positive { pair }, Constraint::gt(LinExpr::var(pair.rank(n)))));
    }
    rows
}

pub(crate) fn check_inputs(splits: &SplitSystem, family: &IntervalFamily) -> Result<()> {
    if !family.variant().is_tree() {
        return Err(Error::UnsupportedVariant(family.variant()));
    }
    if splits.n() != family.n() {
        return Err(Error::Structure(format!("split system over {} labels, family over {}", splits.n(), family.n())));
    }
    splits.check_all()
}

pub(crate) fn equality_parametrization(splits: &SplitSystem) -> Parametrization {
    solve_equalities(&split_equalities(splits), 0..pair_count(splits.n())).expect("split equalities are homogeneous")
}

pub(crate) fn assemble(param: &Parametrization, splits: &SplitSystem, family: &IntervalFamily) -> TreeSystem {
    let (labels, constraints) = raw_rows(splits, family)
        .into_iter()
        .map(|(label, c)| (label, Constraint::new(param.substitute(&c.expr), c.sense)))
        .unzip();
    TreeSystem { param: param.clone(), constraints, labels }
}

/// The linear system whose feasibility decides whether some tree with
/// split system `splits` realizes `family`.
pub fn build_system(splits: &SplitSystem, family: &IntervalFamily) -> Result<TreeSystem> {
    check_inputs(splits, family)?;
    Ok(assemble(&equality_parametrization(splits), splits, family))
}

/// Interval rows over pendant weights `y_1..y_n` (ids `0..n`) of a star.
pub fn star_system(family: &IntervalFamily) -> Result<(Vec<RowLabel>, Vec<Constraint>)> {
    if family.variant() != Variant::StarOpen {
        return Err(Error::UnsupportedVariant(family.variant()));
    }
    let rows =
        interval_rows(family, |p| LinExpr::from_terms([(p.i() - 1, int(1)), (p.j() - 1, int(1))], Rational::zero()));
    Ok(rows.into_iter().unzip())
}
