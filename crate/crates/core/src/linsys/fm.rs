use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};

use super::solve::{add_history, History, Reduced};
use super::{Certificate, Constraint, LinExpr, Sense};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FmOutcome {
    Sample(BTreeMap<usize, Rational>),
    Infeasible(Certificate),
}

impl FmOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FmOutcome::Sample(_))
    }

    pub fn sample(&self) -> Option<&BTreeMap<usize, Rational>> {
        match self {
            FmOutcome::Sample(s) => Some(s),
            FmOutcome::Infeasible(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            FmOutcome::Sample(_) => None,
            FmOutcome::Infeasible(c) => Some(c),
        }
    }
}

/// `p * b + q * a` where `a`, `b` are the absolute coefficients of `var`
/// in the lower bound `p` and upper bound `q`; `var` cancels.
fn combine_coeffs(p: &LinExpr, q: &LinExpr, var: usize) -> (Rational, Rational) {
    (-q.coeff(var), p.coeff(var))
}

/// One elimination step on a system of strict and nonstrict inequalities.
pub fn fm_eliminate(system: &[Constraint], var: usize) -> Result<Vec<Constraint>> {
    if system.iter().any(|c| c.sense == Sense::Zero) {
        return Err(Error::Structure("equalities must be substituted before elimination".into()));
    }
    let (pos, neg): (Vec<_>, Vec<_>) =
        system.iter().filter(|c| !c.expr.coeff(var).is_zero()).partition(|c| c.expr.coeff(var).is_positive());
    let mut out = Vec::with_capacity(pos.len() * neg.len());
    for p in &pos {
        for q in &neg {
            let (fp, fq) = combine_coeffs(&p.expr, &q.expr, var);
            let mut expr = p.expr.scaled(&fp);
            expr.add_scaled(&q.expr, &fq);
            let sense = if p.is_strict() || q.is_strict() { Sense::Positive } else { Sense::NonNegative };
            out.push(Constraint::new(expr, sense));
        }
    }
    out.extend(system.iter().filter(|c| c.expr.coeff(var).is_zero()).cloned());
    Ok(out)
}

#[derive(Debug, Clone)]
struct Row {
    expr: LinExpr,
    strict: bool,
    hist: History,
    support: FixedBitSet,
}

impl Row {
    fn is_contradiction(&self) -> bool {
        let c = self.expr.constant_term();
        self.expr.is_constant() && (c.is_negative() || (c.is_zero() && self.strict))
    }

    fn certificate(&self) -> Certificate {
        Certificate::new(self.hist.clone(), self.expr.constant_term().clone())
    }

    fn combine(&self, other: &Row, var: usize) -> Row {
        let (fp, fq) = combine_coeffs(&self.expr, &other.expr, var);
        let mut expr = self.expr.scaled(&fp);
        expr.add_scaled(&other.expr, &fq);
        let scale = expr.normalize().recip();
        let mut hist = History::new();
        add_history(&mut hist, &self.hist, &(&fp * &scale));
        add_history(&mut hist, &other.hist, &(&fq * &scale));
        let mut support = self.support.clone();
        support.union_with(&other.support);
        Row { expr, strict: self.strict || other.strict, hist, support }
    }

    /// `self` implies `other` when both have the same variable part.
    fn dominates(&self, other: &Row) -> bool {
        let (a, b) = (self.expr.constant_term(), other.expr.constant_term());
        a < b || (a == b && (self.strict || !other.strict))
    }
}

/// Drop parallel rows implied by a tighter twin, then rows whose support
/// strictly contains another row's support.
fn prune(rows: Vec<Row>) -> Vec<Row> {
    let mut best: HashMap<Vec<(usize, Rational)>, usize> = HashMap::new();
    let mut kept: Vec<Row> = Vec::with_capacity(rows.len());
    for row in rows {
        let key: Vec<_> = row.expr.coeffs().iter().map(|(k, v)| (*k, v.clone())).collect();
        match best.get(&key) {
            Some(&at) => {
                if !kept[at].dominates(&row) {
                    kept[at] = row;
                }
            }
            None => {
                best.insert(key, kept.len());
                kept.push(row);
            }
        }
    }
    let counts: Vec<usize> = kept.iter().map(|r| r.support.count_ones(..)).collect();
    let redundant: Vec<bool> = (0..kept.len())
        .map(|b| {
            (0..kept.len()).any(|a| {
                a != b
                    && counts[a] < counts[b]
                    && (kept[a].strict || !kept[b].strict)
                    && kept[a].support.is_subset(&kept[b].support)
            })
        })
        .collect();
    kept.into_iter().zip(redundant).filter(|(_, r)| !r).map(|(row, _)| row).collect()
}

/// Value for `var` strictly inside (or on, for nonstrict bounds) the
/// interval cut out by `rows`, given values for everything else.
fn pick(var: usize, rows: &[(LinExpr, bool)], values: &BTreeMap<usize, Rational>) -> Rational {
    let mut lower: Option<(Rational, bool)> = None;
    let mut upper: Option<(Rational, bool)> = None;
    for (expr, strict) in rows {
        let a = expr.coeff(var);
        let mut rest = expr.clone();
        rest.add_term(var, &-a.clone());
        let r = rest.eval(values).expect("back-substitution order");
        let bound = -r / &a;
        if a.is_positive() {
            let tighter = match &lower {
                None => true,
                Some((b, s)) => bound > *b || (bound == *b && *strict && !s),
            };
            if tighter {
                lower = Some((bound, *strict));
            }
        } else {
            let tighter = match &upper {
                None => true,
                Some((b, s)) => bound < *b || (bound == *b && *strict && !s),
            };
            if tighter {
                upper = Some((bound, *strict));
            }
        }
    }
    match (lower, upper) {
        (Some((lo, _)), Some((hi, _))) if lo == hi => lo,
        (Some((lo, _)), Some((hi, _))) => (lo + hi) / int(2),
        (Some((lo, _)), None) => lo + Rational::one(),
        (None, Some((hi, _))) => hi - Rational::one(),
        (None, None) => Rational::zero(),
    }
}

fn run(system: &[Constraint], pruning: bool) -> FmOutcome {
    let reduced =
        Reduced::build(system.iter().enumerate().filter(|(_, c)| c.sense == Sense::Zero).map(|(k, c)| (k, &c.expr)));
    let reduced = match reduced {
        Ok(r) => r,
        Err(inc) => {
            let flip = if inc.constant.is_positive() { -Rational::one() } else { Rational::one() };
            let mults = inc.multipliers.into_iter().map(|(k, c)| (k, c * &flip));
            return FmOutcome::Infeasible(Certificate::new(mults, inc.constant * &flip));
        }
    };

    let mut rows = Vec::new();
    for (k, c) in system.iter().enumerate().filter(|(_, c)| c.sense != Sense::Zero) {
        let mut expr = c.expr.clone();
        let mut hist: History = [(k, Rational::one())].into_iter().collect();
        reduced.eliminate(&mut expr, &mut hist);
        let mut support = FixedBitSet::with_capacity(system.len());
        support.insert(k);
        rows.push(Row { expr, strict: c.is_strict(), hist, support });
    }

    let mut seen: BTreeSet<usize> = rows.iter().flat_map(|r| r.expr.vars()).collect();
    let mut stages: Vec<(usize, Vec<(LinExpr, bool)>)> = Vec::new();
    loop {
        let mut live = Vec::with_capacity(rows.len());
        for row in rows {
            if !row.expr.is_constant() {
                live.push(row);
            } else if row.is_contradiction() {
                return FmOutcome::Infeasible(row.certificate());
            }
        }
        rows = live;
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for row in &rows {
            for v in row.expr.vars() {
                *counts.entry(v).or_default() += 1;
            }
        }
        let Some(var) = counts.iter().min_by_key(|(v, c)| (**c, **v)).map(|(v, _)| *v) else {
            break;
        };
        let (with, without): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| !r.expr.coeff(var).is_zero());
        stages.push((var, with.iter().map(|r| (r.expr.clone(), r.strict)).collect()));
        let (pos, neg): (Vec<&Row>, Vec<&Row>) = with.iter().partition(|r| r.expr.coeff(var).is_positive());
        let limit = stages.len() + 1;
        let mut next = without;
        for p in &pos {
            for q in &neg {
                if pruning && p.support.union(&q.support).count() > limit {
                    continue;
                }
                let row = p.combine(q, var);
                if row.expr.is_constant() {
                    if row.is_contradiction() {
                        return FmOutcome::Infeasible(row.certificate());
                    }
                    continue;
                }
                next.push(row);
            }
        }
        rows = if pruning { prune(next) } else { next };
    }

    let mut values: BTreeMap<usize, Rational> = BTreeMap::new();
    for (var, _) in &stages {
        seen.remove(var);
    }
    for v in seen {
        values.insert(v, Rational::zero());
    }
    for (var, stage_rows) in stages.iter().rev() {
        let value = pick(*var, stage_rows, &values);
        values.insert(*var, value);
    }
    for c in system {
        for v in c.expr.vars() {
            if !reduced.rows.contains_key(&v) {
                values.entry(v).or_insert_with(Rational::zero);
            }
        }
    }
    for (&pivot, (row, _)) in &reduced.rows {
        let mut value = row.negated();
        value.add_term(pivot, &Rational::one());
        let v = value.eval(&values).expect("pivot rows mention free unknowns only");
        values.insert(pivot, v);
    }
    FmOutcome::Sample(values)
}

/// Decide a mixed system of `> 0`, `>= 0` and `= 0` constraints exactly.
///
/// Equalities are solved first; the remaining inequalities are eliminated
/// one unknown at a time (fewest occurrences first, lowest id on ties).
/// A feasible outcome carries a sample checked against every constraint;
/// an infeasible one carries a certificate over the input rows.
pub fn fm_feasible(system: &[Constraint]) -> FmOutcome {
    let outcome = run(system, true);
    match &outcome {
        FmOutcome::Sample(values) if !system.iter().all(|c| c.holds(values)) => {
            let retry = run(system, false);
            if let FmOutcome::Sample(values) = &retry {
                assert!(system.iter().all(|c| c.holds(values)), "elimination produced a bad sample");
            }
            retry
        }
        FmOutcome::Infeasible(cert) => {
            debug_assert!(cert.is_valid(system), "invalid certificate {cert}");
            outcome
        }
        FmOutcome::Sample(_) => outcome,
    }
}
