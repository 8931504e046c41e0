use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{Constraint, LinExpr, Sense};
use crate::error::Result;
use crate::pair::{pair_count, PairIndex};
use crate::rational::{int, Rational};
use crate::splits::SplitSystem;

/// Combination of input rows, keyed by row id.
pub(crate) type History = BTreeMap<usize, Rational>;

pub(crate) fn add_history(acc: &mut History, other: &History, factor: &Rational) {
    for (&row, c) in other {
        let entry = acc.entry(row).or_insert_with(Rational::zero);
        *entry += c * factor;
        if entry.is_zero() {
            acc.remove(&row);
        }
    }
}

/// One equality `x_I - x_J - x_K + x_L = 0` per split `(a,b|c,d)`.
pub fn split_equalities(system: &SplitSystem) -> Vec<Constraint> {
    let n = system.n();
    system
        .members()
        .into_iter()
        .map(|split| {
            let ([a, b], [c, d]) = split.pairs();
            let id = |p: usize, q: usize| PairIndex::of(p, q).rank(n);
            let expr = LinExpr::from_terms(
                [(id(a, c), int(1)), (id(b, c), int(-1)), (id(a, d), int(-1)), (id(b, d), int(1))],
                Rational::zero(),
            );
            Constraint::eq(expr)
        })
        .collect()
}

/// A combination of equality rows reducing to a nonzero constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistent {
    pub multipliers: Vec<(usize, Rational)>,
    pub constant: Rational,
}

/// Pivot rows in reduced echelon form: each row has coefficient 1 on its
/// pivot and mentions no other pivot.
#[derive(Debug, Default)]
pub(crate) struct Reduced {
    pub(crate) rows: BTreeMap<usize, (LinExpr, History)>,
}

impl Reduced {
    pub(crate) fn build<'a>(
        eqs: impl IntoIterator<Item = (usize, &'a LinExpr)>,
    ) -> std::result::Result<Self, Inconsistent> {
        let mut red = Reduced::default();
        for (id, expr) in eqs {
            let mut row = expr.clone();
            let mut hist: History = [(id, Rational::one())].into_iter().collect();
            red.eliminate(&mut row, &mut hist);
            let Some((pivot, coeff)) = row.coeffs().iter().next().map(|(&p, c)| (p, c.clone())) else {
                if row.constant_term().is_zero() {
                    continue;
                }
                return Err(Inconsistent {
                    multipliers: hist.into_iter().collect(),
                    constant: row.constant_term().clone(),
                });
            };
            let inv = coeff.recip();
            row = row.scaled(&inv);
            hist = hist.into_iter().map(|(k, c)| (k, c * &inv)).collect();
            for (other, other_hist) in red.rows.values_mut() {
                let c = other.coeff(pivot);
                if !c.is_zero() {
                    other.add_scaled(&row, &-c.clone());
                    add_history(other_hist, &hist, &-c);
                }
            }
            red.rows.insert(pivot, (row, hist));
        }
        Ok(red)
    }

    /// Remove every pivot unknown from `expr`, tracking the rows used.
    pub(crate) fn eliminate(&self, expr: &mut LinExpr, hist: &mut History) {
        for (&pivot, (row, row_hist)) in &self.rows {
            let c = expr.coeff(pivot);
            if !c.is_zero() {
                expr.add_scaled(row, &-c.clone());
                add_history(hist, row_hist, &-c);
            }
        }
    }

    fn parametrization(self, unknowns: BTreeSet<usize>) -> Parametrization {
        let pivots: BTreeMap<usize, LinExpr> = self
            .rows
            .into_iter()
            .map(|(p, (row, _))| {
                let mut value = row.negated();
                value.add_term(p, &Rational::one());
                (p, value)
            })
            .collect();
        Parametrization::from_parts(unknowns, pivots)
    }
}

/// Solution set of a linear equality system: every unknown is either free
/// or a pivot given as an affine expression of free unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parametrization {
    unknowns: Vec<usize>,
    pivots: BTreeMap<usize, LinExpr>,
    free: Vec<usize>,
}

impl Parametrization {
    fn from_parts(mut unknowns: BTreeSet<usize>, pivots: BTreeMap<usize, LinExpr>) -> Self {
        for (p, e) in &pivots {
            unknowns.insert(*p);
            unknowns.extend(e.vars());
        }
        let free = unknowns.iter().copied().filter(|u| !pivots.contains_key(u)).collect();
        Self { unknowns: unknowns.into_iter().collect(), pivots, free }
    }

    /// Every unknown free.
    pub fn identity(unknowns: impl IntoIterator<Item = usize>) -> Self {
        Self::from_parts(unknowns.into_iter().collect(), BTreeMap::new())
    }

    pub fn unknowns(&self) -> &[usize] {
        &self.unknowns
    }

    pub fn pivots(&self) -> &BTreeMap<usize, LinExpr> {
        &self.pivots
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The unknown as an expression over free unknowns.
    pub fn expr_of(&self, id: usize) -> LinExpr {
        self.pivots.get(&id).cloned().unwrap_or_else(|| LinExpr::var(id))
    }

    /// Rewrite `expr` over free unknowns only.
    pub fn substitute(&self, expr: &LinExpr) -> LinExpr {
        let mut out = LinExpr::constant(expr.constant_term().clone());
        for (&id, c) in expr.coeffs() {
            match self.pivots.get(&id) {
                Some(value) => out.add_scaled(value, c),
                None => out.add_term(id, c),
            }
        }
        out
    }

    /// Values for all unknowns from values of the free ones (missing
    /// free values default to 0).
    pub fn lift(&self, free_values: &BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        let value = |id: &usize| free_values.get(id).cloned().unwrap_or_else(Rational::zero);
        let free: BTreeMap<usize, Rational> = self.free.iter().map(|f| (*f, value(f))).collect();
        let mut all = free.clone();
        for (&p, e) in &self.pivots {
            all.insert(p, e.eval(&free).expect("pivot mentions a non-free unknown"));
        }
        all
    }

    /// A point with pairwise distinct, irregular free values.
    pub fn generic_point(&self) -> BTreeMap<usize, Rational> {
        let free = self
            .free
            .iter()
            .enumerate()
            .map(|(k, &f)| {
                let k = k as i64;
                (f, Rational::new((k * k + 3 * k + 7).into(), (2 * k + 3).into()))
            })
            .collect();
        self.lift(&free)
    }

    /// The defining equalities `x_p - value_p = 0`.
    pub fn equalities(&self) -> Vec<Constraint> {
        self.pivots
            .iter()
            .map(|(&p, value)| {
                let mut e = value.negated();
                e.add_term(p, &Rational::one());
                Constraint::eq(e)
            })
            .collect()
    }

    /// Every equality in `eqs` holds identically on this solution set.
    pub fn satisfies_identically(&self, eqs: &[Constraint]) -> bool {
        eqs.iter().all(|c| {
            let s = self.substitute(&c.expr);
            s.is_constant() && s.constant_term().is_zero()
        })
    }
}

/// Gaussian elimination, pivoting on the lowest unknown id of each row.
pub fn solve_equalities(
    eqs: &[Constraint],
    unknowns: impl IntoIterator<Item = usize>,
) -> std::result::Result<Parametrization, Inconsistent> {
    let red =
        Reduced::build(eqs.iter().enumerate().filter(|(_, c)| c.sense == Sense::Zero).map(|(k, c)| (k, &c.expr)))?;
    let mut universe: BTreeSet<usize> = unknowns.into_iter().collect();
    for c in eqs {
        universe.extend(c.expr.vars());
    }
    Ok(red.parametrization(universe))
}

/// Leaf-by-leaf parametrization of the split equalities of a fat,
/// transitive and saturated system. Unknown ids are pair ranks.
pub fn sistug_parametrization(system: &SplitSystem) -> Result<Parametrization> {
    system.check_all()?;
    let n = system.n();
    let id = |a: usize, b: usize| PairIndex::of(a, b).rank(n);
    let mut value: BTreeMap<usize, LinExpr> = BTreeMap::new();
    let mut pivots = BTreeMap::new();
    for m in 2..=n {
        for k in 1..m {
            let anchor = (1..m)
                .filter(|&x| x != k)
                .flat_map(|x| (1..k).filter(move |&i| i != x).map(move |i| (x, i)))
                .find(|&(x, i)| system.has(m, x, k, i));
            let expr = match anchor {
                None => LinExpr::var(id(m, k)),
                Some((x, i)) => {
                    let mut e = value[&id(m, i)].clone();
                    e.add_scaled(&value[&id(x, k)], &Rational::one());
                    e.add_scaled(&value[&id(x, i)], &-Rational::one());
                    pivots.insert(id(m, k), e.clone());
                    e
                }
            };
            value.insert(id(m, k), expr);
        }
    }
    debug_assert_eq!(value.len(), pair_count(n));
    Ok(Parametrization::from_parts((0..pair_count(n)).collect(), pivots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::caterpillar5;
    use crate::splits::{tree_induced_splits, QuartetSplit};
    use crate::topology::all_topologies;

    fn system(n: usize, splits: &[(usize, usize, usize, usize)]) -> SplitSystem {
        SplitSystem::from_splits(n, splits.iter().map(|&(a, b, c, d)| QuartetSplit::of(a, b, c, d))).unwrap()
    }

    fn x(a: usize, b: usize) -> usize {
        PairIndex::of(a, b).rank(4)
    }

    #[test]
    fn single_split_equality() {
        let eqs = split_equalities(&system(4, &[(1, 2, 3, 4)]));
        let expected =
            LinExpr::from_terms([(x(1, 3), int(1)), (x(2, 3), int(-1)), (x(1, 4), int(-1)), (x(2, 4), int(1))], int(0));
        assert_eq!(eqs, vec![Constraint::eq(expected)]);
        assert!(split_equalities(&SplitSystem::empty(4)).is_empty());
    }

    #[test]
    fn star_equalities_force_equal_sums() {
        let eqs = split_equalities(&system(4, &[(1, 2, 3, 4), (1, 3, 2, 4), (1, 4, 2, 3)]));
        assert_eq!(eqs.len(), 3);
        let p = solve_equalities(&eqs, 0..6).unwrap();
        assert_eq!(p.dimension(), 4);
        let d = p.generic_point();
        let sum = |a, b, c, e| &d[&x(a, b)] + &d[&x(c, e)];
        assert_eq!(sum(1, 2, 3, 4), sum(1, 3, 2, 4));
        assert_eq!(sum(1, 3, 2, 4), sum(1, 4, 2, 3));
    }

    #[test]
    fn one_row_elimination() {
        let eqs = split_equalities(&system(4, &[(1, 2, 3, 4)]));
        let p = solve_equalities(&eqs, 0..6).unwrap();
        assert_eq!(p.dimension(), 5);
        let expected = LinExpr::from_terms([(x(2, 3), int(1)), (x(1, 4), int(1)), (x(2, 4), int(-1))], int(0));
        assert_eq!(p.pivots().get(&x(1, 3)), Some(&expected));
        assert_eq!(solve_equalities(&[], 0..6).unwrap().dimension(), 6);
    }

    #[test]
    fn inconsistency_is_reported() {
        let eqs = [
            Constraint::eq(LinExpr::from_terms([(0, int(1))], int(-1))),
            Constraint::eq(LinExpr::from_terms([(0, int(2))], int(-3))),
        ];
        let err = solve_equalities(&eqs, 0..1).unwrap_err();
        let mut combo = LinExpr::zero();
        for (row, c) in &err.multipliers {
            combo.add_scaled(&eqs[*row].expr, c);
        }
        assert!(combo.is_constant());
        assert_eq!(combo.constant_term(), &err.constant);
        assert!(!err.constant.is_zero());
    }

    #[test]
    fn sistug_single_split() {
        let s = system(4, &[(1, 2, 3, 4)]);
        let p = sistug_parametrization(&s).unwrap();
        assert_eq!(p.dimension(), 5);
        assert_eq!(p.pivots().keys().copied().collect::<Vec<_>>(), vec![x(2, 4)]);
        assert!(p.satisfies_identically(&split_equalities(&s)));
    }

    #[test]
    fn sistug_rejects_unfat_systems() {
        let err = sistug_parametrization(&SplitSystem::empty(4)).unwrap_err();
        assert!(err.to_string().contains("fat"), "{err}");
    }

    #[test]
    fn sistug_caterpillar() {
        let s = tree_induced_splits(&caterpillar5());
        let eqs = split_equalities(&s);
        let a = sistug_parametrization(&s).unwrap();
        let b = solve_equalities(&eqs, 0..10).unwrap();
        assert!(a.satisfies_identically(&eqs));
        assert_eq!(a.dimension(), b.dimension());
    }

    #[test]
    fn sistug_matches_elimination_on_small_topologies() {
        for n in 4..=6 {
            for t in all_topologies(n) {
                let s = t.induced_splits();
                let eqs = split_equalities(&s);
                let a = sistug_parametrization(&s).unwrap();
                let b = solve_equalities(&eqs, 0..pair_count(n)).unwrap();
                assert!(a.dimension() >= 1);
                assert_eq!(a.dimension(), b.dimension());
                assert!(a.satisfies_identically(&eqs));
                assert!(b.satisfies_identically(&a.equalities()));
            }
        }
    }
}
