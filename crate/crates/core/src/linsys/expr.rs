use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{format_rational, Rational};

/// `sum coeffs[id] * x_id + constant`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinExpr {
    coeffs: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: Rational) -> Self {
        Self { coeffs: BTreeMap::new(), constant: value }
    }

    pub fn var(id: usize) -> Self {
        Self::term(id, Rational::from_integer(1.into()))
    }

    pub fn term(id: usize, coeff: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(id, &coeff);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rational)>, constant: Rational) -> Self {
        let mut e = Self::constant(constant);
        for (id, c) in terms {
            e.add_term(id, &c);
        }
        e
    }

    pub fn add_term(&mut self, id: usize, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(id).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&id);
        }
    }

    pub fn add_constant(&mut self, value: &Rational) {
        self.constant += value;
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &LinExpr, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (&id, c) in &other.coeffs {
            self.add_term(id, &(c * factor));
        }
        self.constant += &other.constant * factor;
    }

    pub fn scaled(&self, factor: &Rational) -> LinExpr {
        let mut out = LinExpr::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn negated(&self) -> LinExpr {
        self.scaled(&-Rational::from_integer(1.into()))
    }

    pub fn coeff(&self, id: usize) -> Rational {
        self.coeffs.get(&id).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    /// Replace `x_id` by `replacement`.
    pub fn substitute(&self, id: usize, replacement: &LinExpr) -> LinExpr {
        match self.coeffs.get(&id) {
            None => self.clone(),
            Some(c) => {
                let c = c.clone();
                let mut out = self.clone();
                out.coeffs.remove(&id);
                out.add_scaled(replacement, &c);
                out
            }
        }
    }

    /// Evaluate; `None` when some unknown has no value.
    pub fn eval(&self, values: &BTreeMap<usize, Rational>) -> Option<Rational> {
        let mut acc = self.constant.clone();
        for (id, c) in &self.coeffs {
            acc += c * values.get(id)?;
        }
        Some(acc)
    }

    /// Divide by the absolute value of the first coefficient (or leave a
    /// constant expression alone). Returns the positive divisor used.
    pub(crate) fn normalize(&mut self) -> Rational {
        let Some(first) = self.coeffs.values().next() else {
            return Rational::from_integer(1.into());
        };
        let scale = first.abs();
        let inv = scale.recip();
        for c in self.coeffs.values_mut() {
            *c *= &inv;
        }
        self.constant *= &inv;
        scale
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (id, c) in &self.coeffs {
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let sep = if first { "" } else { " " };
            let body = if mag == Rational::from_integer(1.into()) {
                format!("x{id}")
            } else {
                format!("{}*x{id}", format_rational(&mag))
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sep}{sign} {body}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", format_rational(&self.constant))
        } else if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", format_rational(&self.constant.abs()))
        } else {
            Ok(())
        }
    }
}

/// Relation of an expression to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    /// `expr > 0`
    Positive,
    /// `expr >= 0`
    NonNegative,
    /// `expr = 0`
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub expr: LinExpr,
    pub sense: Sense,
}

impl Constraint {
    pub fn new(expr: LinExpr, sense: Sense) -> Self {
        Self { expr, sense }
    }

    pub fn gt(expr: LinExpr) -> Self {
        Self::new(expr, Sense::Positive)
    }

    pub fn ge(expr: LinExpr) -> Self {
        Self::new(expr, Sense::NonNegative)
    }

    pub fn eq(expr: LinExpr) -> Self {
        Self::new(expr, Sense::Zero)
    }

    pub fn is_strict(&self) -> bool {
        self.sense == Sense::Positive
    }

    /// Holds exactly at `values`. Unassigned unknowns make it fail.
    pub fn holds(&self, values: &BTreeMap<usize, Rational>) -> bool {
        let Some(v) = self.expr.eval(values) else { return false };
        match self.sense {
            Sense::Positive => v.is_positive(),
            Sense::NonNegative => !v.is_negative(),
            Sense::Zero => v.is_zero(),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.sense {
            Sense::Positive => ">",
            Sense::NonNegative => ">=",
            Sense::Zero => "=",
        };
        write!(f, "{} {rel} 0", self.expr)
    }
}
