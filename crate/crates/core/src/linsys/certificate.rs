use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Constraint, LinExpr, Sense};
use crate::rational::{format_rational, serde_text, Rational};

/// Multipliers whose weighted sum of constraint expressions collapses to a
/// contradictory constant. Multipliers on equality rows may be negative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub multipliers: Vec<Multiplier>,
    #[serde(with = "serde_text")]
    pub residual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplier {
    pub row: usize,
    #[serde(with = "serde_text")]
    pub coeff: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("row {0} does not exist")]
    UnknownRow(usize),
    #[error("negative multiplier on inequality row {0}")]
    NegativeMultiplier(usize),
    #[error("combination still depends on x{0}")]
    VariablesRemain(usize),
    #[error("combined constant is {actual}, certificate claims {claimed}")]
    ResidualMismatch { claimed: String, actual: String },
    #[error("combination {0} is not contradictory")]
    NotContradictory(String),
}

impl Certificate {
    pub fn new(multipliers: impl IntoIterator<Item = (usize, Rational)>, residual: Rational) -> Self {
        let multipliers = multipliers
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(row, coeff)| Multiplier { row, coeff })
            .collect();
        Self { multipliers, residual }
    }

    /// The weighted sum of the cited rows.
    pub fn combination(&self, system: &[Constraint]) -> Result<LinExpr, CertificateError> {
        let mut sum = LinExpr::zero();
        for m in &self.multipliers {
            let row = system.get(m.row).ok_or(CertificateError::UnknownRow(m.row))?;
            sum.add_scaled(&row.expr, &m.coeff);
        }
        Ok(sum)
    }

    /// Check that the certificate proves `system` infeasible.
    pub fn validate(&self, system: &[Constraint]) -> Result<(), CertificateError> {
        let mut strict_weight = false;
        for m in &self.multipliers {
            let row = system.get(m.row).ok_or(CertificateError::UnknownRow(m.row))?;
            match row.sense {
                Sense::Zero => {}
                Sense::NonNegative | Sense::Positive if m.coeff.is_negative() => {
                    return Err(CertificateError::NegativeMultiplier(m.row));
                }
                Sense::Positive => strict_weight |= m.coeff.is_positive(),
                Sense::NonNegative => {}
            }
        }
        let sum = self.combination(system)?;
        if let Some(var) = sum.vars().next() {
            return Err(CertificateError::VariablesRemain(var));
        }
        let actual = sum.constant_term();
        if *actual != self.residual {
            return Err(CertificateError::ResidualMismatch {
                claimed: format_rational(&self.residual),
                actual: format_rational(actual),
            });
        }
        if actual.is_negative() || (actual.is_zero() && strict_weight) {
            Ok(())
        } else {
            let rel = if strict_weight { ">" } else { ">=" };
            Err(CertificateError::NotContradictory(format!("{} {rel} 0", format_rational(actual))))
        }
    }

    pub fn is_valid(&self, system: &[Constraint]) -> bool {
        self.validate(system).is_ok()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.multipliers.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*[{}]", format_rational(&m.coeff), m.row)?;
        }
        write!(f, " = {}", format_rational(&self.residual))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn x() -> LinExpr {
        LinExpr::var(0)
    }

    #[test]
    fn strict_zero_residual() {
        let sys = [Constraint::gt(x()), Constraint::ge(x().negated())];
        let cert = Certificate::new([(0, int(1)), (1, int(1))], int(0));
        assert!(cert.is_valid(&sys));
    }

    #[test]
    fn nonstrict_zero_residual_is_not_a_contradiction() {
        let sys = [Constraint::ge(x()), Constraint::ge(x().negated())];
        let cert = Certificate::new([(0, int(1)), (1, int(1))], int(0));
        assert!(matches!(cert.validate(&sys), Err(CertificateError::NotContradictory(_))));
    }

    #[test]
    fn rejects_bad_certificates() {
        let sys = [Constraint::gt(x()), Constraint::ge(x().negated())];
        let neg = Certificate::new([(0, int(-1)), (1, int(-1))], int(0));
        assert_eq!(neg.validate(&sys), Err(CertificateError::NegativeMultiplier(0)));
        let partial = Certificate::new([(0, int(1))], int(0));
        assert_eq!(partial.validate(&sys), Err(CertificateError::VariablesRemain(0)));
        let wrong = Certificate::new([(0, int(1)), (1, int(1))], int(-1));
        assert!(matches!(wrong.validate(&sys), Err(CertificateError::ResidualMismatch { .. })));
        let missing = Certificate::new([(5, int(1))], int(0));
        assert_eq!(missing.validate(&sys), Err(CertificateError::UnknownRow(5)));
    }

    #[test]
    fn equality_rows_take_either_sign() {
        // x = 1 and x - 2 >= 0: -(x - 1) + (x - 2) = -1
        let sys = [
            Constraint::eq(LinExpr::from_terms([(0, int(1))], int(-1))),
            Constraint::ge(LinExpr::from_terms([(0, int(1))], int(-2))),
        ];
        let cert = Certificate::new([(0, int(-1)), (1, int(1))], int(-1));
        assert!(cert.is_valid(&sys));
    }
}
