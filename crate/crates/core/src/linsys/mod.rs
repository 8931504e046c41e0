//! Exact linear algebra over distance unknowns.
//!
//! Unknowns are plain `usize` ids; for distance systems the id of `x_I` is
//! the rank of the pair `I`. Constraints have the form `expr > 0`,
//! `expr >= 0` or `expr = 0`.

mod certificate;
mod expr;
mod fm;
mod solve;

pub use certificate::{Certificate, CertificateError, Multiplier};
pub use expr::{Constraint, LinExpr, Sense};
pub use fm::{fm_eliminate, fm_feasible, FmOutcome};
pub use solve::{sistug_parametrization, solve_equalities, split_equalities, Inconsistent, Parametrization};
