use thiserror::Error;

use crate::family::Variant;
use crate::splits::SplitViolation;

/// Errors raised by the decision engine and its data model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed structure: {0}")]
    Structure(String),
    #[error("invalid interval family: {0}")]
    Family(String),
    #[error("operation does not support variant {0}")]
    UnsupportedVariant(Variant),
    #[error("split system is not {predicate}: {violation}")]
    SplitPredicate { predicate: &'static str, violation: Box<SplitViolation> },
    #[error("four-point condition fails on quartet {quartet:?}")]
    FourPoint { quartet: [usize; 4] },
    #[error("construction produced nonpositive edge weight {weight} on a positive tree")]
    NonPositiveEdge { weight: String },
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid certificate: {0}")]
    Certificate(#[from] crate::linsys::CertificateError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
