//! Realization by weighted trees.
//!
//! A family is realizable by a tree iff for some fat, transitive and
//! saturated split system `S` the split equalities of `S` together with the
//! interval bounds (and, for positive trees, triangle and split
//! inequalities) are feasible. Candidates come from
//! [`enumerate_candidate_systems`](crate::splits::enumerate_candidate_systems).

mod construct;
mod decide;
mod system;

pub use construct::construct_tree_from_d;
pub use decide::{decide_star, decide_tree, CandidateCertificate, CandidateKind, TreeDecision};
pub use system::{build_system, star_system, RowLabel, TreeSystem};
