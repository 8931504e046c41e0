//! Exact decision procedures for realizing interval-constrained distances
//! by positive-weighted graphs and by weighted trees.
//!
//! All arithmetic is over arbitrary-precision rationals. Graph instances
//! are decided by min-plus closure of the upper bounds; tree instances by
//! searching candidate quartet split systems and solving the resulting
//! linear systems with Fourier-Motzkin elimination, which also yields
//! infeasibility certificates.
//!
//! ```
//! use distrealize::rational::ratio;
//! use distrealize::tree::decide_tree;
//! use distrealize::{IntervalFamily, Strategy, Variant};
//!
//! // The quartet tree with unit edges, each distance widened by 1/2.
//! let family = IntervalFamily::from_fn(4, Variant::TreeGeneralOpen, |p| {
//!     let d = if (p.i(), p.j()) == (1, 2) || (p.i(), p.j()) == (3, 4) { 2 } else { 3 };
//!     (ratio(2 * d - 1, 2), ratio(2 * d + 1, 2))
//! })?;
//! let decision = decide_tree(&family, Strategy::Topology)?;
//! assert!(decision.is_feasible());
//! # Ok::<(), distrealize::Error>(())
//! ```

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod dissimilarity;
pub mod doc;
pub mod error;
pub mod family;
pub mod graph;
pub mod instance;
pub mod linsys;
pub mod oracle;
pub mod pair;
pub mod rational;
pub mod splits;
pub mod topology;
pub mod tree;
pub mod verify;
pub mod weighted;

#[cfg(test)]
mod fixtures;

pub use dissimilarity::DissimilarityVector;
pub use error::{Error, Result};
pub use family::{Interval, IntervalFamily, Variant};
pub use pair::PairIndex;
pub use rational::Rational;
pub use splits::{QuartetSplit, SplitSystem, Strategy};
pub use weighted::{Edge, WeightedGraph, WeightedTree};
