//! Root confidence sets for uniform attachment (random recursive) trees.
//!
//! The crate is organised around five pieces:
//!
//! * [`treegen`]: increasing trees, seeded generation, exhaustive enumeration
//!   and the edge-list text format.
//! * [`ulam`]: Ulam-Harris coordinates, the canonical embedding of an
//!   increasing tree, the child-sibling code and the zone-flipping involution.
//! * [`rootfind`]: leaf stripping with the `m_n` round schedule, plus the
//!   Jordan-centrality and greedy-likelihood baselines.
//! * [`montecarlo`]: the seeded, parallel experiment runner.
//! * [`cli`]: argument parsing and dispatch for the `leafstrip` binary.

pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod rng;
pub mod rootfind;
pub mod treegen;
pub mod ulam;

pub use error::{Error, Result};
pub use rootfind::{m_n, Algorithm, ConfidenceSet};
pub use treegen::{IncreasingTree, Tree, UnrootedTree};
pub use ulam::{BitString, Embedding, UlamNode};
