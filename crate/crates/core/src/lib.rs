//! Graph-isomorphism toolkit built around Weisfeiler-Leman refinement.
//!
//! The crate provides:
//!
//! * [`graph`] — simple undirected colored graphs, graph6 and edge-list I/O,
//!   deterministic generators and a small enumerated test corpus.
//! * [`refine`] — color refinement (1-WL), classic 2-WL, direct k-WL, walk
//!   refinement, and the logarithmic-round simulation of color refinement by
//!   2-WL. All round engines are bulk-synchronous and produce results that are
//!   byte-identical for any worker count.
//! * [`gadget`] — the layered auxiliary graph on which plain color refinement
//!   simulates k-dimensional WL refinement.
//! * [`perm`] — permutations, orbits, minimal block systems, stabilizer
//!   chains, sifting, generating-set refinement and a full Schreier-Sims
//!   closure used as the membership oracle.
//! * [`solver`] — an individualization-refinement isomorphism solver with
//!   branch-parallel search, plus a brute-force oracle.

pub mod error;
pub mod gadget;
pub mod graph;
pub mod par;
pub mod partition;
pub mod perm;
pub mod refine;
pub mod rng;
pub mod solver;

pub use error::{BudgetError, GraphError, PermError};
pub use graph::Graph;
pub use partition::{PairColoring, TupleColoring, VertexPartition};
pub use perm::{GeneratingSet, Permutation, StabilizerChain};
pub use refine::{RefineOptions, RefinementReport};
pub use solver::{IsoOptions, IsoOutcome, IsoResult, Refiner};

/// Default cap on dense color-array entries (tuples, gadget vertices).
pub const DEFAULT_MEMORY_BUDGET: u64 = 50_000_000;
