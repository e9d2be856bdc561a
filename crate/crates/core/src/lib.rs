//! Constructions of nearly complete graphs whose edge sets split into large
//! pairwise disjoint induced matchings, together with the verifiers and the
//! applications built on top of them.
//!
//! * [`graph`]: graph model, induced-matching checks and the greedy cover.
//! * [`geometric`]: lattice graph with a squared-distance band and its
//!   shell decomposition.
//! * [`codes`]: proper binary linear codes (Gilbert-Varshamov search,
//!   exhaustive verification, row deletion chains).
//! * [`code_graph`]: Hamming-distance graph on `[C]^n` covered by
//!   equivalence classes of code flips.
//! * [`limits`]: uniformizing covers, the triangle graph and the lower-bound
//!   inequalities.
//! * [`channel`]: shared directional multichannel schedules and simulation.
//! * [`lintest`]: graph-based linearity testing.
//! * [`vempala`]: the partition sum functional and its counterexample.

pub mod channel;
pub mod code_graph;
pub mod codes;
mod error;
pub mod geometric;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod limits;
pub mod lintest;
pub mod vempala;

pub use error::{Error, Result};
pub use graph::{
    BipartiteGraph, CoverReport, Graph, Matching, MatchingCover, Violation, ViolationKind,
};
pub use lattice::{LatticeVertex, Limits};

/// Seeded generator used everywhere randomness is needed. The stream for a
/// given seed is fixed, so every Monte Carlo result replays exactly.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds the generator for `seed`.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
