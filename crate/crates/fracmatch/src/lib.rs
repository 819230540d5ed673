//! Exact arithmetic for fractional matchings in k-uniform hypergraphs.
//!
//! The crate computes the maximum number of edges a k-uniform hypergraph on
//! `n` vertices can carry while admitting no fractional matching of
//! cardinality `s` (for integer `n*s`), materializes the extremal threshold
//! families, decides fractional-matching feasibility by exact rational
//! linear programming with verifiable primal/dual certificates, and checks
//! the whole pipeline against brute force on desk-scale instances.
//!
//! Everything is exact: counts are big integers, every threshold and weight
//! is a big rational, and the LP solver pivots over rationals with Bland's
//! rule. No decision anywhere goes through floating point.

pub mod construct;
pub mod counting;
pub mod hypergraph;
pub mod lp;
pub mod rational;
pub mod subsets;
pub mod verify;

pub use construct::{ConstructError, ThresholdFamily, ThresholdWeights};
pub use counting::{binomial, CountBounds, CountError, ExtremalCount};
pub use hypergraph::{Edge, Format, Hypergraph, HypergraphError};
pub use lp::{
    CoverCertificate, FractionalMatching, LpError, LpResult, MatchingDecision,
};
pub use rational::{Rational, RationalParseError};
pub use verify::{VerifyError, VerifyReport};

/// Caps the rayon worker pool used by the verification drivers. Call once,
/// before any parallel work; later calls have no effect. Verification output
/// does not depend on the worker count.
pub fn configure_workers(jobs: usize) {
    if jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}
