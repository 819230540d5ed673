//! Shared fixtures for the benchmarks.

use fracmatch::subsets::k_subset_masks;
use fracmatch::{Hypergraph, Rational};

/// The canonical extremal family at prefix size 1: all k-subsets through
/// vertex 1.
pub fn star(n: u32, k: u32) -> Hypergraph {
    Hypergraph::from_masks(n, k, k_subset_masks(n, k).filter(|m| m & 1 == 1))
        .expect("star masks are valid")
}

/// Every k-subset of [n].
pub fn complete(n: u32, k: u32) -> Hypergraph {
    Hypergraph::from_masks(n, k, k_subset_masks(n, k)).expect("complete masks are valid")
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::ratio(p, q)
}
