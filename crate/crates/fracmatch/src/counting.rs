//! Exact evaluation of the extremal edge count.
//!
//! For a k-uniform hypergraph on `n` vertices and a cardinality `s` with
//! `k/n < s <= 1` and `n*s` an integer, the maximum number of edges a
//! hypergraph can carry while admitting no fractional matching of
//! cardinality `s` equals
//!
//! ```text
//! max over c in [1, ns-1] of  sum over i > k*c/(n*s) of  C(c,i) * C(n-c,k-i)
//! ```
//!
//! The inner sum counts the k-subsets whose overlap with the first `c`
//! vertices strictly exceeds `k*c/(n*s)`. The strict comparison is evaluated
//! as the integer test `i * ns > k * c` after clearing denominators; no
//! division and no floating point take part in any decision.
//!
//! When `n*s` is not an integer the exact maximum is bracketed by
//! re-evaluating the same maximum at the floor and ceiling of `n*s`
//! ([`extremal_count_bounds`]).

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountError {
    #[error("invalid dimensions: need 1 <= k < n, got n={n}, k={k}")]
    InvalidDimensions { n: u64, k: u64 },
    #[error("cardinality {s} exceeds 1")]
    SOutOfRange { s: String },
    #[error("cardinality {s} is at or below the trivial threshold k/n = {threshold}; only the empty hypergraph lacks such a matching")]
    SBelowThreshold { s: String, threshold: String },
    #[error("n*s = {ns} is not an integer; the exact count is only available on the integer grid, use the floor/ceiling bounds instead")]
    NonIntegerNS { ns: String },
}

/// The evaluated maximum together with the per-prefix terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalCount {
    /// The maximum over all prefix sizes.
    pub max_edges: BigUint,
    /// Smallest prefix size attaining the maximum (1-based).
    pub argmax_c: u64,
    /// `terms[c-1]` is the count for prefix size `c`, for `c` in `[1, ns-1]`.
    pub terms: Vec<BigUint>,
}

/// Floor/ceiling bracket for cardinalities off the integer grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountBounds {
    pub lower: BigUint,
    pub upper: BigUint,
}

/// Binomial coefficient C(a, b) in arbitrary precision, with C(a, b) = 0
/// whenever b < 0 or b > a.
pub fn binomial(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let mut b = b as u64;
    if b > a - b {
        b = a - b;
    }
    let mut result = BigUint::one();
    for i in 0..b {
        // Exact at every step: the partial product is C(a, i+1) * (i+1)! / (i+1)!.
        result = result * BigUint::from(a - i) / BigUint::from(i + 1);
    }
    result
}

/// Checks `1 <= k < n`, `k/n < s <= 1`, and that `n*s` is an integer.
/// Returns `n*s`.
pub(crate) fn integer_ns(n: u64, k: u64, s: &Rational) -> Result<u64, CountError> {
    check_dimensions(n, k)?;
    check_cardinality_window(n, k, s, true)?;
    let ns = s * &Rational::from(n);
    match ns.as_integer() {
        Some(value) => Ok(u64::try_from(value).expect("ns <= n fits in u64")),
        None => Err(CountError::NonIntegerNS { ns: ns.to_string() }),
    }
}

fn check_dimensions(n: u64, k: u64) -> Result<(), CountError> {
    if n == 0 || k == 0 || k >= n {
        return Err(CountError::InvalidDimensions { n, k });
    }
    Ok(())
}

fn check_cardinality_window(
    n: u64,
    k: u64,
    s: &Rational,
    allow_one: bool,
) -> Result<(), CountError> {
    let one = Rational::one();
    if s > &one || (!allow_one && s == &one) {
        return Err(CountError::SOutOfRange { s: s.to_string() });
    }
    let threshold = Rational::new(k.into(), n.into());
    if s <= &threshold {
        return Err(CountError::SBelowThreshold {
            s: s.to_string(),
            threshold: threshold.to_string(),
        });
    }
    Ok(())
}

/// The summand for prefix size `c` on the integer grid point `ns`:
/// the number of k-subsets x of [n] with |x intersect [c]| * ns > k * c.
fn prefix_term(n: u64, k: u64, ns: u64, c: u64) -> BigUint {
    let mut total = BigUint::zero();
    let i_max = c.min(k);
    for i in 0..=i_max {
        if u128::from(i) * u128::from(ns) > u128::from(k) * u128::from(c) {
            total += binomial(c, i as i64) * binomial(n - c, k as i64 - i as i64);
        }
    }
    total
}

/// Maximum of the prefix terms over `c` in `[1, m-1]`, where `m` plays the
/// role of the integer `n*s`. Returns 0 when `m <= k` (at or below the
/// trivial threshold only the empty hypergraph qualifies).
fn grid_max(n: u64, k: u64, m: u64) -> BigUint {
    if m <= k {
        return BigUint::zero();
    }
    (1..m)
        .map(|c| prefix_term(n, k, m, c))
        .max()
        .unwrap_or_else(BigUint::zero)
}

/// Evaluates the extremal count for an integer-grid cardinality.
///
/// Preconditions: `1 <= k < n`, `k/n < s <= 1`, `n*s` integer. For `s = 1`
/// the prefix range `[1, ns-1]` coincides with `[1, n-1]`, which covers the
/// perfect-matching case with no special handling.
pub fn extremal_count(n: u64, k: u64, s: &Rational) -> Result<ExtremalCount, CountError> {
    let ns = integer_ns(n, k, s)?;
    let terms: Vec<BigUint> = (1..ns).map(|c| prefix_term(n, k, ns, c)).collect();
    let max_edges = terms.iter().max().cloned().expect("ns >= k+1 >= 2");
    let argmax_c = terms
        .iter()
        .position(|t| *t == max_edges)
        .expect("max comes from terms") as u64
        + 1;
    Ok(ExtremalCount {
        max_edges,
        argmax_c,
        terms,
    })
}

/// Brackets the extremal count for a cardinality with non-integer `n*s` by
/// evaluating the grid maximum at the floor and the ceiling of `n*s`.
///
/// Preconditions: `1 <= k < n`, `k/n < s < 1`. When `n*s` happens to be an
/// integer the interval collapses to the exact count.
pub fn extremal_count_bounds(n: u64, k: u64, s: &Rational) -> Result<CountBounds, CountError> {
    check_dimensions(n, k)?;
    check_cardinality_window(n, k, s, false)?;
    let ns = s * &Rational::from(n);
    let floor = u64::try_from(ns.floor_int()).expect("0 < ns < n");
    let ceil = u64::try_from(ns.ceil_int()).expect("0 < ns < n");
    Ok(CountBounds {
        lower: grid_max(n, k, floor),
        upper: grid_max(n, k, ceil),
    })
}
