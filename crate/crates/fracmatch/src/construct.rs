//! Threshold hypergraph families.
//!
//! Given nonnegative weights `alpha_1..alpha_{ns-1}` summing to 1, the
//! threshold family collects every k-subset x of [n] whose weighted overlap
//! `sum over j in x of alpha_j` strictly exceeds `k/(n*s)`. Subsets landing
//! exactly on the threshold are excluded; the verifier reports them
//! separately because extremal weight vectors can be perturbed away from
//! such ties without losing members.
//!
//! Uniform weights on an initial segment `[c]` reduce the inequality to an
//! integer overlap test, which is how the canonical extremal families are
//! built.

use num_traits::{One, Zero};

use crate::counting::{self, CountError};
use crate::hypergraph::Hypergraph;
use crate::rational::Rational;
use crate::subsets::{k_subset_masks, prefix_mask};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error(transparent)]
    Param(#[from] CountError),
    #[error("prefix size c={c} outside [1, {max}]")]
    COutOfRange { c: u64, max: u64 },
    #[error("weights sum to {sum}, expected exactly 1")]
    WeightsNotNormalized { sum: String },
    #[error("negative weight {value} at position {position}")]
    NegativeWeight { position: usize, value: String },
    #[error("{got} weights given, expected ns-1 = {expected}")]
    WrongWeightCount { expected: u64, got: usize },
    #[error("weights were built for threshold {built}, expected {expected}")]
    ThresholdMismatch { built: String, expected: String },
    #[error("vertex count {n} exceeds the 64-vertex enumeration limit")]
    VertexLimitExceeded { n: u32 },
}

/// Nonnegative rational weights over the first `ns-1` vertices, summing to
/// exactly 1, together with the strict threshold `k/(n*s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdWeights {
    alpha: Vec<Rational>,
    threshold: Rational,
}

impl ThresholdWeights {
    /// Validates weights against the parameters: length `ns-1`, every entry
    /// nonnegative, total exactly 1. Trailing zeros are fine.
    pub fn new(
        n: u64,
        k: u64,
        s: &Rational,
        alpha: Vec<Rational>,
    ) -> Result<Self, ConstructError> {
        let ns = counting::integer_ns(n, k, s)?;
        if alpha.len() as u64 != ns - 1 {
            return Err(ConstructError::WrongWeightCount {
                expected: ns - 1,
                got: alpha.len(),
            });
        }
        for (position, value) in alpha.iter().enumerate() {
            if value.is_negative() {
                return Err(ConstructError::NegativeWeight {
                    position,
                    value: value.to_string(),
                });
            }
        }
        let sum: Rational = alpha.iter().sum();
        if !sum.is_one() {
            return Err(ConstructError::WeightsNotNormalized {
                sum: sum.to_string(),
            });
        }
        Ok(ThresholdWeights {
            alpha,
            threshold: Rational::new(k.into(), ns.into()),
        })
    }

    /// Uniform weights `1/c` on the first `c` positions, zero elsewhere.
    pub fn uniform_step(n: u64, k: u64, s: &Rational, c: u64) -> Result<Self, ConstructError> {
        let ns = counting::integer_ns(n, k, s)?;
        if c == 0 || c > ns - 1 {
            return Err(ConstructError::COutOfRange { c, max: ns - 1 });
        }
        let share = Rational::new(1.into(), c.into());
        let alpha = (1..ns)
            .map(|j| if j <= c { share.clone() } else { Rational::zero() })
            .collect();
        ThresholdWeights::new(n, k, s, alpha)
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn threshold(&self) -> &Rational {
        &self.threshold
    }

    /// Number of leading positions up to the last nonzero weight.
    pub fn support_len(&self) -> usize {
        self.alpha
            .iter()
            .rposition(|a| !a.is_zero())
            .map_or(0, |p| p + 1)
    }

    fn check_against(&self, n: u64, k: u64, s: &Rational) -> Result<u64, ConstructError> {
        let ns = counting::integer_ns(n, k, s)?;
        if self.alpha.len() as u64 != ns - 1 {
            return Err(ConstructError::WrongWeightCount {
                expected: ns - 1,
                got: self.alpha.len(),
            });
        }
        let expected = Rational::new(k.into(), ns.into());
        if self.threshold != expected {
            return Err(ConstructError::ThresholdMismatch {
                built: self.threshold.to_string(),
                expected: expected.to_string(),
            });
        }
        Ok(ns)
    }

    /// Weighted overlap of an edge mask with the support.
    fn dot(&self, mask: u64) -> Rational {
        let mut rest = mask & prefix_mask(self.alpha.len() as u32);
        let mut total = Rational::zero();
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            total += &self.alpha[j];
            rest &= rest - 1;
        }
        total
    }
}

/// A materialized threshold family with its edge count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdFamily {
    pub weights: ThresholdWeights,
    pub family: Hypergraph,
    pub count: u64,
}

fn check_vertex_limit(n: u32) -> Result<(), ConstructError> {
    if n > 64 {
        return Err(ConstructError::VertexLimitExceeded { n });
    }
    Ok(())
}

/// The canonical extremal family for prefix size `c`: every k-subset whose
/// overlap with the first `c` vertices satisfies `i * ns > k * c`.
///
/// Its cardinality equals the corresponding term of
/// [`counting::extremal_count`].
pub fn extremal_family(
    n: u32,
    k: u32,
    s: &Rational,
    c: u64,
) -> Result<Hypergraph, ConstructError> {
    check_vertex_limit(n)?;
    let ns = counting::integer_ns(n.into(), k.into(), s)?;
    if c == 0 || c > ns - 1 {
        return Err(ConstructError::COutOfRange { c, max: ns - 1 });
    }
    let prefix = prefix_mask(c as u32);
    let rhs = u128::from(k) * u128::from(c);
    let masks = k_subset_masks(n, k).filter(|mask| {
        let overlap = (mask & prefix).count_ones();
        u128::from(overlap) * u128::from(ns) > rhs
    });
    Ok(Hypergraph::from_masks(n, k, masks).expect("enumerated masks are valid edges"))
}

/// Materializes the threshold family for the given weights.
pub fn threshold_family(
    n: u32,
    k: u32,
    s: &Rational,
    weights: &ThresholdWeights,
) -> Result<ThresholdFamily, ConstructError> {
    check_vertex_limit(n)?;
    weights.check_against(n.into(), k.into(), s)?;
    let masks: Vec<u64> = k_subset_masks(n, k)
        .filter(|&mask| weights.dot(mask) > weights.threshold)
        .collect();
    let count = masks.len() as u64;
    let family = Hypergraph::from_masks(n, k, masks).expect("enumerated masks are valid edges");
    Ok(ThresholdFamily {
        weights: weights.clone(),
        family,
        count,
    })
}

/// Size of the threshold family, without materializing the edges.
pub fn count_threshold(
    n: u32,
    k: u32,
    s: &Rational,
    weights: &ThresholdWeights,
) -> Result<u64, ConstructError> {
    Ok(scan_threshold(n, k, s, weights)?.count)
}

/// Count plus tie diagnostics: how many subsets sit exactly on the
/// threshold, and the smallest nonzero distance from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ThresholdScan {
    pub count: u64,
    pub boundary: u64,
    pub min_gap: Option<Rational>,
}

pub(crate) fn scan_threshold(
    n: u32,
    k: u32,
    s: &Rational,
    weights: &ThresholdWeights,
) -> Result<ThresholdScan, ConstructError> {
    check_vertex_limit(n)?;
    weights.check_against(n.into(), k.into(), s)?;
    let mut count = 0u64;
    let mut boundary = 0u64;
    let mut min_gap: Option<Rational> = None;
    for mask in k_subset_masks(n, k) {
        let gap = weights.dot(mask) - weights.threshold.clone();
        if gap.is_zero() {
            boundary += 1;
            continue;
        }
        if gap.is_positive() {
            count += 1;
        }
        let distance = gap.abs();
        if min_gap.as_ref().is_none_or(|g| distance < *g) {
            min_gap = Some(distance);
        }
    }
    Ok(ThresholdScan {
        count,
        boundary,
        min_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::extremal_count;
    use itertools::Itertools;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn weights(n: u64, k: u64, s: &Rational, raw: &[(i64, i64)]) -> ThresholdWeights {
        let alpha = raw.iter().map(|&(p, q)| r(p, q)).collect();
        ThresholdWeights::new(n, k, s, alpha).unwrap()
    }

    #[test]
    fn extremal_family_examples() {
        let star = extremal_family(6, 3, &r(2, 3), 1).unwrap();
        assert_eq!(star.edge_count(), 10);
        assert!(star.edges().iter().all(|e| e.contains(1)));

        let pair = extremal_family(4, 2, &r(1, 1), 2).unwrap();
        assert_eq!(pair.edge_count(), 1);
        assert_eq!(pair.edges()[0].vertices(), &[1, 2]);

        let pair = extremal_family(5, 2, &r(3, 5), 2).unwrap();
        assert_eq!(pair.edge_count(), 1);
        assert_eq!(pair.edges()[0].vertices(), &[1, 2]);
    }

    #[test]
    fn extremal_family_error_cases() {
        assert!(matches!(
            extremal_family(6, 3, &r(2, 3), 0),
            Err(ConstructError::COutOfRange { .. })
        ));
        assert!(matches!(
            extremal_family(6, 3, &r(2, 3), 4),
            Err(ConstructError::COutOfRange { .. })
        ));
        assert!(matches!(
            extremal_family(6, 3, &r(3, 5), 1),
            Err(ConstructError::Param(CountError::NonIntegerNS { .. }))
        ));
        assert!(matches!(
            extremal_family(6, 3, &r(1, 2), 1),
            Err(ConstructError::Param(CountError::SBelowThreshold { .. }))
        ));
    }

    #[test]
    fn weight_validation() {
        assert!(matches!(
            ThresholdWeights::new(6, 3, &r(2, 3), vec![r(1, 2), r(1, 2)]),
            Err(ConstructError::WrongWeightCount { expected: 3, got: 2 })
        ));
        assert!(matches!(
            ThresholdWeights::new(6, 3, &r(2, 3), vec![r(1, 2), r(1, 2), r(1, 2)]),
            Err(ConstructError::WeightsNotNormalized { .. })
        ));
        assert!(matches!(
            ThresholdWeights::new(6, 3, &r(2, 3), vec![r(3, 2), r(-1, 2), Rational::zero()]),
            Err(ConstructError::NegativeWeight { position: 1, .. })
        ));
        let w = weights(6, 3, &r(2, 3), &[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(w.threshold(), &r(3, 4));
        assert_eq!(w.support_len(), 1);
    }

    #[test]
    fn threshold_family_examples() {
        // All weight on vertex 1: threshold 3/4 < 1 admits exactly the
        // triples through vertex 1.
        let w = weights(6, 3, &r(2, 3), &[(1, 1), (0, 1), (0, 1)]);
        let fam = threshold_family(6, 3, &r(2, 3), &w).unwrap();
        assert_eq!(fam.count, 10);
        assert!(fam.family.edges().iter().all(|e| e.contains(1)));

        // Attainable overlaps are 0, 1/2, 1; only 1 clears 2/3.
        let w = weights(5, 2, &r(3, 5), &[(1, 2), (1, 2)]);
        let fam = threshold_family(5, 2, &r(3, 5), &w).unwrap();
        assert_eq!(fam.count, 1);
        assert_eq!(fam.family.edges()[0].vertices(), &[1, 2]);
    }

    #[test]
    fn uniform_step_reproduces_the_extremal_family() {
        for n in [4u32, 5, 6, 7, 8] {
            for k in 1..n {
                for m in (k + 1)..=n {
                    let s = r(m as i64, n as i64);
                    for c in 1..m as u64 {
                        let direct = extremal_family(n, k, &s, c).unwrap();
                        let w =
                            ThresholdWeights::uniform_step(n.into(), k.into(), &s, c).unwrap();
                        let fam = threshold_family(n, k, &s, &w).unwrap();
                        assert_eq!(fam.family, direct, "n={n} k={k} s={s} c={c}");
                        assert_eq!(fam.count as usize, direct.edge_count());
                    }
                }
            }
        }
    }

    #[test]
    fn count_threshold_examples() {
        let s = r(2, 3);
        let w = ThresholdWeights::uniform_step(6, 3, &s, 1).unwrap();
        assert_eq!(count_threshold(6, 3, &s, &w).unwrap(), 10);

        let s1 = r(1, 1);
        let w = ThresholdWeights::uniform_step(4, 2, &s1, 3).unwrap();
        assert_eq!(count_threshold(4, 2, &s1, &w).unwrap(), 3);
    }

    #[test]
    fn boundary_subsets_are_excluded_not_counted() {
        // (5,2,3/5): weights (1/3, 2/3) put the pairs {2,j>2} exactly on the
        // threshold 2/3. They are neither members nor rejected silently.
        let s = r(3, 5);
        let w = weights(5, 2, &s, &[(1, 3), (2, 3)]);
        let scan = scan_threshold(5, 2, &s, &w).unwrap();
        assert_eq!(scan.count, 1);
        assert_eq!(scan.boundary, 3);
        let fam = threshold_family(5, 2, &s, &w).unwrap();
        assert_eq!(fam.family.edges()[0].vertices(), &[1, 2]);
    }

    #[test]
    fn every_valid_weight_vector_admits_the_top_edge() {
        // The k heaviest positions always clear k/(n*s), so no valid weights
        // produce an empty family.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (n, k, m) = loop {
                let n = rng.gen_range(3u32..=9);
                let k = rng.gen_range(1..n);
                let m = rng.gen_range(k + 1..=n);
                if m >= 2 {
                    break (n, k, m);
                }
            };
            let s = r(m as i64, n as i64);
            let len = (m - 1) as usize;
            let nums: Vec<u64> = (0..len).map(|_| rng.gen_range(0..=30)).collect();
            if nums.iter().all(|&x| x == 0) {
                continue;
            }
            let total: u64 = nums.iter().sum();
            let alpha = nums
                .iter()
                .map(|&x| Rational::new(x.into(), total.into()))
                .collect();
            let w = ThresholdWeights::new(n.into(), k.into(), &s, alpha).unwrap();
            assert!(count_threshold(n, k, &s, &w).unwrap() >= 1);
        }
    }

    #[test]
    fn cardinality_law_against_the_formula_up_to_n20() {
        // Histogram the prefix overlaps once per (n, k, c) by enumeration,
        // then compare the strict-threshold tallies with the closed form for
        // every admissible integer-grid cardinality.
        for n in 2..=20u64 {
            for k in 1..n {
                let overlaps: Vec<Vec<u64>> = {
                    let mut hist = vec![vec![0u64; (k + 1) as usize]; n as usize];
                    for subset in (1..=n).combinations(k as usize) {
                        let mut overlap = 0usize;
                        let mut iter = subset.iter().peekable();
                        for c in 1..n {
                            while iter.peek().is_some_and(|&&v| v <= c) {
                                iter.next();
                                overlap += 1;
                            }
                            hist[c as usize][overlap] += 1;
                        }
                    }
                    hist
                };
                for m in (k + 1)..=n {
                    let ec = extremal_count(n, k, &r(m as i64, n as i64)).unwrap();
                    for c in 1..m {
                        let counted: u64 = (0..=k)
                            .filter(|&i| u128::from(i) * u128::from(m) > u128::from(k) * u128::from(c))
                            .map(|i| overlaps[c as usize][i as usize])
                            .sum();
                        assert_eq!(
                            BigUint::from(counted),
                            ec.terms[(c - 1) as usize],
                            "n={n} k={k} m={m} c={c}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn random_weights_never_beat_the_formula_maximum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(n, k, m) in &[(6u32, 3u32, 4u64), (5, 2, 3), (7, 2, 3), (8, 4, 5)] {
            let s = r(m as i64, n as i64);
            let max = extremal_count(n.into(), k.into(), &s).unwrap().max_edges;
            for _ in 0..150 {
                let len = (m - 1) as usize;
                let nums: Vec<u64> = (0..len).map(|_| rng.gen_range(0..=100)).collect();
                if nums.iter().all(|&x| x == 0) {
                    continue;
                }
                let total: u64 = nums.iter().sum();
                let alpha = nums
                    .iter()
                    .map(|&x| Rational::new(x.into(), total.into()))
                    .collect();
                let w = ThresholdWeights::new(n.into(), k.into(), &s, alpha).unwrap();
                let count = count_threshold(n, k, &s, &w).unwrap();
                assert!(BigUint::from(count) <= max, "n={n} k={k} weights {w:?}");
            }
        }
    }

    #[test]
    fn count_is_invariant_under_matched_permutations() {
        // Permuting the weight positions while relabeling the vertices the
        // same way cannot change the family size.
        let s = r(5, 8);
        let n = 8u32;
        let k = 4u32;
        let base = [(4i64, 10i64), (3, 10), (2, 10), (1, 10)];
        let w = weights(n.into(), k.into(), &s, &base);
        let reference = count_threshold(n, k, &s, &w).unwrap();
        for perm in (0..4usize).permutations(4) {
            let alpha: Vec<Rational> = perm.iter().map(|&i| r(base[i].0, base[i].1)).collect();
            let permuted = ThresholdWeights::new(n.into(), k.into(), &s, alpha).unwrap();
            assert_eq!(count_threshold(n, k, &s, &permuted).unwrap(), reference);
        }
    }
}
