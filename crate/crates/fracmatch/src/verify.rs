//! Desk-scale verification drivers.
//!
//! Each driver exercises one consistency claim end to end and returns a
//! [`VerifyReport`]: a list of named checks, counters, and informational
//! notes. A failed check always carries a machine-checkable witness (a
//! hypergraph, a certificate, or a weight vector). Reports are fully
//! deterministic: reruns with the same inputs and seed serialize to
//! identical bytes regardless of the worker count.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{self, ConstructError, ThresholdWeights};
use crate::counting::{self, CountError};
use crate::hypergraph::Hypergraph;
use crate::lp::{self, FractionalMatching, LpError, MatchingDecision};
use crate::rational::Rational;
use crate::subsets::k_subset_masks;

/// Hard ceiling on how many candidate edges the samplers will materialize.
const UNIVERSE_GUARD: u64 = 1_000_000;

/// Denominator scale for randomly drawn weight numerators.
const WEIGHT_SCALE: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("n*s is an integer; use the extremal verifier instead of the bounds check")]
    IntegerNS,
    #[error("enumerating {count} families exceeds the limit of {limit}")]
    EnumerationTooLarge { count: BigUint, limit: u64 },
    #[error("{count} candidate edges exceed the materialization guard of {guard}")]
    UniverseTooLarge { count: BigUint, guard: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// Failure evidence that an external checker can re-verify.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Witness {
    Hypergraph(Hypergraph),
    Matching(FractionalMatching),
    Weights(Vec<Rational>),
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    fn pass(name: &str) -> Check {
        Check {
            name: name.to_owned(),
            status: CheckStatus::Pass,
            witness: None,
        }
    }

    fn fail(name: &str, witness: Witness) -> Check {
        Check {
            name: name.to_owned(),
            status: CheckStatus::Fail,
            witness: Some(witness),
        }
    }

    fn from_witness(name: &str, witness: Option<Witness>) -> Check {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct VerifyStats {
    /// Instances produced by exhaustive enumeration.
    pub enumerated: u64,
    /// Instances produced by seeded sampling.
    pub sampled: u64,
    /// Instances skipped because a limit cut an enumeration short.
    pub skipped_by_limit: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub stats: VerifyStats,
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn assemble(checks: Vec<Check>, stats: VerifyStats, notes: Vec<String>) -> VerifyReport {
        let passed = checks.iter().all(|c| c.status == CheckStatus::Pass);
        VerifyReport {
            passed,
            checks,
            stats,
            notes,
        }
    }

    /// Stable-keyed JSON rendering.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn edge_universe_guard(n: u32, k: u32) -> Result<Vec<u64>, VerifyError> {
    if n > 64 {
        return Err(VerifyError::Construct(ConstructError::VertexLimitExceeded {
            n,
        }));
    }
    let count = counting::binomial(n.into(), k as i64);
    if count > BigUint::from(UNIVERSE_GUARD) {
        return Err(VerifyError::UniverseTooLarge {
            count,
            guard: UNIVERSE_GUARD,
        });
    }
    Ok(k_subset_masks(n, k).collect())
}

fn infeasibility_witness(
    n: u32,
    k: u32,
    s: &Rational,
    masks: &[u64],
) -> Result<Option<Witness>, VerifyError> {
    let h = Hypergraph::from_masks(n, k, masks.iter().copied())
        .expect("enumerated masks form a valid hypergraph");
    match lp::has_matching(&h, s)? {
        MatchingDecision::Feasible(_) => Ok(None),
        MatchingDecision::Infeasible(_) => Ok(Some(Witness::Hypergraph(h))),
    }
}

/// Checks the extremal family at the maximizing prefix size: its edge count
/// equals the formula value, it has no matching of cardinality `s`, and
/// every single-edge extension does.
pub fn verify_extremal(n: u32, k: u32, s: &Rational) -> Result<VerifyReport, VerifyError> {
    let ec = counting::extremal_count(n.into(), k.into(), s)?;
    let universe = edge_universe_guard(n, k)?;
    if universe.len() > lp::DEFAULT_EDGE_GUARD {
        return Err(VerifyError::Lp(LpError::TooManyEdges {
            edges: universe.len(),
            guard: lp::DEFAULT_EDGE_GUARD,
        }));
    }
    let family = construct::extremal_family(n, k, s, ec.argmax_c)?;
    let mut checks = Vec::new();
    let mut notes = vec![format!(
        "extremal family: {} edges at prefix c={}",
        ec.max_edges, ec.argmax_c
    )];

    checks.push(if BigUint::from(family.edge_count()) == ec.max_edges {
        Check::pass("extremal-count-matches-formula")
    } else {
        Check::fail(
            "extremal-count-matches-formula",
            Witness::Hypergraph(family.clone()),
        )
    });

    checks.push(match lp::has_matching(&family, s)? {
        MatchingDecision::Infeasible(cover) => {
            notes.push(format!("cover value {} < s = {}", cover.value, s));
            Check::pass("extremal-family-has-no-s-matching")
        }
        MatchingDecision::Feasible(matching) => Check::fail(
            "extremal-family-has-no-s-matching",
            Witness::Matching(matching),
        ),
    });

    let members: HashSet<u64> = family.edge_masks().collect();
    let mut base: Vec<u64> = members.iter().copied().collect();
    base.sort_unstable();
    let extensions: Vec<u64> = universe
        .iter()
        .copied()
        .filter(|m| !members.contains(m))
        .collect();
    let failures: Vec<Option<Witness>> = extensions
        .par_iter()
        .map(|&extra| {
            let mut masks = base.clone();
            masks.push(extra);
            infeasibility_witness(n, k, s, &masks)
        })
        .collect::<Result<_, _>>()?;
    checks.push(Check::from_witness(
        "one-edge-extensions-have-s-matching",
        failures.into_iter().flatten().next(),
    ));

    let stats = VerifyStats {
        enumerated: extensions.len() as u64,
        ..VerifyStats::default()
    };
    Ok(VerifyReport::assemble(checks, stats, notes))
}

/// Enumerates every family with one edge more than the maximum and demands
/// a matching of cardinality `s` from each. When the maximum-size sweep also
/// fits the limit, additionally demands that at least one maximum-size
/// family has none.
pub fn exhaustive_tightness(
    n: u32,
    k: u32,
    s: &Rational,
    limit: u64,
) -> Result<VerifyReport, VerifyError> {
    let ec = counting::extremal_count(n.into(), k.into(), s)?;
    let universe = edge_universe_guard(n, k)?;
    let max_edges = ec
        .max_edges
        .to_u64()
        .expect("counts fit u64 for n <= 64") as usize;

    let above_count = counting::binomial(universe.len() as u64, max_edges as i64 + 1);
    if above_count > BigUint::from(limit) {
        return Err(VerifyError::EnumerationTooLarge {
            count: above_count,
            limit,
        });
    }

    let mut checks = Vec::new();
    let mut stats = VerifyStats::default();
    let mut notes = vec![format!(
        "maximum {} over {} candidate edges",
        ec.max_edges,
        universe.len()
    )];

    let above: Vec<Vec<u64>> = combinations(&universe, max_edges + 1);
    stats.enumerated += above.len() as u64;
    let failures: Vec<Option<Witness>> = above
        .par_iter()
        .map(|masks| infeasibility_witness(n, k, s, masks))
        .collect::<Result<_, _>>()?;
    checks.push(Check::from_witness(
        "families-above-the-maximum-have-s-matching",
        failures.into_iter().flatten().next(),
    ));

    let at_count = counting::binomial(universe.len() as u64, max_edges as i64);
    if at_count <= BigUint::from(limit) {
        let at: Vec<Vec<u64>> = combinations(&universe, max_edges);
        stats.enumerated += at.len() as u64;
        let verdicts: Vec<bool> = at
            .par_iter()
            .map(|masks| {
                let h = Hypergraph::from_masks(n, k, masks.iter().copied())
                    .expect("enumerated masks form a valid hypergraph");
                lp::has_matching(&h, s).map(|d| d.is_feasible())
            })
            .collect::<Result<_, _>>()?;
        let infeasible = verdicts.iter().filter(|f| !**f).count() as u64;
        notes.push(format!(
            "{infeasible} of {} maximum-size families have no s-matching",
            verdicts.len()
        ));
        checks.push(if infeasible > 0 {
            Check::pass("some-maximum-size-family-has-no-s-matching")
        } else {
            // Even the canonical extremal family found a matching; surface it.
            let family = construct::extremal_family(n, k, s, ec.argmax_c)?;
            let witness = match lp::has_matching(&family, s)? {
                MatchingDecision::Feasible(m) => Witness::Matching(m),
                MatchingDecision::Infeasible(_) => Witness::Hypergraph(family),
            };
            Check::fail("some-maximum-size-family-has-no-s-matching", witness)
        });
    } else {
        stats.skipped_by_limit = at_count.to_u64().unwrap_or(u64::MAX);
        notes.push("maximum-size sweep skipped by limit".to_owned());
    }

    Ok(VerifyReport::assemble(checks, stats, notes))
}

/// Draws uniformly random families with one edge more than the maximum and
/// demands a matching of cardinality `s` from each. Identical seeds replay
/// identical samples.
pub fn randomized_tightness(
    n: u32,
    k: u32,
    s: &Rational,
    samples: u64,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    let ec = counting::extremal_count(n.into(), k.into(), s)?;
    let universe = edge_universe_guard(n, k)?;
    let family_size = ec
        .max_edges
        .to_u64()
        .expect("counts fit u64 for n <= 64") as usize
        + 1;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let families: Vec<Vec<u64>> = (0..samples)
        .map(|_| {
            let mut picks =
                rand::seq::index::sample(&mut rng, universe.len(), family_size).into_vec();
            picks.sort_unstable();
            picks.into_iter().map(|i| universe[i]).collect()
        })
        .collect();

    let failures: Vec<Option<Witness>> = families
        .par_iter()
        .map(|masks| infeasibility_witness(n, k, s, masks))
        .collect::<Result<_, _>>()?;
    let feasible = failures.iter().filter(|w| w.is_none()).count();

    let checks = vec![Check::from_witness(
        "sampled-families-above-the-maximum-have-s-matching",
        failures.into_iter().flatten().next(),
    )];
    let stats = VerifyStats {
        sampled: samples,
        ..VerifyStats::default()
    };
    let notes = vec![
        format!("seed={seed}"),
        format!("{feasible}/{samples} sampled families had an s-matching"),
    ];
    Ok(VerifyReport::assemble(checks, stats, notes))
}

fn normalized_weights(
    n: u32,
    k: u32,
    s: &Rational,
    numerators: &[u64],
) -> Option<ThresholdWeights> {
    let total: u64 = numerators.iter().sum();
    if total == 0 {
        return None;
    }
    let alpha = numerators
        .iter()
        .map(|&x| Rational::new(x.into(), total.into()))
        .collect();
    Some(
        ThresholdWeights::new(n.into(), k.into(), s, alpha)
            .expect("normalized nonnegative weights are valid"),
    )
}

fn random_weight_batch(
    rng: &mut ChaCha8Rng,
    n: u32,
    k: u32,
    s: &Rational,
    len: usize,
    trials: u64,
    bias: Option<u64>,
) -> Vec<ThresholdWeights> {
    let mut out = Vec::with_capacity(trials as usize);
    while out.len() < trials as usize {
        let numerators: Vec<u64> = (0..len)
            .map(|j| {
                let base = match bias {
                    Some(c) if (j as u64) < c => WEIGHT_SCALE,
                    _ => 0,
                };
                base + rng.gen_range(0..=WEIGHT_SCALE / 10)
            })
            .collect();
        if let Some(w) = normalized_weights(n, k, s, &numerators) {
            out.push(w);
        }
    }
    out
}

/// Searches for weight vectors whose threshold family beats the formula
/// maximum: all uniform steps, `trials` random vectors, and `trials`
/// perturbations of the best step. The steps must attain the maximum and
/// nothing may exceed it.
pub fn threshold_search(
    n: u32,
    k: u32,
    s: &Rational,
    trials: u64,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    let ec = counting::extremal_count(n.into(), k.into(), s)?;
    if n > 64 {
        return Err(VerifyError::Construct(ConstructError::VertexLimitExceeded {
            n,
        }));
    }
    let ns = ec.terms.len() as u64 + 1;
    let len = (ns - 1) as usize;
    let max_edges = ec.max_edges.clone();

    let mut checks = Vec::new();
    let mut notes = vec![format!("seed={seed}")];

    // (a) Uniform steps over every prefix size.
    let mut best_step: Option<(u64, u64)> = None; // (count, c)
    for c in 1..ns {
        let weights = ThresholdWeights::uniform_step(n.into(), k.into(), s, c)?;
        let scan = construct::scan_threshold(n, k, s, &weights)?;
        if scan.boundary > 0 {
            notes.push(format!(
                "step c={c}: {} subsets sit exactly on the threshold",
                scan.boundary
            ));
        }
        if best_step.is_none_or(|(count, _)| scan.count > count) {
            best_step = Some((scan.count, c));
        }
    }
    let (best_count, best_c) = best_step.expect("at least one step");
    notes.push(format!("best step: {best_count} edges at c={best_c}"));
    checks.push(if BigUint::from(best_count) == max_edges {
        Check::pass("uniform-step-weights-attain-the-maximum")
    } else {
        let weights = ThresholdWeights::uniform_step(n.into(), k.into(), s, best_c)?;
        Check::fail(
            "uniform-step-weights-attain-the-maximum",
            Witness::Weights(weights.alpha().to_vec()),
        )
    });
    let best_weights = ThresholdWeights::uniform_step(n.into(), k.into(), s, best_c)?;
    if let Some(gap) = construct::scan_threshold(n, k, s, &best_weights)?.min_gap {
        notes.push(format!("smallest threshold separation at best step: {gap}"));
    }

    // (b) Random exact-rational weight vectors; (c) perturbed best step.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, bias) in [
        ("random-weights-never-exceed-the-maximum", None),
        (
            "perturbed-step-weights-never-exceed-the-maximum",
            Some(best_c),
        ),
    ] {
        let batch = random_weight_batch(&mut rng, n, k, s, len, trials, bias);
        let exceeded: Vec<Option<Witness>> = batch
            .par_iter()
            .map(|w| {
                construct::scan_threshold(n, k, s, w).map(|scan| {
                    (BigUint::from(scan.count) > max_edges)
                        .then(|| Witness::Weights(w.alpha().to_vec()))
                })
            })
            .collect::<Result<_, _>>()?;
        checks.push(Check::from_witness(
            name,
            exceeded.into_iter().flatten().next(),
        ));
    }

    let stats = VerifyStats {
        enumerated: ns - 1,
        sampled: trials * 2,
        ..VerifyStats::default()
    };
    Ok(VerifyReport::assemble(checks, stats, notes))
}

/// For a cardinality off the integer grid, checks that the best step-family
/// size is bracketed by the floor/ceiling bounds and that every step family
/// at `s` has no s-matching.
pub fn cross_check_bounds(n: u32, k: u32, s: &Rational) -> Result<VerifyReport, VerifyError> {
    let bounds = counting::extremal_count_bounds(n.into(), k.into(), s)?;
    let ns = s * &Rational::from(n);
    if ns.is_integer() {
        return Err(VerifyError::IntegerNS);
    }
    if n > 64 {
        return Err(VerifyError::Construct(ConstructError::VertexLimitExceeded {
            n,
        }));
    }
    let floor_ns = u64::try_from(ns.floor_int()).expect("0 < ns < n");

    let mut checks = Vec::new();
    let mut notes = vec![format!("bounds [{}, {}]", bounds.lower, bounds.upper)];

    checks.push(if bounds.lower <= bounds.upper {
        Check::pass("interval-is-ordered")
    } else {
        // The offending interval itself, re-computable from (n, k, s).
        let endpoints = [&bounds.lower, &bounds.upper]
            .map(|v| Rational::from_integer(num_bigint::BigInt::from(v.clone())));
        Check::fail("interval-is-ordered", Witness::Weights(endpoints.to_vec()))
    });

    // Step families built directly at s: every k-subset whose overlap with
    // the prefix [c] strictly exceeds k*c/(n*s).
    let mut best: Option<(u64, u64, Hypergraph)> = None;
    let mut families = Vec::new();
    for c in 1..=floor_ns {
        let rhs = &(Rational::from(k) * Rational::from(c as u32)) / &ns;
        let masks = k_subset_masks(n, k).filter(|mask| {
            let overlap = (mask & crate::subsets::prefix_mask(c as u32)).count_ones();
            Rational::from(overlap) > rhs
        });
        let family = Hypergraph::from_masks(n, k, masks)
            .expect("enumerated masks form a valid hypergraph");
        let count = family.edge_count() as u64;
        if best.as_ref().is_none_or(|(b, _, _)| count > *b) {
            best = Some((count, c, family.clone()));
        }
        families.push((c, family));
    }
    let (best_count, best_c, _) = best.expect("floor(ns) >= 1");
    notes.push(format!("best step family: {best_count} edges at c={best_c}"));

    let within = bounds.lower <= BigUint::from(best_count)
        && BigUint::from(best_count) <= bounds.upper;
    checks.push(if within {
        Check::pass("best-step-family-within-bounds")
    } else {
        let witness = families
            .iter()
            .find(|(c, _)| *c == best_c)
            .map(|(_, f)| Witness::Hypergraph(f.clone()))
            .expect("best family recorded");
        Check::fail("best-step-family-within-bounds", witness)
    });

    let feasible: Vec<Option<Witness>> = families
        .par_iter()
        .map(|(_, family)| {
            lp::has_matching(family, s).map(|decision| match decision {
                MatchingDecision::Feasible(_) => Some(Witness::Hypergraph(family.clone())),
                MatchingDecision::Infeasible(_) => None,
            })
        })
        .collect::<Result<_, _>>()?;
    checks.push(Check::from_witness(
        "step-families-have-no-s-matching",
        feasible.into_iter().flatten().next(),
    ));

    let stats = VerifyStats {
        enumerated: floor_ns,
        ..VerifyStats::default()
    };
    Ok(VerifyReport::assemble(checks, stats, notes))
}

/// All `size`-element subsets of `items`, in enumeration order.
fn combinations(items: &[u64], size: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn recurse(
        items: &[u64],
        size: usize,
        start: usize,
        current: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        let needed = size - current.len();
        for i in start..=items.len().saturating_sub(needed) {
            current.push(items[i]);
            recurse(items, size, i + 1, current, out);
            current.pop();
        }
    }
    if size <= items.len() {
        recurse(items, size, 0, &mut current, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    #[test]
    fn verify_extremal_reference_instances() {
        for (n, k, s, edges) in [
            (6u32, 3u32, r(2, 3), 10u64),
            (4, 2, r(1, 1), 3),
            (5, 2, r(3, 5), 4),
        ] {
            let report = verify_extremal(n, k, &s).unwrap();
            assert!(report.passed, "{report:?}");
            assert_eq!(report.checks.len(), 3);
            assert!(report.notes[0].contains(&format!("{edges} edges")));
        }
    }

    #[test]
    fn exhaustive_tightness_small_cases() {
        let report = exhaustive_tightness(4, 2, &r(1, 1), 1_000_000).unwrap();
        assert!(report.passed);
        // 15 four-edge families plus 20 three-edge families.
        assert_eq!(report.stats.enumerated, 35);

        let report = exhaustive_tightness(5, 2, &r(3, 5), 1_000_000).unwrap();
        assert!(report.passed);
        assert_eq!(report.stats.enumerated, 252 + 210);
    }

    #[test]
    fn exhaustive_tightness_respects_the_limit() {
        let err = exhaustive_tightness(6, 3, &r(2, 3), 1000).unwrap_err();
        match err {
            VerifyError::EnumerationTooLarge { count, limit } => {
                assert_eq!(count, BigUint::from(167_960u64));
                assert_eq!(limit, 1000);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn randomized_tightness_is_deterministic() {
        let a = randomized_tightness(6, 3, &r(2, 3), 50, 42).unwrap();
        let b = randomized_tightness(6, 3, &r(2, 3), 50, 42).unwrap();
        assert!(a.passed);
        assert_eq!(a.stats.sampled, 50);
        assert_eq!(a.to_json(), b.to_json());

        let c = randomized_tightness(6, 3, &r(2, 3), 50, 43).unwrap();
        assert!(c.passed);
    }

    #[test]
    fn randomized_tightness_with_zero_samples_is_vacuous() {
        let report = randomized_tightness(6, 3, &r(2, 3), 0, 0).unwrap();
        assert!(report.passed);
        assert_eq!(report.stats.sampled, 0);
    }

    #[test]
    fn threshold_search_reference_instances() {
        let report = threshold_search(6, 3, &r(2, 3), 100, 42).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report
            .notes
            .iter()
            .any(|n| n.contains("best step: 10 edges at c=1")));

        let report = threshold_search(5, 2, &r(3, 5), 100, 42).unwrap();
        assert!(report.passed);
        assert!(report
            .notes
            .iter()
            .any(|n| n.contains("best step: 4 edges at c=1")));
    }

    #[test]
    fn threshold_search_with_zero_trials_checks_steps_only() {
        let report = threshold_search(6, 3, &r(2, 3), 0, 0).unwrap();
        assert!(report.passed);
        assert_eq!(report.stats.sampled, 0);
        assert_eq!(report.stats.enumerated, 3);
    }

    #[test]
    fn cross_check_bounds_reference_instances() {
        let report = cross_check_bounds(7, 2, &r(1, 2)).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.notes[0].contains("[6, 6]"));

        let report = cross_check_bounds(6, 3, &r(3, 5)).unwrap();
        assert!(report.passed);
        assert!(report.notes[0].contains("[0, 10]"));
    }

    #[test]
    fn cross_check_bounds_rejects_grid_cardinalities() {
        assert!(matches!(
            cross_check_bounds(6, 3, &r(2, 3)),
            Err(VerifyError::IntegerNS)
        ));
    }

    #[test]
    fn combinations_enumerate_exactly() {
        let items = [1u64, 2, 3, 4, 5];
        assert_eq!(combinations(&items, 2).len(), 10);
        assert_eq!(combinations(&items, 5).len(), 1);
        assert_eq!(combinations(&items, 0), vec![Vec::<u64>::new()]);
        assert!(combinations(&items, 6).is_empty());
    }
}
