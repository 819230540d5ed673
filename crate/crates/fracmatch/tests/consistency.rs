//! Cross-module agreement on every admissible desk-scale instance: the
//! closed-form count, the materialized family, the weight-vector scan, and
//! the LP decision must all tell the same story.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use fracmatch::lp::MatchingDecision;
use fracmatch::{construct, counting, lp, verify, Rational, ThresholdWeights};

fn grid_cardinalities(n: u32, k: u32) -> impl Iterator<Item = Rational> {
    ((k + 1)..=n).map(move |m| Rational::ratio(m as i64, n as i64))
}

#[test]
fn three_way_agreement_up_to_n10() {
    for n in 2..=10u32 {
        for k in 1..n {
            for s in grid_cardinalities(n, k) {
                let ec = counting::extremal_count(n.into(), k.into(), &s).unwrap();

                let family = construct::extremal_family(n, k, &s, ec.argmax_c).unwrap();
                assert_eq!(
                    BigUint::from(family.edge_count()),
                    ec.max_edges,
                    "family size vs formula at n={n} k={k} s={s}"
                );

                let ns = ec.terms.len() as u64 + 1;
                let best_step = (1..ns)
                    .map(|c| {
                        let w =
                            ThresholdWeights::uniform_step(n.into(), k.into(), &s, c).unwrap();
                        construct::count_threshold(n, k, &s, &w).unwrap()
                    })
                    .max()
                    .unwrap();
                assert_eq!(
                    best_step,
                    ec.max_edges.to_u64().unwrap(),
                    "best step scan vs formula at n={n} k={k} s={s}"
                );

                match lp::has_matching(&family, &s).unwrap() {
                    MatchingDecision::Infeasible(cover) => {
                        assert!(cover.is_valid_for(&family).is_ok());
                        assert!(cover.value < s);
                    }
                    MatchingDecision::Feasible(_) => {
                        panic!("extremal family matched at n={n} k={k} s={s}")
                    }
                }
            }
        }
    }
}

#[test]
fn every_one_edge_extension_flips_the_decision_up_to_n6() {
    for n in 2..=6u32 {
        for k in 1..n {
            for s in grid_cardinalities(n, k) {
                let report = verify::verify_extremal(n, k, &s).unwrap();
                assert!(report.passed, "n={n} k={k} s={s}: {report:?}");
            }
        }
    }
}

#[test]
fn reports_replay_byte_for_byte() {
    let s = Rational::ratio(2, 3);
    for seed in [0u64, 7, 99] {
        let a = verify::randomized_tightness(6, 3, &s, 25, seed).unwrap();
        let b = verify::randomized_tightness(6, 3, &s, 25, seed).unwrap();
        assert_eq!(a.to_json(), b.to_json());

        let a = verify::threshold_search(6, 3, &s, 25, seed).unwrap();
        let b = verify::threshold_search(6, 3, &s, 25, seed).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    let a = verify::verify_extremal(6, 3, &s).unwrap();
    let b = verify::verify_extremal(6, 3, &s).unwrap();
    assert_eq!(a.to_json(), b.to_json());

    let s_off = Rational::ratio(3, 5);
    let a = verify::cross_check_bounds(6, 3, &s_off).unwrap();
    let b = verify::cross_check_bounds(6, 3, &s_off).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn random_threshold_families_never_beat_the_lp_bound() {
    // The family built from any valid weight vector has no s-matching, so
    // its size is bounded by the extremal count; spot-check the LP agrees.
    let s = Rational::ratio(2, 3);
    let w = ThresholdWeights::uniform_step(6, 3, &s, 2).unwrap();
    let fam = construct::threshold_family(6, 3, &s, &w).unwrap();
    assert_eq!(fam.count, 4);
    match lp::has_matching(&fam.family, &s).unwrap() {
        MatchingDecision::Infeasible(cover) => assert!(cover.value < s),
        MatchingDecision::Feasible(_) => panic!("threshold family matched"),
    }
}
