mod support;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn dual_is_an_involution(mask in 0u32..(1 << 20)) {
        let accepted = support::dual_involution(mask).map_err(TestCaseError::fail)?;
        prop_assume!(accepted);
    }

    #[test]
    fn mutation_preserves_periods(
        top in proptest::collection::vec(0i64..3, 3),
        mid in proptest::collection::vec(0i64..3, 3),
        low in proptest::collection::vec(0i64..3, 3),
        k in 1u32..3,
        c in 1i64..3,
    ) {
        let accepted = support::mutation_invariance(&top, &mid, &low, k, c, 12).map_err(TestCaseError::fail)?;
        prop_assume!(accepted);
    }

    #[test]
    fn annihilator_is_minimal(a in 0u32..3, b in 0u32..2, c in 0u32..2) {
        let accepted = support::annihilator_minimality(a, b, c).map_err(TestCaseError::fail)?;
        prop_assume!(accepted);
    }
}

#[test]
fn minkowski_decompositions_sum_back() {
    let (polygons, checked) = support::minkowski_soundness().unwrap();
    assert!(polygons > 100 && checked > 50, "{polygons} polygons, {checked} decompositions");
}

#[test]
fn recurrences_regenerate_corpus_sequences() {
    assert_eq!(support::recurrence_round_trip().unwrap(), 8);
}
