mod common;

use common::*;
use eisenpole::root_datum::FormKind;
use proptest::prelude::*;

#[test]
fn relative_groups_and_cosets_match_brute_force() {
    for (kind, order, reps, orbits) in [
        (FormKind::Split, 192, 24, 12),
        (FormKind::QuadTimesF, 48, 12, 9),
        (FormKind::CubicGalois, 12, 6, 6),
        (FormKind::CubicNonGalois, 12, 6, 6),
    ] {
        let o = coset_oracle(kind);
        assert_eq!(o.group_order, order, "{kind}");
        assert_eq!(o.fast_group_order, order, "{kind}");
        assert_eq!(o.reps, reps, "{kind}");
        assert!(o.reps_agree, "{kind}: coset representatives differ from brute force");
        assert_eq!(o.orbits, orbits, "{kind}");
        assert!(o.orbits_agree, "{kind}: root orbits differ");
    }
}

#[test]
fn gk_factor_is_a_cocycle() {
    for kind in FormKind::ALL {
        let (count, bad) = cocycle(kind);
        assert!(count > 0);
        assert!(bad.is_empty(), "{bad:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn order_is_additive(a in lexpr_strategy(), b in lexpr_strategy(), s0 in point_strategy()) {
        prop_assert!(additivity(&a, &b, s0).is_ok(), "{:?}", additivity(&a, &b, s0));
    }

    #[test]
    fn functional_equation_is_invisible(e in lexpr_strategy(), s0 in point_strategy()) {
        prop_assert!(fe_coherent(&e, s0).is_ok(), "{:?}", fe_coherent(&e, s0));
    }
}
