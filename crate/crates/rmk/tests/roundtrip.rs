//! Property-based printer/parser round trips.

use proptest::prelude::*;
use rmk::syntax::{parse_formula, print_formula, Formula, UnaryOp, ALL_OPS};
use rmk::translation::{parse_fol, print_fol, standard_translation};

fn arb_op() -> impl Strategy<Value = UnaryOp> {
    prop::sample::select(ALL_OPS.to_vec())
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        (0u32..4).prop_map(Formula::Letter),
    ];
    leaf.prop_recursive(6, 64, 8, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (arb_op(), inner).prop_map(|(op, a)| Formula::unary(op, a)),
        ]
    })
}

proptest! {
    #[test]
    fn formula_print_parse_round_trip(phi in arb_formula()) {
        let text = print_formula(&phi);
        prop_assert_eq!(parse_formula(&text).unwrap(), phi);
    }

    #[test]
    fn translated_fol_round_trips(phi in arb_formula()) {
        let alpha = standard_translation(0, &phi);
        let text = print_fol(&alpha);
        prop_assert_eq!(parse_fol(&text).unwrap(), alpha);
    }
}
