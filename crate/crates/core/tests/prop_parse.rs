mod common;

use common::*;
use proptest::prelude::*;
use seqconv::cli::{parse_operator, parse_seq_expr, parse_shift_operator, Operator};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shift_operators_round_trip(l in shift_op()) {
        let text = l.to_string();
        prop_assert_eq!(parse_shift_operator(&text).unwrap(), l.clone(), "{}", text);
    }

    #[test]
    fn diff_operators_round_trip(m in diff_op()) {
        let text = m.to_string();
        match parse_operator(&text) {
            Ok(Operator::Diff(got)) => prop_assert_eq!(got, m, "{}", text),
            Ok(Operator::Shift(got)) => prop_assert!(m.is_zero() || got.to_string() == text, "{}", text),
            Err(e) => prop_assert!(false, "{} on {}", e, text),
        }
    }

    #[test]
    fn expressions_round_trip(e in seq_expr_wide()) {
        let text = e.to_string();
        let got = parse_seq_expr(&text).unwrap();
        prop_assert_eq!(got.to_string(), text.clone());
        prop_assert_eq!(values(&got, 12), values(&e, 12), "{}", text);
    }
}
