use emsym::expr::{curl, div, grad, parse};
use emsym::{Expr, Var};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("z".to_string()),
        (1i64..6).prop_map(|n| n.to_string()),
        (1i64..6, 2i64..5).prop_map(|(a, b)| format!("({a}/{b})")),
    ]
}

fn source() -> impl Strategy<Value = String> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            (inner.clone(), 1u32..4).prop_map(|(a, n)| format!("({a})^{n}")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("exp({a}/7)")),
        ]
    })
}

const P: [f64; 3] = [0.7, -0.4, 1.1];

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printing_reparses_to_the_same_function(src in source()) {
        let e = parse(&src).unwrap();
        let again = parse(&e.to_string()).unwrap();
        let (a, b) = (e.eval_at(P).unwrap(), again.eval_at(P).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{src} -> {e}: {a} vs {b}");
    }

    #[test]
    fn simplify_keeps_values(src in source()) {
        let e = parse(&src).unwrap();
        let (a, b) = (e.eval_at(P).unwrap(), e.simplify().eval_at(P).unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn derivative_matches_central_difference(src in source(), k in 0usize..3) {
        let e = parse(&src).unwrap();
        let d = e.diff(Var::from_index(k)).eval_at(P).unwrap();
        let h = 1e-5;
        let mut hi = P;
        let mut lo = P;
        hi[k] += h;
        lo[k] -= h;
        let fd = (e.eval_at(hi).unwrap() - e.eval_at(lo).unwrap()) / (2.0 * h);
        prop_assert!((d - fd).abs() <= 1e-5 * (1.0 + d.abs()), "{src}: {d} vs {fd}");
    }

    #[test]
    fn curl_of_gradient_and_div_of_curl_vanish(src in source()) {
        let f = parse(&src).unwrap();
        let g = grad(&f);
        for c in curl(&g).eval_at(P).unwrap() {
            prop_assert!(c.abs() < 1e-9);
        }
        prop_assert!(div(&curl(&g)).eval_at(P).unwrap().abs() < 1e-9);
    }
}

#[test]
fn parse_errors_carry_the_offset() {
    let err = parse("x*(y +").unwrap_err();
    assert_eq!(err.offset(), 6);
    assert!(parse("sin(x) + 2 ^ ^").is_err());
}

#[test]
fn exact_rationals_survive() {
    let e = parse("1/3 + 1/6").unwrap().simplify();
    assert_eq!(e, Expr::ratio(1, 2));
}
