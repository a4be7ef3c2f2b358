//! Property tests for jets and the expression language: derivatives against
//! central differences, exactness on quadratics, printer round trips and
//! parser robustness.

#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use warpfield_core::fieldexpr::ExprError;
use warpfield_core::jets::{fd_oracle, DEFAULT_FD_STEP};
use warpfield_core::{FieldExpr, Jet2, Point};

const VARS: [&str; 3] = ["x", "y", "z"];

/// Smooth expressions that stay well inside every function's domain on
/// the cube `[-1, 1]^3`.
fn smooth_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        prop::sample::select(VARS.to_vec()).prop_map(str::to_string),
        (-3.0f64..3.0).prop_map(|c| format!("{c:.3}")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) / (2 + ({b})^2)")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("tanh({a})")),
            inner.clone().prop_map(|a| format!("exp(tanh({a}))")),
            inner.clone().prop_map(|a| format!("log(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("sqrt(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("({a})^3")),
        ]
    })
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 3)
}

fn jet_at(e: &FieldExpr, p: &Point) -> Jet2 {
    let env: Vec<Jet2> = (0..3).map(|k| Jet2::seed(p, k).unwrap()).collect();
    e.eval(&env).unwrap()
}

fn inf(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn jet_derivatives_match_central_differences(src in smooth_expr(), c in point()) {
        let e = FieldExpr::parse(&src, &VARS).unwrap();
        let p = Point::new(c).unwrap();
        let jet = jet_at(&e, &p);
        let fd_at = |h: f64| fd_oracle::<_, ExprError>(|q| e.eval(q.coords()), &p, h).unwrap();
        let (fd, half) = (fd_at(DEFAULT_FD_STEP), fd_at(DEFAULT_FD_STEP / 2.0));
        // Central differences err by O(h²); halving h estimates that term, so
        // large third derivatives of random expressions do not fail the bound.
        let g_trunc = inf(fd.grad().iter().zip(half.grad()).map(|(a, b)| a - b));
        let g_err = inf(jet.grad().iter().zip(fd.grad()).map(|(a, b)| a - b));
        let g_tol = 1e-6 * (1.0 + inf(jet.grad().iter().copied())) + 2.0 * g_trunc;
        prop_assert!(g_err <= g_tol, "{src}: grad err {g_err}");
        let (hj, hf, hh) = (jet.hess_matrix(), fd.hess_matrix(), half.hess_matrix());
        let h_trunc = inf(hf.iter().flatten().zip(hh.iter().flatten()).map(|(a, b)| a - b));
        let h_err = inf(hj.iter().flatten().zip(hf.iter().flatten()).map(|(a, b)| a - b));
        let h_tol = 1e-4 * (1.0 + inf(hj.iter().flatten().copied())) + 2.0 * h_trunc;
        prop_assert!(h_err <= h_tol, "{src}: hess err {h_err}");
    }

    #[test]
    fn hessian_is_bitwise_symmetric(src in smooth_expr(), c in point()) {
        let e = FieldExpr::parse(&src, &VARS).unwrap();
        let h = jet_at(&e, &Point::new(c).unwrap()).hess_matrix();
        for i in 0..h.len() {
            for j in 0..h.len() {
                prop_assert_eq!(h[i][j].to_bits(), h[j][i].to_bits());
            }
        }
    }

    #[test]
    fn real_and_jet_evaluation_agree_exactly(src in smooth_expr(), c in point()) {
        let e = FieldExpr::parse(&src, &VARS).unwrap();
        let real: f64 = e.eval(&c).unwrap();
        let jet = jet_at(&e, &Point::new(c).unwrap());
        prop_assert_eq!(real.to_bits(), jet.value().to_bits());
    }

    #[test]
    fn printing_is_a_fixed_point(src in smooth_expr()) {
        let e = FieldExpr::parse(&src, &VARS).unwrap();
        let printed = e.to_string();
        let again = FieldExpr::parse(&printed, &VARS).unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn quadratics_are_exact(
        a in -2i32..=2, b in -2i32..=2, c in -2i32..=2, d in -2i32..=2,
        x in -4i32..=4, y in -4i32..=4,
    ) {
        // Integer data keeps every intermediate exactly representable.
        let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
        let (x, y) = (x as f64 / 4.0, y as f64 / 4.0);
        let p = Point::new(vec![x, y]).unwrap();
        let (u, v) = (Jet2::seed(&p, 0).unwrap(), Jet2::seed(&p, 1).unwrap());
        let f = u * u * a + u * v * b + v * c + Jet2::constant(d);
        prop_assert_eq!(f.value(), a * x * x + b * x * y + c * y + d);
        prop_assert_eq!(f.grad(), &[2.0 * a * x + b * y, b * x + c][..]);
        prop_assert_eq!(f.hess_matrix(), vec![vec![2.0 * a, b], vec![b, 0.0]]);
    }

    #[test]
    fn parser_never_panics(src in "[ -~]{0,40}") {
        let _ = FieldExpr::parse(&src, &VARS);
    }

    #[test]
    fn parser_never_panics_on_near_misses(
        src in smooth_expr(),
        cut in 0usize..64,
        junk in prop::sample::select(vec!["(", ")", ",", "^", "*", "sin", "1e", ".", "pow("]),
    ) {
        let cut = cut.min(src.len());
        let mangled = format!("{}{}{}", &src[..cut], junk, &src[cut..]);
        let _ = FieldExpr::parse(&mangled, &VARS);
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    for src in [
        "",
        "(",
        ")",
        "x +",
        "* y",
        "sin()",
        "sin(x, y)",
        "pow(x)",
        "x y",
        "1e",
        "w",
        "x ^",
        "((x)",
        "x))",
        ",",
        "exp(,)",
        "1..2",
    ] {
        assert!(FieldExpr::parse(src, &VARS).is_err(), "{src:?} parsed");
    }
}
