use proptest::prelude::*;

use odelin::expr::{
    canonical, integrate_rulebased, normalize, parse_expr, Expr, ParseContext, Symbol,
};
use odelin::lambda::{aux_system_residuals, lambda_determining_residual, lambda_from_aux};
use odelin::lie_conditions::lie_conditions_residuals;
use odelin::lie_tresse::lie_tresse_residuals;
use odelin::ode::{extract_cubic, CubicOde};
use odelin::transform::{pushforward_coefficients, transform_matches_ode, PointTransform};

fn zero(e: &Expr) -> bool {
    normalize(e).unwrap().is_zero()
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::x()),
        Just(Expr::y()),
        (-3i64..=3).prop_map(Expr::int),
        (1i64..=4, 2i64..=5).prop_map(|(n, d)| Expr::rational(n, d)),
    ]
}

/// Rational functions of x, y with the occasional exp kernel.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::sum),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::product),
            (inner.clone(), 0i64..=3).prop_map(|(e, n)| e.pow(n)),
            inner
                .clone()
                .prop_map(|e| (e.clone() * e + Expr::int(1)).pow(-1)),
            inner.prop_map(|e| (e * Expr::rational(1, 2)).exp()),
        ]
    })
}

/// Polynomials in x, y of total degree at most 2 with small integer coefficients.
fn quadratic() -> impl Strategy<Value = Expr> {
    prop::collection::vec(-3i64..=3, 6).prop_map(|c| {
        let (x, y) = (Expr::x(), Expr::y());
        let mono = [
            Expr::one(),
            x.clone(),
            y.clone(),
            x.clone() * x.clone(),
            x.clone() * y.clone(),
            y.clone() * y,
        ];
        Expr::sum(c.into_iter().zip(mono).map(|(k, m)| Expr::int(k) * m))
    })
}

fn transform() -> impl Strategy<Value = PointTransform> {
    (quadratic(), quadratic()).prop_filter_map("singular jacobian", |(phi, psi)| {
        PointTransform::new(phi, psi).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normalize_is_idempotent(e in expr()) {
        let once = canonical(&e).unwrap();
        prop_assert_eq!(canonical(&once).unwrap(), once);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mixed_partials_commute(e in expr()) {
        prop_assert!(zero(&(e.dx().dy() - e.dy().dx())));
    }

    #[test]
    fn product_rule(f in expr(), g in expr()) {
        let lhs = (f.clone() * g.clone()).dx();
        prop_assert!(zero(&(lhs - f.dx() * g.clone() - f * g.dx())));
    }

    #[test]
    fn render_reparse(e in expr()) {
        let back = parse_expr(&e.to_string(), &ParseContext::new()).unwrap();
        prop_assert!(zero(&(back - e)));
    }

    #[test]
    fn total_derivative_is_chain_rule(e in expr()) {
        let ode = CubicOde::free_particle();
        let d = ode.total_derivative(&e);
        prop_assert!(zero(&(d - e.dx() - Expr::yp() * e.dy())));
    }

    #[test]
    fn integration_differentiates_back(e in quadratic(), k in -3i64..=3) {
        let f = e * (Expr::x() * Expr::rational(1, 2)).exp() + Expr::int(k);
        if let Ok(big) = integrate_rulebased(&f, &Symbol::X) {
            prop_assert!(zero(&(big.dx() - f)));
        }
    }

    #[test]
    fn extraction_ignores_leading_multiplier(
        c in prop::collection::vec(quadratic(), 4),
        m in quadratic(),
    ) {
        prop_assume!(!zero(&m));
        let p = Expr::yp();
        let cubic = Expr::sum([
            c[3].clone() * p.clone().pow(3),
            c[2].clone() * p.clone().pow(2),
            c[1].clone() * p,
            c[0].clone(),
        ]);
        let eq = m * (Expr::Sym(Symbol::Ypp) + cubic);
        let ode = extract_cubic(&eq).unwrap();
        for (got, want) in ode.coeffs().into_iter().zip([&c[3], &c[2], &c[1], &c[0]]) {
            prop_assert!(zero(&(got.clone() - want.clone())));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pushforward_is_linearizable(tr in transform()) {
        let (pf, ode) = pushforward_coefficients(&tr).unwrap();
        let lt = lie_tresse_residuals(&ode).unwrap();
        prop_assert!(lt.first.is_zero_literal() && lt.second.is_zero_literal());
        let aux = pf.aux();
        for r in lie_conditions_residuals(&ode, &aux).unwrap() {
            prop_assert!(r.is_zero_literal(), "lie condition residual {}", r);
        }
        for r in aux_system_residuals(&ode, &aux).unwrap() {
            prop_assert!(r.is_zero_literal(), "reduced system residual {}", r);
        }
        let lambda = lambda_from_aux(&ode, &aux, None).unwrap();
        prop_assert!(lambda_determining_residual(&ode, &lambda).unwrap().is_zero_literal());
        prop_assert!(transform_matches_ode(&tr, &ode).unwrap().matches);
    }

    #[test]
    fn pushforward_is_affine_invariant(
        tr in transform(),
        m in prop::collection::vec(-2i64..=2, 6),
    ) {
        let (a, b, c, d) = (m[0], m[1], m[2], m[3]);
        prop_assume!(a * d - b * c != 0);
        let e = Expr::int;
        let phi = e(a) * tr.phi.clone() + e(b) * tr.psi.clone() + e(m[4]);
        let psi = e(c) * tr.phi.clone() + e(d) * tr.psi.clone() + e(m[5]);
        let moved = PointTransform::new(phi, psi).unwrap();
        let (_, base) = pushforward_coefficients(&tr).unwrap();
        prop_assert!(transform_matches_ode(&moved, &base).unwrap().matches);
        let swapped = PointTransform::new(tr.psi.clone(), tr.phi.clone()).unwrap();
        prop_assert!(transform_matches_ode(&swapped, &base).unwrap().matches);
    }
}
