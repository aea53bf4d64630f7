//! Property suites: expression-engine invariants, Clifford-algebra identities
//! and the exterior/Dirac calculus on random form fields.

use std::sync::Arc;

use cartan_core::connection::Connection;
use cartan_core::manifold::Geometry;
use cartan_core::scenarios::fixtures::{minkowski, nunes, polar_plane, random_contorsion_3d, sphere, warped_3d};
use cartan_core::symexpr::sample::fd_check;
use cartan_core::symexpr::{num_equal, parse_expr, Domain, Expr, Symbols};
use proptest::prelude::*;

use crate::identities::*;

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Expr::frac(n, d)),
        Just(Expr::coord(0, "t")),
        Just(Expr::coord(1, "p")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            // denominator bounded away from zero
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.div(&b.sin().add(&Expr::int(2)))),
            inner.clone().prop_map(|a| a.sin()),
            inner.clone().prop_map(|a| a.cos()),
            inner.clone().prop_map(|a| a.sin().exp()),
            inner.clone().prop_map(|a| a.mul(&a).add(&Expr::one()).sqrt()),
            (inner, 0i32..3).prop_map(|(a, k)| a.powi(k)),
        ]
    })
}

fn domain() -> Domain {
    Domain::new(vec![(0.3, 1.2), (0.3, 1.2)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn num_equal_is_reflexive_and_symmetric(a in expr_strategy(), b in expr_strategy()) {
        let d = domain();
        prop_assert!(num_equal(&a, &a, &d).unwrap());
        prop_assert_eq!(num_equal(&a, &b, &d).unwrap(), num_equal(&b, &a, &d).unwrap());
    }

    #[test]
    fn parse_inverts_render(a in expr_strategy()) {
        let text = a.to_string();
        let back = parse_expr(&text, &Symbols::new(&["t", "p"])).unwrap();
        prop_assert!(num_equal(&a, &back, &domain()).unwrap(), "{}", text);
    }

    #[test]
    fn derivative_matches_finite_differences(a in expr_strategy(), k in 0usize..2) {
        prop_assert!(fd_check(&a, k, &domain()).is_ok(), "{}", a);
    }

    #[test]
    fn simplify_preserves_value(a in expr_strategy()) {
        prop_assert!(num_equal(&a, &a.simplify(), &domain()).unwrap(), "{}", a);
    }

    #[test]
    fn sum_rule_and_product_rule(a in expr_strategy(), b in expr_strategy()) {
        let d = domain();
        prop_assert!(num_equal(&a.add(&b).diff(0), &a.diff(0).add(&b.diff(0)), &d).unwrap());
        prop_assert!(num_equal(&a.mul(&b).diff(1), &a.diff(1).mul(&b).add(&a.mul(&b.diff(1))), &d).unwrap());
    }
}

fn check_algebra(case: &AlgebraCase) -> Result<(), TestCaseError> {
    let bad = failures(&algebra_probe(), &algebra_identities(case));
    prop_assert!(bad.is_empty(), "Cl({},{}) r={} s={}: {:?}", case.sig.p(), case.sig.q(), case.r, case.s, bad);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clifford_identities_euclidean_plane(case in algebra_case(algebras()[0])) {
        check_algebra(&case)?;
    }

    #[test]
    fn clifford_identities_euclidean_space(case in algebra_case(algebras()[1])) {
        check_algebra(&case)?;
    }

    #[test]
    fn clifford_identities_spacetime(case in algebra_case(algebras()[2])) {
        check_algebra(&case)?;
    }
}

fn calculus_case(
    g: Arc<Geometry>,
) -> impl Strategy<Value = (Arc<Geometry>, usize, cartan_core::multivector::Multivector)> {
    let n = g.n();
    (0..=n).prop_flat_map(move |r| {
        let g = g.clone();
        form(g.signature(), r, g.chart().coords()).prop_map(move |x| (g.clone(), r, x))
    })
}

fn check_calculus(g: &Arc<Geometry>, r: usize, x: &cartan_core::multivector::Multivector) -> Result<(), TestCaseError> {
    let lc = Connection::levi_civita(g);
    let bad = failures(&g.probe(), &calculus_identities(&lc, x, r));
    prop_assert!(bad.is_empty(), "r={}: {:?}", r, bad);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn calculus_on_sphere((g, r, x) in calculus_case(sphere())) {
        check_calculus(&g, r, &x)?;
    }

    #[test]
    fn calculus_on_polar_plane((g, r, x) in calculus_case(polar_plane())) {
        check_calculus(&g, r, &x)?;
    }

    #[test]
    fn calculus_on_warped_space((g, r, x) in calculus_case(warped_3d())) {
        check_calculus(&g, r, &x)?;
    }

    #[test]
    fn calculus_on_minkowski((g, r, x) in calculus_case(minkowski())) {
        check_calculus(&g, r, &x)?;
    }

    #[test]
    fn d_and_delta_ignore_the_connection(seed in 0u64..1000, (g, _r, x) in calculus_case(sphere())) {
        let bad = failures(&g.probe(), &connection_route_identities(&nunes(&g), &x));
        prop_assert!(bad.is_empty(), "{:?}", bad);
        let c = random_contorsion_3d(seed);
        let g3 = c.geometry().clone();
        let y = form(g3.signature(), (seed % 4) as usize, g3.chart().coords())
            .new_tree(&mut proptest::test_runner::TestRunner::deterministic())
            .unwrap()
            .current();
        let bad = failures(&g3.probe(), &connection_route_identities(&c, &y));
        prop_assert!(bad.is_empty(), "seed {}: {:?}", seed, bad);
    }
}
