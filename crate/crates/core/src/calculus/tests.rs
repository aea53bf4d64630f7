use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::connection::{Connection, RicciSlot};
use crate::manifold::Geometry;
use crate::multivector::Multivector;
use crate::scenarios::fixtures::{minkowski, nunes, polar_plane, random_contorsion_3d, random_form, sphere, warped_3d};
use crate::symexpr::{parse_expr, Expr, Symbols};

fn e(g: &Geometry, src: &str) -> Expr {
    parse_expr(src, &Symbols::new(g.chart().names())).unwrap()
}

fn same(g: &Geometry, a: &Multivector, b: &Multivector) {
    let r = g.probe().mv_residual(a, b).unwrap();
    assert!(r < 1e-8, "residual {r}: {} vs {}", g.render_frame(a), g.render_frame(b));
}

fn geometries() -> Vec<Arc<Geometry>> {
    vec![sphere(), polar_plane(), warped_3d(), minkowski()]
}

#[test]
fn exterior_derivative_examples() {
    let g = sphere();
    let t = g.chart().coord(0);
    same(&g, &ext_d(&g, &Multivector::scalar(g.signature(), t.sin())), &g.theta(0).scale(&t.cos()));
    same(&g, &ext_d(&g, &g.theta(1)), &g.theta(0).wedge(&g.theta(1)).scale(&e(&g, "cot(t)")));
}

#[test]
fn d_and_delta_nilpotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in geometries() {
        for r in 0..=g.n() {
            let a = random_form(&g, r, &mut rng);
            let zero = Multivector::zero(g.signature());
            same(&g, &ext_d(&g, &ext_d(&g, &a)), &zero);
            same(&g, &codifferential(&g, &codifferential(&g, &a)), &zero);
        }
    }
}

#[test]
fn codifferential_examples() {
    let chart =
        crate::manifold::Chart::new(&["x", "y"], crate::symexpr::Domain::new(vec![(-1.0, 1.0); 2]).unwrap()).unwrap();
    let x = chart.coord(0);
    let q = vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), Expr::one()]];
    let g = Geometry::build(chart, crate::multivector::Signature::euclidean(2), q).unwrap();
    let a = g.theta(0).scale(&x);
    same(&g, &codifferential(&g, &a), &Multivector::scalar(g.signature(), Expr::int(-1)));
}

#[test]
fn hodge_commutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in geometries() {
        let n = g.n();
        for r in 0..=n {
            let a = random_form(&g, r, &mut rng);
            // ⋆δ = (−1)^r d⋆ and δ⋆ = (−1)^{r+1} ⋆d
            let s = if r % 2 == 0 { 1 } else { -1 };
            same(&g, &hodge(&g, &codifferential(&g, &a)), &ext_d(&g, &hodge(&g, &a)).scale_int(s));
            same(&g, &codifferential(&g, &hodge(&g, &a)), &hodge(&g, &ext_d(&g, &a)).scale_int(-s));
            same(&g, &hodge_dalembertian(&g, &hodge(&g, &a)), &hodge(&g, &hodge_dalembertian(&g, &a)));
        }
    }
}

#[test]
fn covariant_derivative_examples() {
    let g = sphere();
    let lc = Connection::levi_civita(&g);
    same(&g, &cov_deriv(&lc, &g.theta(1), 0), &Multivector::zero(g.signature()));
    same(&g, &cov_deriv(&lc, &g.theta(1), 1), &g.theta(0).scale(&e(&g, "-cot(t)")));
    let nu = nunes(&g);
    for a in 0..2 {
        for b in 0..2 {
            assert!(cov_deriv(&nu, &g.theta(b), a).is_zero());
        }
    }
}

#[test]
fn commutator_and_derivation_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let conns = [Connection::levi_civita(&sphere()), random_contorsion_3d(5), Connection::levi_civita(&minkowski())];
    for c in &conns {
        let g = c.geometry();
        for r in 0..=g.n() {
            let a = random_form(g, r, &mut rng);
            for k in 0..g.n() {
                same(g, &cov_deriv(c, &a, k), &cov_deriv_by_derivation(c, &a, k));
            }
        }
    }
}

#[test]
fn dirac_parts_are_d_and_minus_delta() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for g in geometries() {
        let lc = Connection::levi_civita(&g);
        for r in 0..=g.n() {
            let a = random_form(&g, r, &mut rng);
            same(&g, &dirac_wedge(&lc, &a), &ext_d(&g, &a));
            same(&g, &dirac_contract(&lc, &a), &codifferential(&g, &a).neg());
            same(&g, &dirac(&lc, &a), &ext_d(&g, &a).sub(&codifferential(&g, &a)));
        }
    }
    let g = sphere();
    let lc = Connection::levi_civita(&g);
    let f = Multivector::scalar(g.signature(), e(&g, "cos(t)"));
    same(&g, &dirac(&lc, &f), &g.theta(0).scale(&e(&g, "-sin(t)")));
}

#[test]
fn connection_independent_d_delta() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let conns = [nunes(&sphere()), random_contorsion_3d(21)];
    for c in &conns {
        let g = c.geometry();
        for r in 0..=g.n() {
            let a = random_form(g, r, &mut rng);
            let (d, delta) = d_delta_via_rc(c, &a);
            same(g, &d, &ext_d(g, &a));
            same(g, &delta, &codifferential(g, &a));
        }
    }
}

#[test]
fn square_of_dirac() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for g in geometries() {
        let lc = Connection::levi_civita(&g);
        for r in 0..=g.n() {
            let a = random_form(&g, r, &mut rng);
            let (dot, wedge) = square_split(&lc, &a);
            let sq = dirac(&lc, &dirac(&lc, &a));
            same(&g, &dot.add(&wedge), &sq);
            same(&g, &sq, &hodge_dalembertian(&g, &a));
            same(&g, &wedge, &ricci_operator(&lc, &a));
        }
        let data = lc.ricci_data(RicciSlot::Last);
        for a in 0..g.n() {
            let (_, wedge) = square_split(&lc, &g.theta(a));
            same(&g, &wedge, &data.ricci_forms[a]);
        }
    }
}

#[test]
fn einstein_operator_routes() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for g in geometries() {
        let lc = Connection::levi_civita(&g);
        let data = lc.ricci_data(RicciSlot::Last);
        for a in 0..g.n() {
            same(&g, &einstein_operator(&lc, &g.theta(a)), &data.einstein[a]);
        }
        for r in 0..=g.n() {
            let x = random_form(&g, r, &mut rng);
            same(&g, &einstein_operator(&lc, &x), &einstein_operator_alt(&lc, &x));
        }
    }
}

#[test]
fn bianchi_identities_vanish() {
    let g = sphere();
    let conns =
        [Connection::levi_civita(&g), nunes(&g), Connection::levi_civita(&polar_plane()), random_contorsion_3d(29)];
    for c in &conns {
        let rep = bianchi_reports(c).unwrap();
        assert!(rep.max() < 1e-8, "{rep:?}");
        assert!(dual_torsion_bianchi(c).unwrap() < 1e-8);
    }
}

#[test]
fn dual_torsion_two_routes() {
    let g = sphere();
    for c in [Connection::levi_civita(&g), nunes(&g), random_contorsion_3d(31), Connection::levi_civita(&warped_3d())] {
        let direct = dual_torsion_d(&c);
        let split = dual_torsion_d_decomposed(&c);
        let probe = c.geometry().probe();
        assert!(direct.sub(&split).max_abs(&probe).unwrap() < 1e-8);
    }
    let nu = nunes(&g);
    same(&g, dual_torsion_d(&nu).get(&[1]), &g.theta(0).scale(&e(&g, "-1/sin(t)^2")));
}

#[test]
fn evans_counterexamples() {
    let g = sphere();
    let rep = evans_check(&Connection::levi_civita(&g)).unwrap();
    assert!(
        rep.lhs.get(&[0]).is_zero()
            || g.probe().mv_residual(rep.lhs.get(&[0]), &Multivector::zero(g.signature())).unwrap() < 1e-9
    );
    same(&g, rep.rhs.get(&[0]), &g.theta(1));
    assert!(!rep.holds[0]);
    assert!(rep.two_route_residual < 1e-9);
    let rep = evans_check(&nunes(&g)).unwrap();
    assert!(rep.rhs.entries().iter().all(Multivector::is_zero));
    assert!(!rep.holds[1]);
}

#[test]
fn dual_ricci_like_is_not_ricci() {
    let g = sphere();
    let lc = Connection::levi_civita(&g);
    let like = dual_ricci_like(&lc);
    let data = lc.ricci_data(RicciSlot::Last);
    for a in 0..2 {
        same(&g, &like[a], &Multivector::zero(g.signature()));
        same(&g, &data.ricci_forms[a], &g.theta(a).neg());
    }
}

#[test]
fn cotetrad_wave_equation_cases() {
    let rep = cotetrad_wave_equation(&Connection::levi_civita(&minkowski()), None).unwrap();
    assert!(rep.residual < 1e-9 && rep.ricci_flat);
    let rep = cotetrad_wave_equation(&Connection::levi_civita(&sphere()), None).unwrap();
    assert!(rep.residual < 1e-9 && !rep.ricci_flat);
    let rep = cotetrad_wave_equation(&Connection::levi_civita(&polar_plane()), None).unwrap();
    assert!(rep.residual < 1e-9 && rep.ricci_flat);
}

#[test]
fn ext_cov_d_torsion_and_metric() {
    let g = sphere();
    let nu = nunes(&g);
    let thetas = IndexedForms::from_fn(1, 0, 2, |ix| g.theta(ix[0]));
    let d = ext_cov_d(&nu, &thetas).unwrap();
    same(&g, d.get(&[1]), nu.torsion_forms().get(&[1]));
    // D η_{ab} = 0
    let eta = IndexedForms::from_fn(0, 2, 2, |ix| {
        Multivector::scalar(g.signature(), if ix[0] == ix[1] { Expr::int(g.eta(ix[0])) } else { Expr::zero() })
    });
    for c in [Connection::levi_civita(&g), nu] {
        assert!(ext_cov_d(&c, &eta).unwrap().max_abs(&g.probe()).unwrap() < 1e-12);
    }
}

#[test]
fn double_exterior_covariant_derivative() {
    let c = random_contorsion_3d(37);
    let g = c.geometry().clone();
    let x = IndexedForms::from_fn(1, 0, 3, |ix| random_form(&g, 1, &mut ChaCha8Rng::seed_from_u64(41 + ix[0] as u64)));
    let dd = ext_cov_d(&c, &ext_cov_d(&c, &x).unwrap()).unwrap();
    let rx = IndexedForms::from_fn(1, 0, 3, |ix| {
        let parts: Vec<Multivector> = (0..3).map(|b| c.curvature_forms().get(&[ix[0], b]).wedge(x.get(&[b]))).collect();
        Multivector::sum(g.signature(), &parts)
    });
    assert!(dd.sub(&rx).max_abs(&g.probe()).unwrap() < 1e-8);
}
