//! Geometries and connections used by the built-in scenarios and the tests.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connection::{Coeffs3, Connection};
use crate::manifold::{Chart, Geometry};
use crate::multivector::{grade_of, Multivector, Signature};
use crate::symexpr::{Domain, Expr, Params};

/// Unit sphere, cotetrad `diag(1, sin ϑ)`, coordinates `(t, p)`.
pub fn sphere() -> Arc<Geometry> {
    sphere_on(0.2, 2.9)
}

/// The unit sphere restricted to `ϑ ∈ [lo, hi]`.
pub fn sphere_on(lo: f64, hi: f64) -> Arc<Geometry> {
    let chart =
        Chart::new(&["t", "p"], Domain::new(vec![(lo, hi), (0.2, 6.0)]).expect("valid box")).expect("valid chart");
    let t = chart.coord(0);
    Geometry::build(chart, Signature::euclidean(2), vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), t.sin()]])
        .expect("sphere cotetrad is regular away from the poles")
}

/// Flat connection `ω^a_b = 0` in the sphere's orthonormal frame.
pub fn nunes(g: &Arc<Geometry>) -> Connection {
    let n = g.n();
    Connection::from_coefficients(g, vec![vec![vec![Expr::zero(); n]; n]; n]).expect("shape matches")
}

/// Euclidean plane in polar coordinates `(r, p)`.
pub fn polar_plane() -> Arc<Geometry> {
    let chart =
        Chart::new(&["r", "p"], Domain::new(vec![(0.5, 3.0), (0.2, 6.0)]).expect("valid box")).expect("valid chart");
    let r = chart.coord(0);
    Geometry::build(chart, Signature::euclidean(2), vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), r]])
        .expect("polar cotetrad is regular for r > 0")
}

/// Minkowski space with the identity cotetrad on `x0..x3`, frame labels from 0.
pub fn minkowski() -> Arc<Geometry> {
    minkowski_with(Params::default())
}

pub fn minkowski_with(params: Params) -> Arc<Geometry> {
    let chart = Chart::new(&["x0", "x1", "x2", "x3"], Domain::new(vec![(-1.0, 1.0); 4]).expect("valid box"))
        .expect("valid chart")
        .with_params(params)
        .with_frame_base(0);
    let q = (0..4).map(|i| (0..4).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect()).collect();
    Geometry::build(chart, Signature::minkowski(), q).expect("identity cotetrad")
}

/// Warped Euclidean 3-space, cotetrad `diag(1, x, x·sin(y) + 2)` on a box with `x > 0`.
pub fn warped_3d() -> Arc<Geometry> {
    let chart =
        Chart::new(&["x", "y", "z"], Domain::new(vec![(0.5, 2.0), (0.3, 2.5), (-1.0, 1.0)]).expect("valid box"))
            .expect("valid chart");
    let x = chart.coord(0);
    let y = chart.coord(1);
    let q = vec![
        vec![Expr::one(), Expr::zero(), Expr::zero()],
        vec![Expr::zero(), x.clone(), Expr::zero()],
        vec![Expr::zero(), Expr::zero(), x.mul(&y.sin()).add(&Expr::int(2))],
    ];
    Geometry::build(chart, Signature::euclidean(3), q).expect("regular on the box")
}

/// Random antisymmetric frame torsion with small polynomial coefficients.
pub fn random_torsion(g: &Geometry, seed: u64) -> Coeffs3 {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = vec![vec![vec![Expr::zero(); n]; n]; n];
    let coords = g.chart().coords();
    for a in 0..n {
        for b in 0..n {
            for c in b + 1..n {
                let k0 = Expr::frac(rng.gen_range(-3..=3), 2);
                let k1 = Expr::frac(rng.gen_range(-3..=3), 2);
                let i = rng.gen_range(0..n);
                let e = k0.add(&k1.mul(&coords[i]));
                t[a][b][c] = e.clone();
                t[a][c][b] = e.neg();
            }
        }
    }
    t
}

/// Metric connection on [`warped_3d`] with [`random_torsion`].
pub fn random_contorsion_3d(seed: u64) -> Connection {
    let g = warped_3d();
    let t = random_torsion(&g, seed);
    Connection::from_contorsion(&g, &t).expect("torsion is antisymmetric").0
}

/// Random homogeneous r-form with small trigonometric-polynomial coefficients.
pub fn random_form<R: Rng>(g: &Geometry, r: usize, rng: &mut R) -> Multivector {
    let n = g.n();
    let coords = g.chart().coords();
    let terms: Vec<(u32, Expr)> = (0u32..1 << n)
        .filter(|b| grade_of(*b) == r)
        .map(|b| {
            let k = Expr::frac(rng.gen_range(-4..=4), 2);
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let f = match rng.gen_range(0..3) {
                0 => coords[i].mul(&coords[j]),
                1 => coords[i].sin(),
                _ => coords[i].cos().mul(&coords[j]),
            };
            (b, k.add(&f))
        })
        .collect();
    Multivector::from_terms(g.signature(), terms)
}

/// Metric connection on a Minkowski chart with constant frame torsion `T⁰₁₂ = k`.
pub fn torsion_connection(g: &Arc<Geometry>) -> Connection {
    let n = g.n();
    let mut t = vec![vec![vec![Expr::zero(); n]; n]; n];
    let k = Expr::param("k");
    t[0][1][2] = k.clone();
    t[0][2][1] = k.neg();
    Connection::from_contorsion(g, &t).expect("torsion is antisymmetric").0
}
