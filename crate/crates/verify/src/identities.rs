//! Named identities `lhs = rhs` and the strategies that feed them.

use cartan_core::calculus::{
    codifferential, d_delta_via_rc, dirac, dirac_contract, dirac_wedge, ext_d, hodge, hodge_dalembertian, square_split,
};
use cartan_core::connection::Connection;
use cartan_core::multivector::{grade_of, Multivector, Probe, Signature};
use cartan_core::symexpr::{Domain, Expr};
use proptest::prelude::*;

/// A named identity `lhs = rhs`.
pub struct Identity {
    pub name: String,
    pub lhs: Multivector,
    pub rhs: Multivector,
}

fn id(name: impl Into<String>, lhs: Multivector, rhs: Multivector) -> Identity {
    Identity { name: name.into(), lhs, rhs }
}

pub fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Coefficient: a small rational plus one of a handful of functions of `vars`.
pub fn coeff(vars: Vec<Expr>) -> impl Strategy<Value = Expr> {
    let nv = vars.len();
    (-4i64..=4, 0usize..6, 0..nv, 0..nv).prop_map(move |(k, kind, i, j)| {
        let c = Expr::frac(k, 2);
        let (x, y) = (&vars[i], &vars[j]);
        let f = match kind {
            0 => Expr::zero(),
            1 => x.clone(),
            2 => x.sin(),
            3 => x.mul(y),
            4 => y.cos().mul(x),
            _ => x.mul(x).add(&Expr::one()).sqrt(),
        };
        c.add(&f)
    })
}

fn blades(sig: Signature, grade: Option<usize>) -> Vec<u32> {
    (0u32..1 << sig.n()).filter(|b| grade.is_none_or(|r| grade_of(*b) == r)).collect()
}

/// Homogeneous grade-`r` element with random coefficients.
pub fn form(sig: Signature, r: usize, vars: Vec<Expr>) -> BoxedStrategy<Multivector> {
    let bl = blades(sig, Some(r));
    proptest::collection::vec(coeff(vars), bl.len())
        .prop_map(move |cs| Multivector::from_terms(sig, bl.iter().copied().zip(cs)))
        .boxed()
}

/// Mixed-grade element.
pub fn general(sig: Signature, vars: Vec<Expr>) -> BoxedStrategy<Multivector> {
    let bl = blades(sig, None);
    proptest::collection::vec(coeff(vars), bl.len())
        .prop_map(move |cs| Multivector::from_terms(sig, bl.iter().copied().zip(cs)))
        .boxed()
}

pub fn algebras() -> Vec<Signature> {
    vec![Signature::euclidean(2), Signature::euclidean(3), Signature::minkowski()]
}

/// Two placeholder coordinates for purely algebraic checks.
pub fn algebra_vars() -> Vec<Expr> {
    vec![Expr::coord(0, "x"), Expr::coord(1, "y")]
}

pub fn algebra_probe() -> Probe {
    Probe::new(Domain::new(vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap())
}

/// Random inputs for one round of the algebraic identity table.
#[derive(Debug, Clone)]
pub struct AlgebraCase {
    pub sig: Signature,
    pub r: usize,
    pub s: usize,
    pub a: Multivector,
    pub b: Multivector,
    pub ar: Multivector,
    pub bs: Multivector,
    pub br: Multivector,
    pub bc: Multivector,
    pub x: Multivector,
    pub y: Multivector,
    pub z: Multivector,
}

pub fn algebra_case(sig: Signature) -> impl Strategy<Value = AlgebraCase> {
    let n = sig.n();
    let v = algebra_vars;
    (0..=n, 0..=n).prop_flat_map(move |(r, s)| {
        (
            (form(sig, 1, v()), form(sig, 1, v()), form(sig, r, v()), form(sig, s, v())),
            (form(sig, r, v()), form(sig, n - r, v())),
            (general(sig, v()), general(sig, v()), general(sig, v())),
        )
            .prop_map(move |((a, b, ar, bs), (br, bc), (x, y, z))| AlgebraCase {
                sig,
                r,
                s,
                a,
                b,
                ar,
                bs,
                br,
                bc,
                x,
                y,
                z,
            })
    })
}

/// Clifford-product, contraction and Hodge identities for one case.
pub fn algebra_identities(c: &AlgebraCase) -> Vec<Identity> {
    let sig = c.sig;
    let n = sig.n();
    let (r, s) = (c.r, c.s);
    let tau = Multivector::pseudoscalar(sig);
    let star = |m: &Multivector| m.hodge_star(&tau);
    let half = |m: Multivector| m.scale(&Expr::frac(1, 2));
    let scalar = |e: Expr| Multivector::scalar(sig, e);
    let (a, b, ar, bs) = (&c.a, &c.b, &c.ar, &c.bs);
    let ab = a.clifford_mul(bs);
    let ba = bs.clifford_mul(a).scale_int(sign(s));
    let mut out = vec![
        id("aB = a⌟B + a∧B", ab.clone(), a.left_contract(bs).add(&a.wedge(bs))),
        id("a⌟B = ½(aB − (−1)^s Ba)", a.left_contract(bs), half(ab.sub(&ba))),
        id("a∧B = ½(aB + (−1)^s Ba)", a.wedge(bs), half(ab.add(&ba))),
        id(
            "A_r⌟B_s = (−1)^{r(s−r)} B_s⌞A_r",
            ar.left_contract(bs),
            bs.right_contract(ar).scale_int(if r <= s { sign(r * (s - r)) } else { 1 }),
        ),
        id(
            "A_r·B_r = ⟨Ã_r B_r⟩₀",
            scalar(ar.scalar_product(&c.br)),
            ar.reversion().clifford_mul(&c.br).grade_project(0),
        ),
        id("a·b = ½(ab + ba)", scalar(a.scalar_product(b)), half(a.clifford_mul(b).add(&b.clifford_mul(a)))),
        id(
            "a⌟(X∧Y) = (a⌟X)∧Y + X̂∧(a⌟Y)",
            a.left_contract(&c.x.wedge(&c.y)),
            a.left_contract(&c.x).wedge(&c.y).add(&c.x.grade_involution().wedge(&a.left_contract(&c.y))),
        ),
        id("A⌟(B⌟C) = (A∧B)⌟C", c.x.left_contract(&c.y.left_contract(&c.z)), c.x.wedge(&c.y).left_contract(&c.z)),
        id("⋆⁻¹⋆A = A", star(ar).hodge_inverse(&tau), ar.clone()),
        id("A_r∧⋆B_r = B_r∧⋆A_r", ar.wedge(&star(&c.br)), c.br.wedge(&star(ar))),
        id(
            "A_r·⋆B_{n−r} = (−1)^{r(n−r)} B_{n−r}·⋆A_r",
            scalar(ar.scalar_product(&star(&c.bc))),
            scalar(c.bc.scalar_product(&star(ar))).scale_int(sign(r * (n - r))),
        ),
    ];
    if r <= s {
        out.push(id(
            "A_r∧⋆B_s = (−1)^{r(s−1)}⋆(Ã_r⌟B_s)",
            ar.wedge(&star(bs)),
            star(&ar.reversion().left_contract(bs)).scale_int(if s == 0 { 1 } else { sign(r * (s - 1)) }),
        ));
    }
    if r + s <= n {
        out.push(id(
            "A_r⌟⋆B_s = (−1)^{rs}⋆(Ã_r∧B_s)",
            ar.left_contract(&star(bs)),
            star(&ar.reversion().wedge(bs)).scale_int(sign(r * s)),
        ));
    }
    out
}

/// Exterior-calculus and Dirac-operator identities for one form field.
pub fn calculus_identities(lc: &Connection, x: &Multivector, r: usize) -> Vec<Identity> {
    let g = lc.geometry();
    let zero = Multivector::zero(g.signature());
    let dx = ext_d(g, x);
    let sq = dirac(lc, &dirac(lc, x));
    let (dot, wedge) = square_split(lc, x);
    vec![
        id("d² = 0", ext_d(g, &dx), zero.clone()),
        id("δ² = 0", codifferential(g, &codifferential(g, x)), zero),
        id("⋆δ = (−1)^r d⋆", hodge(g, &codifferential(g, x)), ext_d(g, &hodge(g, x)).scale_int(sign(r))),
        id("δ⋆ = (−1)^{r+1} ⋆d", codifferential(g, &hodge(g, x)), hodge(g, &dx).scale_int(-sign(r))),
        id("◇⋆ = ⋆◇", hodge_dalembertian(g, &hodge(g, x)), hodge(g, &hodge_dalembertian(g, x))),
        id("∂|∧ = d", dirac_wedge(lc, x), dx),
        id("∂|⌟ = −δ", dirac_contract(lc, x), codifferential(g, x).neg()),
        id("∂|² = ◇", sq.clone(), hodge_dalembertian(g, x)),
        id("∂|² = ∂|·∂| + ∂|∧∂|", sq, dot.add(&wedge)),
    ]
}

/// `dA` and `δA` through an arbitrary metric connection against the intrinsic operators.
pub fn connection_route_identities(c: &Connection, x: &Multivector) -> Vec<Identity> {
    let g = c.geometry();
    let (d, delta) = d_delta_via_rc(c, x);
    vec![id("d via connection", d, ext_d(g, x)), id("δ via connection", delta, codifferential(g, x))]
}

/// Names of identities that fail under the probe's relative tolerance.
pub fn failures(probe: &Probe, ids: &[Identity]) -> Vec<String> {
    ids.iter()
        .filter(|i| !probe.mv_equal(&i.lhs, &i.rhs).unwrap_or(false))
        .map(|i| {
            let res = probe.mv_residual(&i.lhs, &i.rhs).map(|r| format!("{r:.3e}")).unwrap_or_else(|e| e.to_string());
            format!("{} (residual {res})", i.name)
        })
        .collect()
}
