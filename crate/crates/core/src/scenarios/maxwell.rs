//! Maxwell's equations `dF = 0`, `δF = −J` in their equivalent forms.

use std::sync::Arc;

use thiserror::Error;

use crate::calculus::{codifferential, dirac, ext_d};
use crate::connection::Connection;
use crate::manifold::Geometry;
use crate::multivector::{grade_of, Multivector};
use crate::symexpr::{EvalError, Evaluator, Expr};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaxwellError {
    #[error("Maxwell checks need a 4-dimensional Lorentzian chart of signature (1,3)")]
    Signature,
    #[error("F must be a 2-form and J a 1-form")]
    Grade,
    #[error("fixture {label} does not satisfy dF = 0, δF = −J (residuals {closed:.3e}, {coclosed:.3e})")]
    NotASolution { label: String, closed: f64, coclosed: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A field strength and its source.
#[derive(Debug, Clone)]
pub struct MaxwellField {
    pub label: String,
    pub f: Multivector,
    pub j: Multivector,
}

impl MaxwellField {
    /// Accepts `(F, J)` only if `dF = 0` and `δF = −J` hold on the geometry.
    pub fn validated(g: &Geometry, label: &str, f: Multivector, j: Multivector) -> Result<MaxwellField, MaxwellError> {
        check_shape(g, &f, &j)?;
        let probe = g.probe();
        let closed = probe.mv_residual(&ext_d(g, &f), &Multivector::zero(g.signature()))?;
        let coclosed = probe.mv_residual(&codifferential(g, &f), &j.neg())?;
        if !(closed <= probe.sampling.tol && coclosed <= probe.sampling.tol) {
            return Err(MaxwellError::NotASolution { label: label.to_string(), closed, coclosed });
        }
        Ok(MaxwellField { label: label.to_string(), f, j })
    }
}

fn check_shape(g: &Geometry, f: &Multivector, j: &Multivector) -> Result<(), MaxwellError> {
    let sig = g.signature();
    if sig.n() != 4 || sig.p() != 1 || sig.q() != 3 {
        return Err(MaxwellError::Signature);
    }
    let grade_ok = |x: &Multivector, r: usize| x.terms().all(|(b, _)| grade_of(b) == r);
    if !grade_ok(f, 2) || !grade_ok(j, 1) {
        return Err(MaxwellError::Grade);
    }
    Ok(())
}

/// The three flat-space fixtures: a constant field, a null plane wave and a
/// linearly growing field with a constant source.
pub fn flat_fixtures(g: &Geometry) -> Result<Vec<MaxwellField>, MaxwellError> {
    let sig = g.signature();
    let x = g.chart().coords();
    let b = |i: usize, j: usize| (1u32 << i) | (1 << j);
    let static_f = Multivector::blade(sig, b(0, 1), Expr::frac(3, 2));
    let phase = x[0].sub(&x[1]).cos();
    let wave = Multivector::from_terms(sig, vec![(b(0, 2), phase.clone()), (b(1, 2), phase.neg())]);
    let linear = Multivector::blade(sig, b(0, 1), x[1].clone());
    Ok(vec![
        MaxwellField::validated(g, "static", static_f, Multivector::zero(sig))?,
        MaxwellField::validated(g, "plane-wave", wave, Multivector::zero(sig))?,
        MaxwellField::validated(g, "linear", linear, g.theta(0))?,
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellReport {
    /// `dF`
    pub closed: f64,
    /// `δF + J`
    pub coclosed: f64,
    /// `∂|F − J`
    pub dirac: f64,
    /// `(1/√|g|) ∂_ρ(√|g| F^{ρν}) − J^ν`
    pub divergence: f64,
}

impl MaxwellReport {
    pub fn max(&self) -> f64 {
        self.closed.max(self.coclosed).max(self.dirac).max(self.divergence)
    }
}

/// Residuals of the exterior, Clifford and coordinate-divergence forms.
pub fn maxwell_lorentzian(g: &Arc<Geometry>, f: &Multivector, j: &Multivector) -> Result<MaxwellReport, MaxwellError> {
    check_shape(g, f, j)?;
    let probe = g.probe();
    let zero = Multivector::zero(g.signature());
    let lc = Connection::levi_civita(g);
    let closed = probe.mv_residual(&ext_d(g, f), &zero)?;
    let coclosed = probe.mv_residual(&codifferential(g, f).add(j), &zero)?;
    let dirac_res = probe.mv_residual(&dirac(&lc, f), j)?;
    let divergence = max_abs(g, &coordinate_divergence(g, f, j))?;
    Ok(MaxwellReport { closed, coclosed, dirac: dirac_res, divergence })
}

fn coordinate_divergence(g: &Geometry, f: &Multivector, j: &Multivector) -> Vec<Expr> {
    let n = g.n();
    let gi = g.inv_metric();
    let mut fl = vec![vec![Expr::zero(); n]; n];
    for (blade, e) in g.to_coordinate(f) {
        let m = blade.trailing_zeros() as usize;
        let v = (blade & (blade - 1)).trailing_zeros() as usize;
        fl[m][v] = e.clone();
        fl[v][m] = e.neg();
    }
    let mut jl = vec![Expr::zero(); n];
    for (blade, e) in g.to_coordinate(j) {
        jl[blade.trailing_zeros() as usize] = e;
    }
    let raise = |r: usize, v: usize| {
        let mut terms = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !fl[a][b].is_zero() {
                    terms.push(gi[r][a].mul(&gi[v][b]).mul(&fl[a][b]));
                }
            }
        }
        Expr::sum(terms)
    };
    let s = g.sqrt_abs_det_g();
    (0..n)
        .map(|v| {
            let div = Expr::sum((0..n).map(|r| s.mul(&raise(r, v)).diff(r)));
            let jv = Expr::sum((0..n).map(|m| gi[v][m].mul(&jl[m])));
            div.div(&s).sub(&jv)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellRcReport {
    /// `Σ_cyc (D_a F_{bc} + T^s_{ab} F_{sc})`, which equals `(dF)_{abc}`
    pub cyclic: f64,
    /// `D_a F^{ab} + T^a_{sa} F^{sb} − ½ T^b_{rs} F^{rs} − J^b`
    pub divergence: f64,
    /// `𝛛F − (J − 𝒯^a⌟(θ_a∧F) − 𝒯^a∧(θ_a⌟F))`
    pub clifford: f64,
}

impl MaxwellRcReport {
    pub fn max(&self) -> f64 {
        self.cyclic.max(self.divergence).max(self.clifford)
    }
}

/// Residuals of Maxwell's equations rewritten with a Riemann-Cartan connection.
pub fn maxwell_rc(c: &Connection, f: &Multivector, j: &Multivector) -> Result<MaxwellRcReport, MaxwellError> {
    let g = c.geometry();
    check_shape(g, f, j)?;
    let n = g.n();
    let probe = g.probe();
    let t = c.torsion_components();
    let l = c.coefficients();
    let eta = |a: usize| g.eta(a);
    let fl = |a: usize, b: usize| -> Expr {
        if a == b {
            Expr::zero()
        } else if a < b {
            f.coeff((1 << a) | (1 << b))
        } else {
            f.coeff((1 << a) | (1 << b)).neg()
        }
    };
    // (D_c F)_{ab}
    let dfl = |cc: usize, a: usize, b: usize| {
        let mut terms = vec![g.pfaff(&fl(a, b), cc)];
        for s in 0..n {
            terms.push(l[s][cc][a].mul(&fl(s, b)).neg());
            terms.push(l[s][cc][b].mul(&fl(a, s)).neg());
        }
        Expr::sum(terms)
    };
    let mut cyclic = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for cc in b + 1..n {
                let mut terms = Vec::new();
                for (x, y, z) in [(a, b, cc), (b, cc, a), (cc, a, b)] {
                    terms.push(dfl(x, y, z));
                    for s in 0..n {
                        terms.push(t[s][x][y].mul(&fl(s, z)));
                    }
                }
                cyclic.push(Expr::sum(terms));
            }
        }
    }
    let fu = |a: usize, b: usize| fl(a, b).scale((eta(a) * eta(b)).into());
    let mut divergence = Vec::new();
    for b in 0..n {
        let mut terms = Vec::new();
        for a in 0..n {
            // D_a F^{ab}
            terms.push(g.pfaff(&fu(a, b), a));
            for s in 0..n {
                terms.push(l[a][a][s].mul(&fu(s, b)));
                terms.push(l[b][a][s].mul(&fu(a, s)));
                terms.push(t[a][s][a].mul(&fu(s, b)));
                terms.push(Expr::frac(-1, 2).mul(&t[b][a][s]).mul(&fu(a, s)));
            }
        }
        terms.push(j.coeff(1 << b).scale(eta(b).into()).neg());
        divergence.push(Expr::sum(terms));
    }
    let torsion = c.torsion_forms();
    let mut rhs = vec![j.clone()];
    for a in 0..n {
        let ta = torsion.get(&[a]);
        let th = g.theta_lower(a);
        rhs.push(ta.left_contract(&th.wedge(f)).neg());
        rhs.push(ta.wedge(&th.left_contract(f)).neg());
    }
    let rhs = Multivector::sum(g.signature(), &rhs);
    let clifford = probe.mv_residual(&dirac(c, f), &rhs)?;
    Ok(MaxwellRcReport { cyclic: max_abs(g, &cyclic)?, divergence: max_abs(g, &divergence)?, clifford })
}

fn max_abs(g: &Geometry, exprs: &[Expr]) -> Result<f64, EvalError> {
    let mut worst: f64 = 0.0;
    for p in g.probe().points() {
        let mut ev = Evaluator::new(&p, g.chart().params());
        for e in exprs {
            worst = worst.max(ev.eval(e)?.abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::fixtures::{minkowski_with, torsion_connection};
    use crate::symexpr::Params;

    fn params() -> Params {
        Params::new().with("k", 0.7)
    }

    #[test]
    fn flat_fixtures_satisfy_every_form() {
        let g = minkowski_with(params());
        for fx in flat_fixtures(&g).unwrap() {
            let rep = maxwell_lorentzian(&g, &fx.f, &fx.j).unwrap();
            assert!(rep.max() < 1e-9, "{}: {rep:?}", fx.label);
        }
    }

    #[test]
    fn rejects_non_solutions() {
        let g = minkowski_with(params());
        let f = Multivector::blade(g.signature(), 0b11, g.chart().coord(1));
        let err = MaxwellField::validated(&g, "bad", f, Multivector::zero(g.signature())).unwrap_err();
        assert!(matches!(err, MaxwellError::NotASolution { .. }));
    }

    #[test]
    fn torsion_forms_agree() {
        let g = minkowski_with(params());
        let c = torsion_connection(&g);
        assert!(c.torsion_forms().get(&[0]).terms().count() == 1);
        for fx in flat_fixtures(&g).unwrap() {
            let rep = maxwell_rc(&c, &fx.f, &fx.j).unwrap();
            assert!(rep.max() < 1e-9, "{}: {rep:?}", fx.label);
        }
    }
}
