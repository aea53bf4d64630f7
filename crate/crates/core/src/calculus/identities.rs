//! Bianchi identities, the divergence of the dual torsion, and the
//! cotetrad wave equation.

use super::dirac::{hodge_dalembertian, square_split};
use super::forms::{ext_cov_d, IndexedForms};
use super::{codifferential, ext_d, hodge};
use crate::connection::{Connection, RicciSlot};
use crate::multivector::Multivector;
use crate::symexpr::{EvalError, Evaluator, Expr};

fn max_abs_exprs(c: &Connection, exprs: &[Expr]) -> Result<f64, EvalError> {
    let g = c.geometry();
    let mut worst: f64 = 0.0;
    for p in g.probe().points() {
        let mut ev = Evaluator::new(&p, g.chart().params());
        for e in exprs {
            worst = worst.max(ev.eval(e)?.abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct BianchiReport {
    /// `D𝒯^a − 𝓡^a_b∧θ^b`
    pub first_frame: f64,
    /// `D𝓡^a_b`
    pub second_frame: f64,
    /// `Σ_cyc R_μ^ρ_{αβ} − Σ_cyc (D_μ T^ρ_{αβ} + T^κ_{μα} T^ρ_{κβ})` in coordinates
    pub first_coordinate: f64,
    /// `Σ_cyc (D_μ R_β^α_{νρ} + T^σ_{μν} R_β^α_{σρ})` in coordinates
    pub second_coordinate: f64,
}

impl BianchiReport {
    pub fn max(&self) -> f64 {
        self.first_frame.max(self.second_frame).max(self.first_coordinate).max(self.second_coordinate)
    }
}

/// Frame and coordinate residuals of both Bianchi identities.
pub fn bianchi_reports(c: &Connection) -> Result<BianchiReport, EvalError> {
    let g = c.geometry();
    let probe = g.probe();
    let n = g.n();
    let sig = g.signature();
    let torsion = c.torsion_forms();
    let curvature = c.curvature_forms();
    let dt = ext_cov_d(c, torsion).expect("torsion family has the geometry's shape");
    let rt = IndexedForms::from_fn(1, 0, n, |ix| {
        let parts: Vec<Multivector> = (0..n).map(|b| curvature.get(&[ix[0], b]).wedge(&g.theta(b))).collect();
        Multivector::sum(sig, &parts)
    });
    let first_frame = dt.sub(&rt).max_abs(&probe)?;
    let second_frame = ext_cov_d(c, curvature).expect("curvature family has the geometry's shape").max_abs(&probe)?;

    let (tc, rc) = coordinate_tensors(c);
    let gam = c.christoffel();
    // ∇_μ T^ρ_{αβ}
    let dt_c = |m: usize, r: usize, a: usize, b: usize| {
        let mut terms = vec![tc[r][a][b].diff(m)];
        for k in 0..n {
            terms.push(gam[r][m][k].mul(&tc[k][a][b]));
            terms.push(gam[k][m][a].mul(&tc[r][k][b]).neg());
            terms.push(gam[k][m][b].mul(&tc[r][a][k]).neg());
        }
        Expr::sum(terms)
    };
    let mut first = Vec::new();
    for r in 0..n {
        for m in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if !(m < a && a < b) {
                        continue;
                    }
                    let mut terms = Vec::new();
                    for (x, y, z) in [(m, a, b), (a, b, m), (b, m, a)] {
                        // R_x^r_{yz} − ∇_x T^r_{yz} − T^k_{xy} T^r_{kz}
                        terms.push(rc[x][r][y][z].clone());
                        terms.push(dt_c(x, r, y, z).neg());
                        for k in 0..n {
                            terms.push(tc[k][x][y].mul(&tc[r][k][z]).neg());
                        }
                    }
                    first.push(Expr::sum(terms));
                }
            }
        }
    }
    // ∇_μ R_β^α_{νρ}
    let dr_c = |m: usize, b: usize, a: usize, v: usize, r: usize| {
        let mut terms = vec![rc[b][a][v][r].diff(m)];
        for s in 0..n {
            terms.push(gam[a][m][s].mul(&rc[b][s][v][r]));
            terms.push(gam[s][m][b].mul(&rc[s][a][v][r]).neg());
            terms.push(gam[s][m][v].mul(&rc[b][a][s][r]).neg());
            terms.push(gam[s][m][r].mul(&rc[b][a][v][s]).neg());
        }
        Expr::sum(terms)
    };
    let mut second = Vec::new();
    for b in 0..n {
        for a in 0..n {
            for m in 0..n {
                for v in m + 1..n {
                    for r in v + 1..n {
                        let mut terms = Vec::new();
                        for (x, y, z) in [(m, v, r), (v, r, m), (r, m, v)] {
                            terms.push(dr_c(x, b, a, y, z));
                            for s in 0..n {
                                terms.push(tc[s][x][y].mul(&rc[b][a][s][z]));
                            }
                        }
                        second.push(Expr::sum(terms));
                    }
                }
            }
        }
    }
    Ok(BianchiReport {
        first_frame,
        second_frame,
        first_coordinate: max_abs_exprs(c, &first)?,
        second_coordinate: max_abs_exprs(c, &second)?,
    })
}

/// Coordinate components `T^ρ_{αβ}` and `R_μ^ρ_{αβ}` by change of frame.
pub(crate) fn coordinate_tensors(c: &Connection) -> (crate::connection::Coeffs3, crate::connection::Coeffs4) {
    let g = c.geometry();
    let n = g.n();
    let q = g.cotetrad();
    let qi = g.tetrad();
    let t = c.torsion_components();
    let r = c.curvature_components();
    let mut tc = vec![vec![vec![Expr::zero(); n]; n]; n];
    for rho in 0..n {
        for al in 0..n {
            for be in 0..n {
                let mut terms = Vec::new();
                for a in 0..n {
                    for b in 0..n {
                        for cc in 0..n {
                            if t[a][b][cc].is_zero() {
                                continue;
                            }
                            terms.push(qi[rho][a].mul(&t[a][b][cc]).mul(&q[b][al]).mul(&q[cc][be]));
                        }
                    }
                }
                tc[rho][al][be] = Expr::sum(terms);
            }
        }
    }
    let mut rc = vec![vec![vec![vec![Expr::zero(); n]; n]; n]; n];
    for mu in 0..n {
        for rho in 0..n {
            for al in 0..n {
                for be in 0..n {
                    let mut terms = Vec::new();
                    for b in 0..n {
                        for a in 0..n {
                            for cc in 0..n {
                                for d in 0..n {
                                    if r[b][a][cc][d].is_zero() {
                                        continue;
                                    }
                                    terms.push(
                                        qi[rho][a].mul(&r[b][a][cc][d]).mul(&q[b][mu]).mul(&q[cc][al]).mul(&q[d][be]),
                                    );
                                }
                            }
                        }
                    }
                    rc[mu][rho][al][be] = Expr::sum(terms);
                }
            }
        }
    }
    (tc, rc)
}

/// `D⋆𝒯^a = d⋆𝒯^a + ω^a_b∧⋆𝒯^b`.
pub fn dual_torsion_d(c: &Connection) -> IndexedForms {
    let g = c.geometry();
    let star = c.torsion_forms().map(|t| hodge(g, t));
    ext_cov_d(c, &star).expect("dual torsion family has the geometry's shape")
}

/// The same quantity assembled from independent operators:
/// `−⋆□̊θ^a − ⋆𝓡^a + ⋆𝒥^a − ⋆dδθ^a + ⋆δ(ω^a_b∧θ^b) + ω^a_b∧⋆𝒯^b`,
/// with `□̊` the dot part of the Levi-Civita square and `𝒥^a` the Ricci
/// contraction of the curvature difference.
pub fn dual_torsion_d_decomposed(c: &Connection) -> IndexedForms {
    let g = c.geometry();
    let n = g.n();
    let sig = g.signature();
    let lc = Connection::levi_civita(g);
    let ricci = c.ricci_data(RicciSlot::Last);
    let jd = c.curvature_difference(RicciSlot::Last);
    let torsion = c.torsion_forms();
    let star_t: Vec<Multivector> = (0..n).map(|b| hodge(g, torsion.get(&[b]))).collect();
    IndexedForms::from_fn(1, 0, n, |ix| {
        let a = ix[0];
        let theta = g.theta(a);
        let (box_theta, _) = square_split(&lc, &theta);
        let j_form = {
            let coeffs: Vec<Expr> = (0..n).map(|b| jd.ricci[a][b].scale(g.eta(a).into())).collect();
            Multivector::vector(sig, &coeffs)
        };
        let omega_theta = Multivector::sum(sig, &(0..n).map(|b| c.omega(a, b).wedge(&g.theta(b))).collect::<Vec<_>>());
        let omega_star_t = Multivector::sum(sig, &(0..n).map(|b| c.omega(a, b).wedge(&star_t[b])).collect::<Vec<_>>());
        let parts = [
            hodge(g, &box_theta).neg(),
            hodge(g, &ricci.ricci_forms[a]).neg(),
            hodge(g, &j_form),
            hodge(g, &ext_d(g, &codifferential(g, &theta))).neg(),
            hodge(g, &codifferential(g, &omega_theta)),
            omega_star_t,
        ];
        Multivector::sum(sig, &parts)
    })
}

/// Residual of `δ⋆𝒯^a = (−1)^{n−2}(θ^b⌟⋆𝓡^a_b − ω^a_b⌟⋆𝒯^b)`.
pub fn dual_torsion_bianchi(c: &Connection) -> Result<f64, EvalError> {
    let g = c.geometry();
    let n = g.n();
    let sig = g.signature();
    let torsion = c.torsion_forms();
    let curvature = c.curvature_forms();
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let mut worst: f64 = 0.0;
    for a in 0..n {
        let lhs = codifferential(g, &hodge(g, torsion.get(&[a])));
        let mut parts = Vec::new();
        for b in 0..n {
            parts.push(g.theta(b).left_contract(&hodge(g, curvature.get(&[a, b]))));
            parts.push(c.omega(a, b).left_contract(&hodge(g, torsion.get(&[b]))).neg());
        }
        let rhs = Multivector::sum(sig, &parts).scale_int(sign);
        worst = worst.max(g.probe().mv_residual(&lhs, &rhs)?);
    }
    Ok(worst)
}

/// `θ^b⌟⋆𝓡^a_b` for each `a`: the contraction that is sometimes mistaken for the Ricci 1-form.
pub fn dual_ricci_like(c: &Connection) -> Vec<Multivector> {
    let g = c.geometry();
    let n = g.n();
    let curvature = c.curvature_forms();
    (0..n)
        .map(|a| {
            let parts: Vec<Multivector> =
                (0..n).map(|b| g.theta(b).left_contract(&hodge(g, curvature.get(&[a, b])))).collect();
            Multivector::sum(g.signature(), &parts)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct EvansReport {
    /// `D⋆𝒯^a`
    pub lhs: IndexedForms,
    /// `⋆𝓡^a_b∧θ^b`
    pub rhs: IndexedForms,
    /// largest coefficient of `lhs − rhs` per index
    pub difference: Vec<f64>,
    /// whether `lhs = rhs` holds for each index
    pub holds: Vec<bool>,
    /// largest disagreement between the direct and decomposed `D⋆𝒯^a`
    pub two_route_residual: f64,
}

impl EvansReport {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|h| *h)
    }
}

/// Compares `D⋆𝒯^a` with `⋆𝓡^a_b∧θ^b`.
pub fn evans_check(c: &Connection) -> Result<EvansReport, EvalError> {
    let g = c.geometry();
    let n = g.n();
    let probe = g.probe();
    let lhs = dual_torsion_d(c);
    let curvature = c.curvature_forms();
    let rhs = IndexedForms::from_fn(1, 0, n, |ix| {
        let parts: Vec<Multivector> = (0..n).map(|b| hodge(g, curvature.get(&[ix[0], b])).wedge(&g.theta(b))).collect();
        Multivector::sum(g.signature(), &parts)
    });
    let mut difference = Vec::new();
    let mut holds = Vec::new();
    for a in 0..n {
        difference.push(probe.mv_residual(lhs.get(&[a]), rhs.get(&[a]))?);
        holds.push(probe.mv_equal(lhs.get(&[a]), rhs.get(&[a]))?);
    }
    let decomposed = dual_torsion_d_decomposed(c);
    let two_route_residual = lhs.sub(&decomposed).max_abs(&probe)?;
    Ok(EvansReport { lhs, rhs, difference, holds, two_route_residual })
}

#[derive(Debug, Clone)]
pub struct WaveReport {
    /// `𝐓^a − (−½Rθ^a − □̊θ^a − dδθ^a − δdθ^a)`
    pub residual: f64,
    /// largest coefficient of `□̊θ^a − ◇θ^a`
    pub box_minus_hodge: f64,
    /// `□̊θ^a = ◇θ^a` for every `a`
    pub ricci_flat: bool,
}

/// Checks the cotetrad wave equation with source `𝐓^a` (the Einstein forms when `None`).
pub fn cotetrad_wave_equation(c: &Connection, source: Option<&IndexedForms>) -> Result<WaveReport, EvalError> {
    let g = c.geometry();
    let n = g.n();
    let sig = g.signature();
    let probe = g.probe();
    let data = c.ricci_data(RicciSlot::Last);
    let half_r = Expr::frac(1, 2).mul(&data.scalar);
    let mut residual: f64 = 0.0;
    let mut box_minus_hodge: f64 = 0.0;
    let mut ricci_flat = true;
    for a in 0..n {
        let theta = g.theta(a);
        let (box_theta, _) = square_split(c, &theta);
        let diamond = hodge_dalembertian(g, &theta);
        let t = match source {
            Some(s) => s.get(&[a]).clone(),
            None => data.einstein[a].clone(),
        };
        let rhs = Multivector::sum(
            sig,
            &[
                theta.scale(&half_r).neg(),
                box_theta.neg(),
                ext_d(g, &codifferential(g, &theta)).neg(),
                codifferential(g, &ext_d(g, &theta)).neg(),
            ],
        );
        residual = residual.max(probe.mv_residual(&t, &rhs)?);
        box_minus_hodge = box_minus_hodge.max(probe.mv_residual(&box_theta, &diamond)?);
        ricci_flat &= probe.mv_equal(&box_theta, &diamond)?;
    }
    Ok(WaveReport { residual, box_minus_hodge, ricci_flat })
}
