//! Metric connections on the orthonormal coframe.
//!
//! A connection is stored by its frame coefficients `L^a_{cb}`, so that
//! `ω^a_b = L^a_{cb} θ^c`, `D_{e_c} e_b = L^a_{cb} e_a` and
//! `D_{e_c} θ^a = −L^a_{cb} θ^b`. Torsion and curvature come from Cartan's
//! structure equations
//!
//! ```text
//! 𝒯^a   = dθ^a + ω^a_b ∧ θ^b        = ½ T^a_{bc} θ^b∧θ^c
//! 𝓡^a_b = dω^a_b + ω^a_c ∧ ω^c_b    = ½ R_b^a_{cd} θ^c∧θ^d
//! ```

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::calculus::{ext_d, IndexedForms};
use crate::manifold::Geometry;
use crate::multivector::Multivector;
use crate::symexpr::{EvalError, Evaluator, Expr};

pub type Coeffs3 = Vec<Vec<Vec<Expr>>>;
pub type Coeffs4 = Vec<Vec<Vec<Vec<Expr>>>>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConnectionError {
    #[error("coefficient array must be {0}×{0}×{0}")]
    Shape(usize),
    #[error("torsion T^{a}_{b}{c} is not antisymmetric in its lower indices")]
    NotAntisymmetric { a: usize, b: usize, c: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Which slot of `R_μ^ρ_{αβ}` the Ricci contraction uses.
///
/// `Last` gives `R_{μα} = R_μ^ρ_{αρ}`, the convention under which
/// `(∂|∧∂|)θ^a` equals the Ricci 1-form and the unit sphere has `R = −2`.
/// `First` gives `R_{μν} = R_μ^ρ_{ρν}`, which differs by an overall sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RicciSlot {
    #[default]
    Last,
    First,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKind {
    LeviCivita,
    General,
}

#[derive(Debug, Clone)]
pub struct Connection {
    geom: Arc<Geometry>,
    l: Coeffs3,
    kind: ConnectionKind,
    torsion: OnceLock<IndexedForms>,
    curvature: OnceLock<IndexedForms>,
}

fn zeros3(n: usize) -> Coeffs3 {
    vec![vec![vec![Expr::zero(); n]; n]; n]
}

fn zeros4(n: usize) -> Coeffs4 {
    vec![zeros3(n); n]
}

impl Connection {
    fn with(geom: Arc<Geometry>, l: Coeffs3, kind: ConnectionKind) -> Connection {
        Connection { geom, l, kind, torsion: OnceLock::new(), curvature: OnceLock::new() }
    }

    /// Levi-Civita connection from the structure coefficients:
    /// `ω^{cd} = ½(−c^c_{jk}η^{dj} + c^d_{jk}η^{cj} − η^{ca}η_{bk}η^{dj}c^b_{ja}) θ^k`.
    pub fn levi_civita(g: &Arc<Geometry>) -> Connection {
        let n = g.n();
        let c = g.structure_coefficients();
        let eta = |i: usize| Expr::int(g.eta(i));
        let mut l = zeros3(n);
        for cc in 0..n {
            for d in 0..n {
                for k in 0..n {
                    // diagonal η collapses the sums: j = d in the first term, j = c in the second,
                    // a = c, b = k, j = d in the third
                    let t1 = c[cc][d][k].mul(&eta(d));
                    let t2 = c[d][cc][k].mul(&eta(cc));
                    let t3 = eta(cc).mul(&eta(k)).mul(&eta(d)).mul(&c[k][d][cc]);
                    let upper = Expr::frac(1, 2).mul(&t1.neg().add(&t2).sub(&t3));
                    // ω^c_d = ω^{ce} η_{ed}
                    l[cc][k][d] = upper.mul(&eta(d));
                }
            }
        }
        Connection::with(g.clone(), l, ConnectionKind::LeviCivita)
    }

    /// Stores `L^a_{cb}` verbatim (`l[a][c][b]`).
    pub fn from_coefficients(g: &Arc<Geometry>, l: Coeffs3) -> Result<Connection, ConnectionError> {
        let n = g.n();
        if l.len() != n || l.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(ConnectionError::Shape(n));
        }
        Ok(Connection::with(g.clone(), l, ConnectionKind::General))
    }

    /// Metric connection with prescribed frame torsion `t[a][b][c] = T^a_{bc}`,
    /// `L = L̊ + K` with `K_{ραβ} = ½(T_{ραβ} − T_{αβρ} + T_{βρα})`.
    pub fn from_contorsion(g: &Arc<Geometry>, t: &Coeffs3) -> Result<(Connection, Contorsion), ConnectionError> {
        let n = g.n();
        if t.len() != n || t.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(ConnectionError::Shape(n));
        }
        let probe = g.probe();
        for a in 0..n {
            for b in 0..n {
                for c in b..n {
                    if !probe.expr_equal(&t[a][b][c].add(&t[a][c][b]), &Expr::zero())? {
                        return Err(ConnectionError::NotAntisymmetric { a, b, c });
                    }
                }
            }
        }
        let lower = |r: usize, a: usize, b: usize| t[r][a][b].scale(g.eta(r).into());
        let mut k = zeros3(n);
        for r in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let low = Expr::frac(1, 2).mul(&lower(r, a, b).sub(&lower(a, b, r)).add(&lower(b, r, a)));
                    k[r][a][b] = low.scale(g.eta(r).into());
                }
            }
        }
        let lc = Connection::levi_civita(g);
        let mut l = zeros3(n);
        for r in 0..n {
            for a in 0..n {
                for b in 0..n {
                    l[r][a][b] = lc.l[r][a][b].add(&k[r][a][b]);
                }
            }
        }
        let conn = Connection::with(g.clone(), l, ConnectionKind::General);
        let contorsion = Contorsion::new(g, k, t.clone());
        Ok((conn, contorsion))
    }

    /// The same coefficients over another geometry of the same dimension,
    /// typically [`Geometry::resampled`].
    pub fn rebind(&self, g: &Arc<Geometry>) -> Connection {
        assert_eq!(g.n(), self.geom.n(), "dimension mismatch");
        Connection::with(g.clone(), self.l.clone(), self.kind)
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geom
    }

    pub fn kind(&self) -> ConnectionKind {
        self.kind
    }

    pub fn coefficients(&self) -> &Coeffs3 {
        &self.l
    }

    pub fn coeff(&self, a: usize, c: usize, b: usize) -> &Expr {
        &self.l[a][c][b]
    }

    /// `ω^a_b = L^a_{cb} θ^c`.
    pub fn omega(&self, a: usize, b: usize) -> Multivector {
        let coeffs: Vec<Expr> = (0..self.geom.n()).map(|c| self.l[a][c][b].clone()).collect();
        Multivector::vector(self.geom.signature(), &coeffs)
    }

    /// Largest `|ω_{abc} + ω_{cba}|` with `ω_{abc} = η_{ad} ω^d_{bc}`.
    pub fn metric_compatibility_residual(&self) -> Result<f64, EvalError> {
        let g = &self.geom;
        let n = g.n();
        let mut exprs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in a..n {
                    let lhs = self.l[a][b][c].scale(g.eta(a).into());
                    let rhs = self.l[c][b][a].scale(g.eta(c).into());
                    exprs.push(lhs.add(&rhs));
                }
            }
        }
        max_abs(g, &exprs)
    }

    pub fn is_metric_compatible(&self) -> Result<bool, EvalError> {
        let probe = self.geom.probe();
        let n = self.geom.n();
        for a in 0..n {
            for b in 0..n {
                for c in a..n {
                    let lhs = self.l[a][b][c].scale(self.geom.eta(a).into());
                    let rhs = self.l[c][b][a].scale(self.geom.eta(c).into()).neg();
                    if !probe.expr_equal(&lhs, &rhs)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `𝒯^a = dθ^a + ω^a_b∧θ^b`.
    pub fn torsion_forms(&self) -> &IndexedForms {
        self.torsion.get_or_init(|| {
            let g = &self.geom;
            IndexedForms::from_fn(1, 0, g.n(), |ix| {
                let a = ix[0];
                let mut parts = vec![g.dtheta(a).clone()];
                for b in 0..g.n() {
                    parts.push(self.omega(a, b).wedge(&g.theta(b)));
                }
                Multivector::sum(g.signature(), &parts)
            })
        })
    }

    /// `𝓡^a_b = dω^a_b + ω^a_c∧ω^c_b`, indexed `[a, b]`.
    pub fn curvature_forms(&self) -> &IndexedForms {
        self.curvature.get_or_init(|| {
            let g = &self.geom;
            let n = g.n();
            let omega: Vec<Vec<Multivector>> = (0..n).map(|a| (0..n).map(|b| self.omega(a, b)).collect()).collect();
            IndexedForms::from_fn(1, 1, n, |ix| {
                let (a, b) = (ix[0], ix[1]);
                let mut parts = vec![ext_d(g, &omega[a][b])];
                for c in 0..n {
                    parts.push(omega[a][c].wedge(&omega[c][b]));
                }
                Multivector::sum(g.signature(), &parts)
            })
        })
    }

    /// `T^a_{bc}` read off the torsion 2-forms.
    pub fn torsion_components(&self) -> Coeffs3 {
        let n = self.geom.n();
        let forms = self.torsion_forms();
        let mut t = zeros3(n);
        for a in 0..n {
            let f = forms.get(&[a]);
            for b in 0..n {
                for c in b + 1..n {
                    let v = f.coeff((1 << b) | (1 << c));
                    t[a][c][b] = v.neg();
                    t[a][b][c] = v;
                }
            }
        }
        t
    }

    /// `R_b^a_{cd}` (indexed `[b][a][c][d]`) read off the curvature 2-forms.
    pub fn curvature_components(&self) -> Coeffs4 {
        let n = self.geom.n();
        let forms = self.curvature_forms();
        let mut r = zeros4(n);
        for a in 0..n {
            for b in 0..n {
                let f = forms.get(&[a, b]);
                for c in 0..n {
                    for d in c + 1..n {
                        let v = f.coeff((1 << c) | (1 << d));
                        r[b][a][d][c] = v.neg();
                        r[b][a][c][d] = v;
                    }
                }
            }
        }
        r
    }

    /// `T^ρ_{αβ} = L^ρ_{αβ} − L^ρ_{βα} − c^ρ_{αβ}`.
    pub fn torsion_components_direct(&self) -> Coeffs3 {
        let n = self.geom.n();
        let c = self.geom.structure_coefficients();
        let mut t = zeros3(n);
        for r in 0..n {
            for a in 0..n {
                for b in 0..n {
                    t[r][a][b] = self.l[r][a][b].sub(&self.l[r][b][a]).sub(&c[r][a][b]);
                }
            }
        }
        t
    }

    /// `R_μ^ρ_{αβ} = e_α(L^ρ_{βμ}) − e_β(L^ρ_{αμ}) + L^ρ_{ασ}L^σ_{βμ} − L^ρ_{βσ}L^σ_{αμ} − c^σ_{αβ}L^ρ_{σμ}`.
    pub fn curvature_components_direct(&self) -> Coeffs4 {
        let g = &self.geom;
        let n = g.n();
        let c = g.structure_coefficients();
        let l = &self.l;
        let mut r = zeros4(n);
        for m in 0..n {
            for rho in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let mut terms = vec![g.pfaff(&l[rho][b][m], a), g.pfaff(&l[rho][a][m], b).neg()];
                        for s in 0..n {
                            terms.push(l[rho][a][s].mul(&l[s][b][m]));
                            terms.push(l[rho][b][s].mul(&l[s][a][m]).neg());
                            terms.push(c[s][a][b].mul(&l[rho][s][m]).neg());
                        }
                        r[m][rho][a][b] = Expr::sum(terms);
                    }
                }
            }
        }
        r
    }

    pub fn ricci_data(&self, slot: RicciSlot) -> CurvatureData {
        let g = &self.geom;
        let n = g.n();
        let sig = g.signature();
        let t = self.torsion_components();
        let r = self.curvature_components();
        let ricci: Vec<Vec<Expr>> = (0..n)
            .map(|m| {
                (0..n)
                    .map(|a| {
                        Expr::sum((0..n).map(|rho| match slot {
                            RicciSlot::Last => r[m][rho][a][rho].clone(),
                            RicciSlot::First => r[m][rho][rho][a].clone(),
                        }))
                    })
                    .collect()
            })
            .collect();
        let scalar = Expr::sum((0..n).map(|a| ricci[a][a].scale(g.eta(a).into())));
        let ricci_forms: Vec<Multivector> = (0..n)
            .map(|a| {
                let coeffs: Vec<Expr> = (0..n).map(|b| ricci[a][b].scale(g.eta(a).into())).collect();
                Multivector::vector(sig, &coeffs)
            })
            .collect();
        let einstein = (0..n).map(|a| ricci_forms[a].sub(&g.theta(a).scale(&Expr::frac(1, 2).mul(&scalar)))).collect();
        CurvatureData {
            slot,
            torsion: self.torsion_forms().clone(),
            curvature: self.curvature_forms().clone(),
            torsion_components: t,
            curvature_components: r,
            ricci,
            ricci_forms,
            scalar,
            einstein,
        }
    }

    /// Coordinate coefficients `Γ^ρ_{μν}` with `D_{∂_μ}∂_ν = Γ^ρ_{μν}∂_ρ`, by change of frame:
    /// `Γ^ρ_{μν} = q^ρ_a(∂_μ q^a_ν + L^a_{cb} q^c_μ q^b_ν)`.
    pub fn christoffel(&self) -> Coeffs3 {
        let g = &self.geom;
        let n = g.n();
        let q = g.cotetrad();
        let qi = g.tetrad();
        let mut gam = zeros3(n);
        for m in 0..n {
            for v in 0..n {
                let inner: Vec<Expr> = (0..n)
                    .map(|a| {
                        let mut terms = vec![q[a][v].diff(m)];
                        for c in 0..n {
                            for b in 0..n {
                                terms.push(self.l[a][c][b].mul(&q[c][m]).mul(&q[b][v]));
                            }
                        }
                        Expr::sum(terms)
                    })
                    .collect();
                for rho in 0..n {
                    gam[rho][m][v] = Expr::sum((0..n).map(|a| qi[rho][a].mul(&inner[a])));
                }
            }
        }
        gam
    }

    /// Contorsion relative to the Levi-Civita connection of the same geometry.
    pub fn contorsion(&self) -> Contorsion {
        let g = &self.geom;
        let n = g.n();
        let lc = Connection::levi_civita(g);
        let mut k = zeros3(n);
        for r in 0..n {
            for a in 0..n {
                for b in 0..n {
                    k[r][a][b] = self.l[r][a][b].sub(&lc.l[r][a][b]);
                }
            }
        }
        Contorsion::new(g, k, self.torsion_components())
    }

    /// `R = R̊ + J_{[αβ]}` with `J_μ^ρ_{αβ} = D̊_α K^ρ_{βμ} − K^ρ_{βσ} K^σ_{αμ}`.
    pub fn curvature_difference(&self, slot: RicciSlot) -> JData {
        let g = &self.geom;
        let n = g.n();
        let lc = Connection::levi_civita(g);
        let k = self.contorsion().k;
        let l0 = &lc.l;
        // D̊_α K^ρ_{βμ}
        let dk = |a: usize, rho: usize, b: usize, m: usize| {
            let mut terms = vec![g.pfaff(&k[rho][b][m], a)];
            for s in 0..n {
                terms.push(l0[rho][a][s].mul(&k[s][b][m]));
                terms.push(l0[s][a][b].mul(&k[rho][s][m]).neg());
                terms.push(l0[s][a][m].mul(&k[rho][b][s]).neg());
            }
            Expr::sum(terms)
        };
        let mut raw = zeros4(n);
        for m in 0..n {
            for rho in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let mut terms = vec![dk(a, rho, b, m)];
                        for s in 0..n {
                            terms.push(k[rho][b][s].mul(&k[s][a][m]).neg());
                        }
                        raw[m][rho][a][b] = Expr::sum(terms);
                    }
                }
            }
        }
        let mut j = zeros4(n);
        for m in 0..n {
            for rho in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        j[m][rho][a][b] = raw[m][rho][a][b].sub(&raw[m][rho][b][a]);
                    }
                }
            }
        }
        let sig = g.signature();
        let forms = IndexedForms::from_fn(1, 1, n, |ix| {
            let (rho, m) = (ix[0], ix[1]);
            let mut terms = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    terms.push(((1u32 << a) | (1 << b), j[m][rho][a][b].clone()));
                }
            }
            Multivector::from_terms(sig, terms)
        });
        let contract = |m: usize, a: usize| {
            Expr::sum((0..n).map(|rho| match slot {
                RicciSlot::Last => j[m][rho][a][rho].clone(),
                RicciSlot::First => j[m][rho][rho][a].clone(),
            }))
        };
        let jr: Vec<Vec<Expr>> = (0..n).map(|m| (0..n).map(|a| contract(m, a)).collect()).collect();
        let half = Expr::frac(1, 2);
        let ricci_sym = (0..n).map(|m| (0..n).map(|a| half.mul(&jr[m][a].add(&jr[a][m]))).collect()).collect();
        let ricci_antisym = (0..n).map(|m| (0..n).map(|a| half.mul(&jr[m][a].sub(&jr[a][m]))).collect()).collect();
        JData { j, forms, ricci: jr, ricci_sym, ricci_antisym }
    }

    /// Residual of `∂_μ q^a_ν + ω^a_{μb} q^b_ν − Γ^ρ_{μν} q^a_ρ` with `Γ` from the
    /// metric Christoffel symbols plus the coordinate contorsion.
    pub fn tetrad_identity_check(&self) -> Result<TetradReport, EvalError> {
        let g = &self.geom;
        let n = g.n();
        let q = g.cotetrad();
        let qi = g.tetrad();
        let gamma = {
            let base = christoffel_from_metric(g);
            let k = self.contorsion().k;
            let mut out = zeros3(n);
            for rho in 0..n {
                for m in 0..n {
                    for v in 0..n {
                        let mut terms = vec![base[rho][m][v].clone()];
                        for a in 0..n {
                            for c in 0..n {
                                for b in 0..n {
                                    terms.push(qi[rho][a].mul(&k[a][c][b]).mul(&q[c][m]).mul(&q[b][v]));
                                }
                            }
                        }
                        out[rho][m][v] = Expr::sum(terms);
                    }
                }
            }
            out
        };
        let mut residual = zeros3(n);
        let mut d_plus = zeros3(n);
        let mut d_minus = zeros3(n);
        for m in 0..n {
            for a in 0..n {
                for v in 0..n {
                    let dq = q[a][v].diff(m);
                    let wq = Expr::sum(
                        (0..n)
                            .flat_map(|b| (0..n).map(move |c| (b, c)))
                            .map(|(b, c)| self.l[a][c][b].mul(&q[c][m]).mul(&q[b][v])),
                    );
                    let gq = Expr::sum((0..n).map(|rho| gamma[rho][m][v].mul(&q[a][rho])));
                    d_plus[m][a][v] = dq.add(&wq);
                    d_minus[m][a][v] = dq.sub(&gq);
                    residual[m][a][v] = dq.add(&wq).sub(&gq);
                }
            }
        }
        let flat = |x: &Coeffs3| x.iter().flatten().flatten().cloned().collect::<Vec<_>>();
        Ok(TetradReport {
            max_residual: max_abs(g, &flat(&residual))?,
            max_d_plus: max_abs(g, &flat(&d_plus))?,
            max_d_minus: max_abs(g, &flat(&d_minus))?,
            d_plus,
            d_minus,
        })
    }
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

/// `Γ̊^ρ_{μν} = ½ g^{ρσ}(∂_μ g_{σν} + ∂_ν g_{σμ} − ∂_σ g_{μν})`.
pub fn christoffel_from_metric(g: &Geometry) -> Coeffs3 {
    let n = g.n();
    let gm = g.metric();
    let gi = g.inv_metric();
    let mut out = zeros3(n);
    for rho in 0..n {
        for m in 0..n {
            for v in 0..n {
                let terms = (0..n).map(|s| {
                    let inner = gm[s][v].diff(m).add(&gm[s][m].diff(v)).sub(&gm[m][v].diff(s));
                    gi[rho][s].mul(&inner)
                });
                out[rho][m][v] = Expr::frac(1, 2).mul(&Expr::sum(terms));
            }
        }
    }
    out
}

/// Levi-Civita frame coefficients `L̊ = ½(b + c)` with
/// `b^ρ_{αβ} = −(£_{e^ρ} g)_{αβ} = η^{ρρ}(c_{βρα} + c_{αρβ})`.
pub fn levi_civita_from_lie(g: &Geometry) -> Coeffs3 {
    let n = g.n();
    let c = g.structure_coefficients();
    let low = |a: usize, b: usize, d: usize| c[a][b][d].scale(g.eta(a).into());
    let mut l = zeros3(n);
    for r in 0..n {
        for a in 0..n {
            for b in 0..n {
                let bb = low(b, r, a).add(&low(a, r, b)).scale(g.eta(r).into());
                l[r][a][b] = Expr::frac(1, 2).mul(&bb.add(&c[r][a][b]));
            }
        }
    }
    l
}

/// Torsion, curvature and their contractions.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    pub slot: RicciSlot,
    pub torsion: IndexedForms,
    pub curvature: IndexedForms,
    /// `T^a_{bc}` as `[a][b][c]`
    pub torsion_components: Coeffs3,
    /// `R_b^a_{cd}` as `[b][a][c][d]`
    pub curvature_components: Coeffs4,
    /// `R_{ab}` under `slot`
    pub ricci: Vec<Vec<Expr>>,
    /// `𝓡^a = R^a_b θ^b`
    pub ricci_forms: Vec<Multivector>,
    pub scalar: Expr,
    /// `𝒢^a = 𝓡^a − ½Rθ^a`
    pub einstein: Vec<Multivector>,
}

/// Difference tensor `K = L − L̊` and its strain decomposition.
#[derive(Debug, Clone)]
pub struct Contorsion {
    /// `K^ρ_{αβ}` as `[ρ][α][β]`, α the differentiating direction
    pub k: Coeffs3,
    /// `S = 2K − T`, so that `K = ½(T + S)`
    pub strain: Coeffs3,
    /// `s^ρ = ½ η^{αβ} S^ρ_{αβ}`
    pub strain_trace: Vec<Expr>,
    /// `Š = S − (2/n) s^ρ η_{αβ}`
    pub strain_traceless: Coeffs3,
}

impl Contorsion {
    fn new(g: &Geometry, k: Coeffs3, t: Coeffs3) -> Contorsion {
        let n = g.n();
        let mut strain = zeros3(n);
        for r in 0..n {
            for a in 0..n {
                for b in 0..n {
                    strain[r][a][b] = k[r][a][b].scale(2.into()).sub(&t[r][a][b]);
                }
            }
        }
        let strain_trace: Vec<Expr> = (0..n)
            .map(|r| Expr::frac(1, 2).mul(&Expr::sum((0..n).map(|a| strain[r][a][a].scale(g.eta(a).into())))))
            .collect();
        let mut strain_traceless = zeros3(n);
        for r in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let corr = if a == b {
                        strain_trace[r].scale(crate::symexpr::Rational::new(2 * g.eta(a), n as i64))
                    } else {
                        Expr::zero()
                    };
                    strain_traceless[r][a][b] = strain[r][a][b].sub(&corr);
                }
            }
        }
        Contorsion { k, strain, strain_trace, strain_traceless }
    }
}

/// Curvature difference between a connection and the Levi-Civita connection.
#[derive(Debug, Clone)]
pub struct JData {
    /// `J_μ^ρ_{[αβ]}` as `[μ][ρ][α][β]`
    pub j: Coeffs4,
    /// `𝔍^ρ_μ = ½ J_μ^ρ_{[αβ]} θ^α∧θ^β`, indexed `[ρ, μ]`
    pub forms: IndexedForms,
    /// contraction of `J` in the same slot as the Ricci tensor
    pub ricci: Vec<Vec<Expr>>,
    pub ricci_sym: Vec<Vec<Expr>>,
    pub ricci_antisym: Vec<Vec<Expr>>,
}

/// Outcome of the tetrad identity check.
#[derive(Debug, Clone)]
pub struct TetradReport {
    pub max_residual: f64,
    /// `D⁺_μ q^a_ν = ∂_μ q^a_ν + ω^a_{μb} q^b_ν`, indexed `[μ][a][ν]`
    pub d_plus: Coeffs3,
    /// `D⁻_μ q^a_ν = ∂_μ q^a_ν − Γ^ρ_{μν} q^a_ρ`, indexed `[μ][a][ν]`
    pub d_minus: Coeffs3,
    pub max_d_plus: f64,
    pub max_d_minus: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::fixtures::{nunes, polar_plane, random_contorsion_3d, random_torsion, sphere, warped_3d};
    use crate::symexpr::{parse_expr, Symbols};

    fn e(g: &Geometry, src: &str) -> Expr {
        parse_expr(src, &Symbols::new(g.chart().names())).unwrap()
    }

    fn close(g: &Geometry, a: &Expr, b: &Expr) {
        let r = g.probe().expr_residual(a, b).unwrap();
        assert!(r < 1e-8, "residual {r}: {a} vs {b}");
    }

    fn same_mv(g: &Geometry, a: &Multivector, b: &Multivector) {
        let r = g.probe().mv_residual(a, b).unwrap();
        assert!(r < 1e-8, "residual {r}: {} vs {}", g.render_frame(a), g.render_frame(b));
    }

    #[test]
    fn sphere_levi_civita_values() {
        let g = sphere();
        let c = Connection::levi_civita(&g);
        same_mv(&g, &c.omega(1, 0), &g.theta(1).scale(&e(&g, "cot(t)")));
        same_mv(&g, &c.omega(0, 1), &g.theta(1).scale(&e(&g, "-cot(t)")));
        same_mv(&g, c.curvature_forms().get(&[0, 1]), &g.theta(0).wedge(&g.theta(1)));
        assert!(c.torsion_forms().max_abs(&g.probe()).unwrap() < 1e-12);
        let r = c.curvature_components();
        close(&g, &r[1][0][0][1], &Expr::one());
        let last = c.ricci_data(RicciSlot::Last);
        let first = c.ricci_data(RicciSlot::First);
        close(&g, &last.scalar, &Expr::int(-2));
        close(&g, &first.scalar, &Expr::int(2));
        close(&g, &last.ricci[0][0], &Expr::int(-1));
        assert!(c.is_metric_compatible().unwrap());
    }

    #[test]
    fn nunes_values() {
        let g = sphere();
        let c = nunes(&g);
        assert!(c.curvature_forms().entries().iter().all(Multivector::is_zero));
        same_mv(&g, c.torsion_forms().get(&[1]), &g.theta(0).wedge(&g.theta(1)).scale(&e(&g, "cot(t)")));
        close(&g, &c.torsion_components()[1][1][0], &e(&g, "-cot(t)"));
        assert!(c.is_metric_compatible().unwrap());
    }

    #[test]
    fn levi_civita_oracles_agree() {
        for g in [sphere(), polar_plane(), warped_3d()] {
            let c = Connection::levi_civita(&g);
            let lie = levi_civita_from_lie(&g);
            let n = g.n();
            let gam = c.christoffel();
            let metric = christoffel_from_metric(&g);
            for a in 0..n {
                for b in 0..n {
                    for cc in 0..n {
                        close(&g, c.coeff(a, b, cc), &lie[a][b][cc]);
                        close(&g, &gam[a][b][cc], &metric[a][b][cc]);
                    }
                }
            }
        }
    }

    #[test]
    fn direct_components_match_forms() {
        for c in [Connection::levi_civita(&sphere()), nunes(&sphere()), random_contorsion_3d(3)] {
            let g = c.geometry();
            let n = g.n();
            let (t, td) = (c.torsion_components(), c.torsion_components_direct());
            let (r, rd) = (c.curvature_components(), c.curvature_components_direct());
            for a in 0..n {
                for b in 0..n {
                    for cc in 0..n {
                        close(g, &t[a][b][cc], &td[a][b][cc]);
                        for d in 0..n {
                            close(g, &r[a][b][cc][d], &rd[a][b][cc][d]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn contorsion_reproduces_torsion() {
        let g = warped_3d();
        let t = random_torsion(&g, 9);
        let (c, k) = Connection::from_contorsion(&g, &t).unwrap();
        assert!(c.is_metric_compatible().unwrap());
        let got = c.torsion_components();
        let n = g.n();
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    close(&g, &got[a][b][cc], &t[a][b][cc]);
                    // K = ½(T + S)
                    let half = Expr::frac(1, 2).mul(&t[a][b][cc].add(&k.strain[a][b][cc]));
                    close(&g, &k.k[a][b][cc], &half);
                }
            }
            let trace = Expr::sum((0..n).map(|b| k.strain_traceless[a][b][b].clone()));
            close(&g, &trace, &Expr::zero());
        }
        let back = c.contorsion();
        close(&g, &back.k[0][1][2], &k.k[0][1][2]);
    }

    #[test]
    fn antisymmetry_is_enforced() {
        let g = sphere();
        let mut t = vec![vec![vec![Expr::zero(); 2]; 2]; 2];
        t[0][0][1] = Expr::one();
        assert_eq!(
            Connection::from_contorsion(&g, &t).unwrap_err(),
            ConnectionError::NotAntisymmetric { a: 0, b: 0, c: 1 }
        );
        assert_eq!(Connection::from_coefficients(&g, vec![]).unwrap_err(), ConnectionError::Shape(2));
    }

    #[test]
    fn curvature_difference_closes() {
        for c in [nunes(&sphere()), random_contorsion_3d(13)] {
            let g = c.geometry();
            let n = g.n();
            let lc = Connection::levi_civita(g);
            let (r, r0) = (c.curvature_components(), lc.curvature_components());
            let jd = c.curvature_difference(RicciSlot::Last);
            for m in 0..n {
                for rho in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            close(g, &r[m][rho][a][b], &r0[m][rho][a][b].add(&jd.j[m][rho][a][b]));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tetrad_identity() {
        for c in [Connection::levi_civita(&sphere()), nunes(&sphere()), random_contorsion_3d(17)] {
            let rep = c.tetrad_identity_check().unwrap();
            assert!(rep.max_residual < 1e-8, "{}", rep.max_residual);
        }
        let g = sphere();
        let rep = nunes(&g).tetrad_identity_check().unwrap();
        close(&g, &rep.d_plus[0][1][1], &e(&g, "cos(t)"));
        let rep = Connection::levi_civita(&g).tetrad_identity_check().unwrap();
        close(&g, &rep.d_minus[1][1][0], &e(&g, "-cos(t)"));
        close(&g, &rep.d_minus[0][1][1], &Expr::zero());
    }
}
