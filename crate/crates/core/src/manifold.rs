//! Charts, cotetrads and the quantities derived from them.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::multivector::{blade_name, grade_of, render_terms, Multivector, Probe, Signature};
use crate::symexpr::{Domain, EvalError, Evaluator, Expr, Params, Sampling};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("chart has {names} coordinates but the signature has dimension {dim}")]
    Dimension { names: usize, dim: usize },
    #[error("coordinate names must be distinct and non-empty")]
    Names,
    #[error("cotetrad must be {0}×{0}")]
    Shape(usize),
    #[error("cotetrad is singular at {0:?}")]
    Singular(Vec<f64>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Coordinate names, sampling box, orientation and parameter values.
#[derive(Debug, Clone)]
pub struct Chart {
    names: Vec<String>,
    domain: Domain,
    positive: bool,
    params: Params,
    frame_base: usize,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S], domain: Domain) -> Result<Chart, GeometryError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() || names.iter().any(|n| n.is_empty()) {
            return Err(GeometryError::Names);
        }
        if names.len() != domain.dim() {
            return Err(GeometryError::Dimension { names: names.len(), dim: domain.dim() });
        }
        Ok(Chart { names, domain, positive: true, params: Params::new(), frame_base: 1 })
    }

    /// Reverse the orientation, so `τ = −θ^1∧…∧θ^n`.
    pub fn negative(mut self) -> Chart {
        self.positive = false;
        self
    }

    pub fn with_params(mut self, params: Params) -> Chart {
        self.params = params;
        self
    }

    /// First label used when rendering frame directions (θ0… for spacetime charts).
    pub fn with_frame_base(mut self, base: usize) -> Chart {
        self.frame_base = base;
        self
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn frame_base(&self) -> usize {
        self.frame_base
    }

    pub fn coord(&self, k: usize) -> Expr {
        Expr::coord(k, &self.names[k])
    }

    pub fn coords(&self) -> Vec<Expr> {
        (0..self.names.len()).map(|k| self.coord(k)).collect()
    }
}

/// A chart with an orthonormal cotetrad `θ^a = q^a_μ dx^μ`.
#[derive(Debug, Clone)]
pub struct Geometry {
    chart: Chart,
    sig: Signature,
    sampling: Sampling,
    /// `q[a][μ]`
    cotetrad: Vec<Vec<Expr>>,
    /// `qi[μ][a]`, the tetrad `e_a = qi[μ][a] ∂_μ`
    tetrad: Vec<Vec<Expr>>,
    metric: Vec<Vec<Expr>>,
    inv_metric: Vec<Vec<Expr>>,
    /// `c[a][b][c]` with `[e_b, e_c] = c^a_{bc} e_a`
    structure: Vec<Vec<Vec<Expr>>>,
    det_q: Expr,
    tau: Multivector,
    dtheta: Vec<Multivector>,
    d_blades: Vec<Multivector>,
}

impl Geometry {
    pub fn build(chart: Chart, sig: Signature, cotetrad: Vec<Vec<Expr>>) -> Result<Arc<Geometry>, GeometryError> {
        Geometry::build_with(chart, sig, cotetrad, Sampling::default())
    }

    pub fn build_with(
        chart: Chart,
        sig: Signature,
        cotetrad: Vec<Vec<Expr>>,
        sampling: Sampling,
    ) -> Result<Arc<Geometry>, GeometryError> {
        let n = sig.n();
        if chart.names.len() != n {
            return Err(GeometryError::Dimension { names: chart.names.len(), dim: n });
        }
        if cotetrad.len() != n || cotetrad.iter().any(|r| r.len() != n) {
            return Err(GeometryError::Shape(n));
        }
        let det_q = det(&cotetrad);
        for p in chart.domain.points(sampling.samples) {
            let mut ev = Evaluator::new(&p, &chart.params);
            for row in &cotetrad {
                for e in row {
                    ev.eval(e)?;
                }
            }
            if ev.eval(&det_q)?.abs() < 1e-12 {
                return Err(GeometryError::Singular(p));
            }
        }
        let tetrad = inverse(&cotetrad, &det_q);
        let metric = (0..n)
            .map(|m| {
                (0..n)
                    .map(|v| Expr::sum((0..n).map(|a| cotetrad[a][m].mul(&cotetrad[a][v]).scale(sig.eta(a).into()))))
                    .collect()
            })
            .collect();
        let inv_metric = (0..n)
            .map(|m| {
                (0..n)
                    .map(|v| Expr::sum((0..n).map(|a| tetrad[m][a].mul(&tetrad[v][a]).scale(sig.eta(a).into()))))
                    .collect()
            })
            .collect();
        let tau = Multivector::pseudoscalar(sig).scale_int(if chart.positive { 1 } else { -1 });
        let mut g = Geometry {
            chart,
            sig,
            sampling,
            cotetrad,
            tetrad,
            metric,
            inv_metric,
            structure: Vec::new(),
            det_q,
            tau,
            dtheta: Vec::new(),
            d_blades: Vec::new(),
        };
        g.structure = g.commutator_coefficients();
        g.dtheta = (0..n)
            .map(|a| {
                let mut terms = Vec::new();
                for b in 0..n {
                    for c in b + 1..n {
                        terms.push(((1u32 << b) | (1 << c), g.structure[a][b][c].neg()));
                    }
                }
                Multivector::from_terms(sig, terms)
            })
            .collect();
        g.d_blades = g.exterior_of_blades();
        Ok(Arc::new(g))
    }

    /// `c^a_{bc} = q^a_ν (e_b(q^ν_c) − e_c(q^ν_b))`.
    fn commutator_coefficients(&self) -> Vec<Vec<Vec<Expr>>> {
        let n = self.n();
        let mut c = vec![vec![vec![Expr::zero(); n]; n]; n];
        for b in 0..n {
            for cc in b + 1..n {
                let bracket: Vec<Expr> = (0..n)
                    .map(|v| self.pfaff(&self.tetrad[v][cc], b).sub(&self.pfaff(&self.tetrad[v][b], cc)))
                    .collect();
                for a in 0..n {
                    let val = Expr::sum((0..n).map(|v| self.cotetrad[a][v].mul(&bracket[v])));
                    c[a][cc][b] = val.neg();
                    c[a][b][cc] = val;
                }
            }
        }
        c
    }

    /// `d(θ^B)` for every blade B, by the Leibniz rule from `dθ^a`.
    fn exterior_of_blades(&self) -> Vec<Multivector> {
        let full = self.sig.full_mask() as usize;
        let mut out: Vec<Multivector> = Vec::with_capacity(full + 1);
        out.push(Multivector::zero(self.sig));
        for mask in 1..=full as u32 {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let rest_blade = Multivector::blade(self.sig, rest, Expr::one());
            let first = self.dtheta[i].wedge(&rest_blade);
            let second = Multivector::basis(self.sig, i).wedge(&out[rest as usize]);
            out.push(first.sub(&second));
        }
        out
    }

    /// Same geometry compared under different sampling settings.
    pub fn resampled(&self, sampling: Sampling) -> Arc<Geometry> {
        Arc::new(Geometry { sampling, ..self.clone() })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn n(&self) -> usize {
        self.sig.n()
    }

    pub fn eta(&self, a: usize) -> i64 {
        self.sig.eta(a)
    }

    pub fn sampling(&self) -> Sampling {
        self.sampling
    }

    pub fn probe(&self) -> Probe {
        Probe::new(self.chart.domain.clone()).with_params(self.chart.params.clone()).with_sampling(self.sampling)
    }

    pub fn cotetrad(&self) -> &[Vec<Expr>] {
        &self.cotetrad
    }

    pub fn tetrad(&self) -> &[Vec<Expr>] {
        &self.tetrad
    }

    pub fn metric(&self) -> &[Vec<Expr>] {
        &self.metric
    }

    pub fn inv_metric(&self) -> &[Vec<Expr>] {
        &self.inv_metric
    }

    pub fn structure_coefficients(&self) -> &[Vec<Vec<Expr>>] {
        &self.structure
    }

    /// `dθ^a = −½ c^a_{bc} θ^b∧θ^c`.
    pub fn dtheta(&self, a: usize) -> &Multivector {
        &self.dtheta[a]
    }

    pub fn d_blade(&self, blade: u32) -> &Multivector {
        &self.d_blades[blade as usize]
    }

    pub fn volume_element(&self) -> &Multivector {
        &self.tau
    }

    /// `√|det g| = |det q|`.
    pub fn sqrt_abs_det_g(&self) -> Expr {
        self.det_q.abs()
    }

    pub fn det_cotetrad(&self) -> &Expr {
        &self.det_q
    }

    pub fn theta(&self, a: usize) -> Multivector {
        Multivector::basis(self.sig, a)
    }

    /// `θ_a = η_ab θ^b`.
    pub fn theta_lower(&self, a: usize) -> Multivector {
        self.theta(a).scale_int(self.eta(a))
    }

    /// `e_a(f) = q^μ_a ∂_μ f`.
    pub fn pfaff(&self, f: &Expr, a: usize) -> Expr {
        Expr::sum((0..self.n()).map(|m| self.tetrad[m][a].mul(&f.diff(m))))
    }

    pub fn pfaff_derivative(&self, x: &Multivector, a: usize) -> Multivector {
        x.map_coeffs(|_, e| self.pfaff(e, a))
    }

    /// Coefficients on coordinate blades `dx^M` after substituting `θ^a = q^a_μ dx^μ`.
    pub fn to_coordinate(&self, x: &Multivector) -> Vec<(u32, Expr)> {
        let mut acc: HashMap<u32, Vec<Expr>> = HashMap::new();
        let n = self.n();
        for (frame, coeff) in x.terms() {
            let rows: Vec<usize> = (0..n).filter(|i| frame >> i & 1 == 1).collect();
            for cmask in 0..=self.sig.full_mask() {
                if grade_of(cmask) != rows.len() {
                    continue;
                }
                let cols: Vec<usize> = (0..n).filter(|i| cmask >> i & 1 == 1).collect();
                let minor: Vec<Vec<Expr>> =
                    rows.iter().map(|&r| cols.iter().map(|&c| self.cotetrad[r][c].clone()).collect()).collect();
                let d = det(&minor);
                if !d.is_zero() {
                    acc.entry(cmask).or_default().push(coeff.mul(&d));
                }
            }
        }
        let mut out: Vec<(u32, Expr)> = acc.into_iter().map(|(b, es)| (b, Expr::sum(es))).collect();
        out.sort_by_key(|(b, _)| *b);
        out
    }

    /// Simplified coefficient, kept only if it samples equal to the original.
    pub fn tidy_expr(&self, e: &Expr) -> Expr {
        let s = e.simplify();
        if s.ptr_eq(e) || self.probe().expr_equal(&s, e).unwrap_or(false) {
            s
        } else {
            e.clone()
        }
    }

    pub fn tidy(&self, x: &Multivector) -> Multivector {
        x.map_coeffs(|_, e| self.tidy_expr(e))
    }

    pub fn render_frame(&self, x: &Multivector) -> String {
        self.tidy(x).render(self.chart.frame_base)
    }

    pub fn render_coordinate(&self, x: &Multivector) -> String {
        let names = &self.chart.names;
        let terms: Vec<(u32, Expr)> = self.to_coordinate(x).into_iter().map(|(b, e)| (b, self.tidy_expr(&e))).collect();
        render_terms(terms, |b| {
            (0..self.n()).filter(|i| b >> i & 1 == 1).map(|i| format!("d{}", names[i])).collect::<Vec<_>>().join("∧")
        })
    }

    pub fn frame_label(&self, blade: u32) -> String {
        blade_name(blade, self.chart.frame_base)
    }
}

/// Symbolic determinant by cofactor expansion along rows, skipping literal zeros.
pub fn det(m: &[Vec<Expr>]) -> Expr {
    let n = m.len();
    if n == 0 {
        return Expr::one();
    }
    let mut memo: HashMap<(usize, u32), Expr> = HashMap::new();
    minor_det(m, 0, (1u32 << n) - 1, &mut memo)
}

fn minor_det(m: &[Vec<Expr>], row: usize, cols: u32, memo: &mut HashMap<(usize, u32), Expr>) -> Expr {
    if cols == 0 {
        return Expr::one();
    }
    if let Some(e) = memo.get(&(row, cols)) {
        return e.clone();
    }
    let mut terms = Vec::new();
    let mut sign_pos = 0;
    for c in 0..m.len() {
        if cols >> c & 1 == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let sub = minor_det(m, row + 1, cols & !(1 << c), memo);
            let t = entry.mul(&sub);
            terms.push(if sign_pos % 2 == 0 { t } else { t.neg() });
        }
        sign_pos += 1;
    }
    let e = Expr::sum(terms);
    memo.insert((row, cols), e.clone());
    e
}

/// Inverse by adjugate; diagonal input gets the direct reciprocal.
fn inverse(m: &[Vec<Expr>], det_m: &Expr) -> Vec<Vec<Expr>> {
    let n = m.len();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m[i][j].is_zero()));
    if diagonal {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { Expr::one().div(&m[i][i]) } else { Expr::zero() }).collect())
            .collect();
    }
    let mut inv = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Expr>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                .collect();
            let cof = det(&minor);
            let cof = if (i + j) % 2 == 0 { cof } else { cof.neg() };
            inv[j][i] = cof.div(det_m);
        }
    }
    inv
}
