//! Clifford algebra Cl(p,q) of the orthonormal coframe with symbolic coefficients.
//!
//! A blade is a bitmask: bit `i` set means `θ^{i+1}` is a factor, factors in
//! ascending order. Products reorder factors by counting transpositions and
//! pick up `η_ii` for every repeated direction.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::symexpr::Domain;
use crate::symexpr::{EvalError, Evaluator, Expr, Params, Sampling};

pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignatureError {
    #[error("dimension p+q = {0} outside 1..=8")]
    Dimension(usize),
}

/// `η = diag(+1 ×p, −1 ×q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Signature, SignatureError> {
        let n = p + q;
        if n == 0 || n > MAX_DIM {
            return Err(SignatureError::Dimension(n));
        }
        Ok(Signature { p, q })
    }

    pub fn euclidean(n: usize) -> Signature {
        Signature::new(n, 0).expect("dimension in range")
    }

    pub fn minkowski() -> Signature {
        Signature { p: 1, q: 3 }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn eta(&self, i: usize) -> i64 {
        if i < self.p {
            1
        } else {
            -1
        }
    }

    /// Sign of det g.
    pub fn sgn(&self) -> i64 {
        if self.q.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.n()) - 1
    }
}

pub fn grade_of(blade: u32) -> usize {
    blade.count_ones() as usize
}

/// Sign from moving the factors of `b` past those of `a` into ascending order.
pub fn reorder_sign(a: u32, b: u32) -> i64 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

fn metric_factor(sig: &Signature, common: u32) -> i64 {
    (0..sig.n()).filter(|i| common >> i & 1 == 1).map(|i| sig.eta(i)).product()
}

fn indices(blade: u32) -> Vec<usize> {
    (0..32).filter(|i| blade >> i & 1 == 1).collect()
}

fn reverse_sign(r: usize) -> i64 {
    if (r * r.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn parity(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Determinant of the Gram matrix `(θ^{a_i} · θ^{b_j})` of two ordered lists of basis covectors.
fn gram(sig: &Signature, a: &[usize], b: &[usize]) -> i64 {
    if a.is_empty() {
        return 1;
    }
    let mut total = 0;
    for (j, &bj) in b.iter().enumerate() {
        if bj != a[0] {
            continue;
        }
        let rest: Vec<usize> = b.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect();
        total += parity(j) * sig.eta(a[0]) * gram(sig, &a[1..], &rest);
    }
    total
}

#[derive(Debug, Clone)]
pub struct Multivector {
    sig: Signature,
    terms: BTreeMap<u32, Expr>,
}

impl Multivector {
    pub fn zero(sig: Signature) -> Multivector {
        Multivector { sig, terms: BTreeMap::new() }
    }

    pub fn scalar(sig: Signature, e: Expr) -> Multivector {
        Multivector::blade(sig, 0, e)
    }

    pub fn blade(sig: Signature, mask: u32, e: Expr) -> Multivector {
        assert!(mask <= sig.full_mask(), "blade outside Cl({},{})", sig.p, sig.q);
        let mut m = Multivector::zero(sig);
        m.insert(mask, e);
        m
    }

    /// `θ^{i+1}` for 0-based direction `i`.
    pub fn basis(sig: Signature, i: usize) -> Multivector {
        Multivector::blade(sig, 1 << i, Expr::one())
    }

    /// `coeffs[i] θ^{i+1}` summed.
    pub fn vector(sig: Signature, coeffs: &[Expr]) -> Multivector {
        let mut m = Multivector::zero(sig);
        for (i, c) in coeffs.iter().enumerate() {
            m.insert(1 << i, c.clone());
        }
        m
    }

    /// `θ^1 ∧ … ∧ θ^n`.
    pub fn pseudoscalar(sig: Signature) -> Multivector {
        Multivector::blade(sig, sig.full_mask(), Expr::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Expr)>>(sig: Signature, terms: I) -> Multivector {
        let mut acc: BTreeMap<u32, Vec<Expr>> = BTreeMap::new();
        for (b, e) in terms {
            assert!(b <= sig.full_mask(), "blade outside Cl({},{})", sig.p, sig.q);
            acc.entry(b).or_default().push(e);
        }
        let mut m = Multivector::zero(sig);
        for (b, es) in acc {
            m.insert(b, Expr::sum(es));
        }
        m
    }

    fn insert(&mut self, blade: u32, e: Expr) {
        if e.is_zero() {
            self.terms.remove(&blade);
        } else {
            self.terms.insert(blade, e);
        }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Expr)> {
        self.terms.iter().map(|(b, e)| (*b, e))
    }

    pub fn coeff(&self, blade: u32) -> Expr {
        self.terms.get(&blade).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| grade_of(*b)).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// The single grade present, if the multivector is homogeneous (zero counts as any grade).
    pub fn homogeneous_grade(&self) -> Option<usize> {
        match self.grades().as_slice() {
            [] => Some(0),
            [g] => Some(*g),
            _ => None,
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(u32, &Expr) -> Expr) -> Multivector {
        Multivector::from_terms(self.sig, self.terms.iter().map(|(b, e)| (*b, f(*b, e))))
    }

    pub fn add(&self, other: &Multivector) -> Multivector {
        self.check(other);
        let terms = self.terms.iter().chain(other.terms.iter()).map(|(b, e)| (*b, e.clone()));
        Multivector::from_terms(self.sig, terms)
    }

    pub fn sub(&self, other: &Multivector) -> Multivector {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Multivector {
        self.map_coeffs(|_, e| e.neg())
    }

    pub fn scale(&self, s: &Expr) -> Multivector {
        self.map_coeffs(|_, e| s.mul(e))
    }

    pub fn scale_int(&self, k: i64) -> Multivector {
        self.scale(&Expr::int(k))
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Multivector>>(sig: Signature, items: I) -> Multivector {
        let terms: Vec<(u32, Expr)> =
            items.into_iter().flat_map(|m| m.terms.iter().map(|(b, e)| (*b, e.clone()))).collect();
        Multivector::from_terms(sig, terms)
    }

    pub fn grade_project(&self, r: usize) -> Multivector {
        Multivector {
            sig: self.sig,
            terms: self.terms.iter().filter(|(b, _)| grade_of(**b) == r).map(|(b, e)| (*b, e.clone())).collect(),
        }
    }

    /// `Ã`: each grade-r part times `(−1)^{r(r−1)/2}`.
    pub fn reversion(&self) -> Multivector {
        self.map_coeffs(|b, e| e.scale(reverse_sign(grade_of(b)).into()))
    }

    /// `Â`: each grade-r part times `(−1)^r`.
    pub fn grade_involution(&self) -> Multivector {
        self.map_coeffs(|b, e| e.scale(parity(grade_of(b)).into()))
    }

    fn check(&self, other: &Multivector) {
        assert_eq!(self.sig, other.sig, "mixed signatures");
    }

    fn bilinear(&self, other: &Multivector, f: impl Fn(u32, u32) -> Option<(u32, i64)>) -> Multivector {
        self.check(other);
        let mut out = Vec::new();
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                if let Some((blade, sign)) = f(*a, *b) {
                    let c = ea.mul(eb);
                    out.push((blade, if sign < 0 { c.neg() } else { c }));
                }
            }
        }
        Multivector::from_terms(self.sig, out)
    }

    pub fn clifford_mul(&self, other: &Multivector) -> Multivector {
        let sig = self.sig;
        self.bilinear(other, |a, b| {
            let s = reorder_sign(a, b) * metric_factor(&sig, a & b);
            Some((a ^ b, s))
        })
    }

    pub fn wedge(&self, other: &Multivector) -> Multivector {
        self.bilinear(other, |a, b| if a & b == 0 { Some((a | b, reorder_sign(a, b))) } else { None })
    }

    /// `A⌟B`: for each split of the factors of B into an r-subset S and its
    /// complement, `ε(S, B∖S) (A · S̃) θ^{B∖S}`.
    pub fn left_contract(&self, other: &Multivector) -> Multivector {
        let sig = self.sig;
        self.bilinear(other, |a, b| {
            let r = grade_of(a);
            let bi = indices(b);
            if r > bi.len() {
                return None;
            }
            let ai = indices(a);
            let mut total = 0;
            let mut result = 0;
            for s in subsets(b, r) {
                let mut s_rev = indices(s);
                s_rev.reverse();
                let g = gram(&sig, &ai, &s_rev);
                if g != 0 {
                    total += reorder_sign(s, b & !s) * g;
                    result = b & !s;
                }
            }
            (total != 0).then_some((result, total))
        })
    }

    /// `A⌞B = ⟨A_r B_s⟩_{r−s}`, zero when s > r.
    pub fn right_contract(&self, other: &Multivector) -> Multivector {
        let sig = self.sig;
        self.bilinear(other, |a, b| {
            let (r, s) = (grade_of(a), grade_of(b));
            if s > r || grade_of(a ^ b) != r - s {
                return None;
            }
            Some((a ^ b, reorder_sign(a, b) * metric_factor(&sig, a & b)))
        })
    }

    /// Gram-determinant scalar product, summed over equal-grade blade pairs.
    pub fn scalar_product(&self, other: &Multivector) -> Expr {
        self.check(other);
        let mut out = Vec::new();
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                if grade_of(*a) != grade_of(*b) {
                    continue;
                }
                let g = gram(&self.sig, &indices(*a), &indices(*b));
                if g != 0 {
                    out.push(ea.mul(eb).scale(g.into()));
                }
            }
        }
        Expr::sum(out)
    }

    /// `⋆A = Ã τ`.
    pub fn hodge_star(&self, tau: &Multivector) -> Multivector {
        self.reversion().clifford_mul(tau)
    }

    /// Inverse of [`hodge_star`](Self::hodge_star): `(−1)^{r(n−r)} sgn g ⋆` on each part, r the result grade.
    pub fn hodge_inverse(&self, tau: &Multivector) -> Multivector {
        let n = self.sig.n();
        let parts: Vec<Multivector> = self
            .grades()
            .into_iter()
            .map(|k| {
                let r = n - k;
                let s = parity(r * (n - r)) * self.sig.sgn();
                self.grade_project(k).hodge_star(tau).scale_int(s)
            })
            .collect();
        Multivector::sum(self.sig, &parts)
    }

    pub fn eval(&self, ev: &mut Evaluator) -> Result<BTreeMap<u32, f64>, EvalError> {
        self.terms.iter().map(|(b, e)| Ok((*b, ev.eval(e)?))).collect()
    }

    pub fn diff(&self, coord: usize) -> Multivector {
        self.map_coeffs(|_, e| e.diff(coord))
    }

    /// Frame rendering with direction labels starting at `base`.
    pub fn render(&self, base: usize) -> String {
        render_terms(self.terms.iter().map(|(b, e)| (*b, e.clone())), |b| blade_name(b, base))
    }
}

/// Render `Σ coeff·name(blade)`, ordering blades by grade then indices.
pub fn render_terms<I, F>(terms: I, name: F) -> String
where
    I: IntoIterator<Item = (u32, Expr)>,
    F: Fn(u32) -> String,
{
    use crate::symexpr::Node;
    let mut terms: Vec<(u32, Expr)> = terms.into_iter().filter(|(_, e)| !e.is_zero()).collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    terms.sort_by_key(|(b, _)| (grade_of(*b), indices(*b)));
    let mut out = String::new();
    for (k, (b, e)) in terms.iter().enumerate() {
        let (neg, mag) = match e.node() {
            Node::Neg(x) => (true, x.clone()),
            Node::Const(r) if *r.numer() < 0 => (true, Expr::rational(-*r)),
            _ => (false, e.clone()),
        };
        out.push_str(match (k, neg) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        });
        let label = name(*b);
        if label.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&label);
        } else if matches!(mag.node(), Node::Add(..)) {
            out.push_str(&format!("({mag})·{label}"));
        } else {
            out.push_str(&format!("{mag}·{label}"));
        }
    }
    out
}

pub fn blade_name(blade: u32, base: usize) -> String {
    indices(blade).iter().map(|i| format!("θ{}", i + base)).collect::<Vec<_>>().join("∧")
}

/// All sub-masks of `mask` with `r` bits set.
fn subsets(mask: u32, r: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut sub = mask;
    loop {
        if grade_of(sub) == r {
            out.push(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    out
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(1))
    }
}

/// Sampling context for numeric comparison of multivectors.
#[derive(Debug, Clone)]
pub struct Probe {
    pub domain: Domain,
    pub params: Params,
    pub sampling: Sampling,
}

impl Probe {
    pub fn new(domain: Domain) -> Probe {
        Probe { domain, params: Params::new(), sampling: Sampling::default() }
    }

    pub fn with_params(mut self, params: Params) -> Probe {
        self.params = params;
        self
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Probe {
        self.sampling = sampling;
        self
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.domain.points(self.sampling.samples)
    }

    /// Blade-wise tolerance test at every sample point.
    pub fn mv_equal(&self, a: &Multivector, b: &Multivector) -> Result<bool, EvalError> {
        for p in self.points() {
            let mut ev = Evaluator::new(&p, &self.params);
            let (x, y) = (a.eval(&mut ev)?, b.eval(&mut ev)?);
            for blade in x.keys().chain(y.keys()) {
                let u = x.get(blade).copied().unwrap_or(0.0);
                let v = y.get(blade).copied().unwrap_or(0.0);
                if !self.sampling.close(u, v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn expr_equal(&self, a: &Expr, b: &Expr) -> Result<bool, EvalError> {
        crate::symexpr::sample::num_equal_with(a, b, &self.domain, &self.params, self.sampling)
    }

    /// Largest blade coefficient of `a − b` over the sample points.
    pub fn mv_residual(&self, a: &Multivector, b: &Multivector) -> Result<f64, EvalError> {
        let d = a.sub(b);
        let mut worst: f64 = 0.0;
        for p in self.points() {
            let mut ev = Evaluator::new(&p, &self.params);
            for v in d.eval(&mut ev)?.values() {
                worst = worst.max(v.abs());
            }
        }
        Ok(worst)
    }

    pub fn expr_residual(&self, a: &Expr, b: &Expr) -> Result<f64, EvalError> {
        crate::symexpr::sample::max_abs_diff(a, b, &self.domain, &self.params, self.sampling.samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> Signature {
        Signature::euclidean(2)
    }

    fn c(k: i64) -> Expr {
        Expr::int(k)
    }

    fn num(m: &Multivector) -> BTreeMap<u32, f64> {
        let params = Params::new();
        m.eval(&mut Evaluator::new(&[], &params)).unwrap()
    }

    #[test]
    fn basic_products() {
        let s = e2();
        let t1 = Multivector::basis(s, 0);
        let t2 = Multivector::basis(s, 1);
        let t12 = t1.wedge(&t2);
        assert_eq!(num(&t12), BTreeMap::from([(0b11, 1.0)]));
        assert_eq!(num(&t2.wedge(&t1)), BTreeMap::from([(0b11, -1.0)]));
        assert!(t1.wedge(&t1).is_zero());
        assert_eq!(num(&t1.left_contract(&t12)), BTreeMap::from([(0b10, 1.0)]));
        assert_eq!(num(&t2.left_contract(&t12)), BTreeMap::from([(0b01, -1.0)]));
        assert_eq!(num(&t12.left_contract(&t12)), BTreeMap::from([(0, -1.0)]));
        assert_eq!(num(&t12.clifford_mul(&t12)), BTreeMap::from([(0, -1.0)]));
        assert!(t12.left_contract(&t1).is_zero());
        assert_eq!(t12.scalar_product(&t12).as_const().unwrap(), 1.into());
        assert!(t1.scalar_product(&t12).is_zero());
    }

    #[test]
    fn lorentzian_signs() {
        let s = Signature::minkowski();
        let t0 = Multivector::basis(s, 0);
        let t1 = Multivector::basis(s, 1);
        assert_eq!(num(&t0.clifford_mul(&t0)), BTreeMap::from([(0, 1.0)]));
        assert_eq!(num(&t1.clifford_mul(&t1)), BTreeMap::from([(0, -1.0)]));
        assert_eq!(s.sgn(), -1);
        let tau = Multivector::pseudoscalar(s);
        // ⋆τ = sgn g, ⋆1 = τ
        assert_eq!(num(&tau.hodge_star(&tau)), BTreeMap::from([(0, -1.0)]));
        assert_eq!(num(&Multivector::scalar(s, c(1)).hodge_star(&tau)), BTreeMap::from([(0b1111, 1.0)]));
        let f = t0.wedge(&t1);
        assert_eq!(num(&f.hodge_star(&tau).hodge_inverse(&tau)), num(&f));
    }

    #[test]
    fn hodge_round_trips() {
        let s = e2();
        let tau = Multivector::pseudoscalar(s);
        assert_eq!(num(&tau.hodge_inverse(&tau)), BTreeMap::from([(0, 1.0)]));
        let t1 = Multivector::basis(s, 0);
        assert_eq!(num(&t1.hodge_star(&tau)), BTreeMap::from([(0b10, 1.0)]));
        assert_eq!(num(&t1.hodge_star(&tau).hodge_inverse(&tau)), num(&t1));
    }

    #[test]
    fn no_literal_zeros_stored() {
        let s = e2();
        let t1 = Multivector::basis(s, 0);
        let m = t1.add(&t1.neg());
        assert!(m.is_zero());
        assert!(Multivector::blade(s, 1, Expr::zero()).is_zero());
    }

    #[test]
    fn rendering() {
        let s = e2();
        let t = Expr::coord(0, "t");
        let m = Multivector::from_terms(s, [(0b10, t.cot()), (0b11, c(1)), (0, -t.sin())]);
        assert_eq!(m.render(1), "-sin(t) + cot(t)·θ2 + θ1∧θ2");
        assert_eq!(Multivector::zero(s).to_string(), "0");
    }

    #[test]
    fn gram_determinants() {
        let s = Signature::new(2, 1).unwrap();
        assert_eq!(gram(&s, &[0, 2], &[0, 2]), -1);
        assert_eq!(gram(&s, &[0, 2], &[2, 0]), 1);
        assert_eq!(gram(&s, &[0, 1], &[0, 2]), 0);
    }
}
