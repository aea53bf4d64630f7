//! Deterministic sampling used as the equality oracle.
//!
//! Sample `i` (for `i = 1, 2, …, N`) has coordinate `k` equal to
//! `lo_k + (hi_k - lo_k) * h(i, P_k)`, where `h(i, b)` is the radical inverse
//! of `i` in base `b` (the Halton sequence) and `P_k` is the `k`-th prime
//! (2, 3, 5, 7, …). Index 0 is skipped because it maps every coordinate onto
//! the lower corner.

use thiserror::Error;

use super::{EvalError, Evaluator, Expr, Params};

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

pub const DEFAULT_SAMPLES: usize = 16;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid domain: {0}")]
pub struct DomainError(pub String);

/// Closed box `[lo_k, hi_k]` per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    bounds: Vec<(f64, f64)>,
}

impl Domain {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Domain, DomainError> {
        if bounds.is_empty() || bounds.len() > PRIMES.len() {
            return Err(DomainError(format!("{} coordinates (need 1..=8)", bounds.len())));
        }
        for (k, &(lo, hi)) in bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(DomainError(format!("interval {k} is [{lo}, {hi}]")));
            }
        }
        Ok(Domain { bounds })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim() && self.bounds.iter().zip(p).all(|(&(lo, hi), &x)| lo <= x && x <= hi)
    }

    /// Replace the interval of one coordinate.
    pub fn restrict(&self, k: usize, lo: f64, hi: f64) -> Result<Domain, DomainError> {
        let mut b = self.bounds.clone();
        b[k] = (lo, hi);
        Domain::new(b)
    }

    pub fn points(&self, count: usize) -> Vec<Vec<f64>> {
        (1..=count as u64)
            .map(|i| {
                self.bounds.iter().zip(PRIMES).map(|(&(lo, hi), b)| lo + (hi - lo) * radical_inverse(i, b)).collect()
            })
            .collect()
    }
}

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let mut inv = 1.0 / base as f64;
    let mut acc = 0.0;
    while i > 0 {
        acc += (i % b) as f64 * inv;
        i /= b;
        inv /= base as f64;
    }
    acc
}

/// Sample count and relative tolerance for numeric comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub samples: usize,
    pub tol: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { samples: DEFAULT_SAMPLES, tol: DEFAULT_TOL }
    }
}

impl Sampling {
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.tol * (1.0 + a.abs().max(b.abs()))
    }
}

/// `|a - b| <= 1e-9 * (1 + max(|a|, |b|))` at 16 Halton points of `dom`.
pub fn num_equal(a: &Expr, b: &Expr, dom: &Domain) -> Result<bool, EvalError> {
    num_equal_with(a, b, dom, &Params::new(), Sampling::default())
}

pub fn num_equal_with(a: &Expr, b: &Expr, dom: &Domain, params: &Params, s: Sampling) -> Result<bool, EvalError> {
    for p in dom.points(s.samples) {
        let mut ev = Evaluator::new(&p, params);
        if !s.close(ev.eval(a)?, ev.eval(b)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `|a - b|` over the sample points.
pub fn max_abs_diff(a: &Expr, b: &Expr, dom: &Domain, params: &Params, samples: usize) -> Result<f64, EvalError> {
    let mut worst: f64 = 0.0;
    for p in dom.points(samples) {
        let mut ev = Evaluator::new(&p, params);
        worst = worst.max((ev.eval(a)? - ev.eval(b)?).abs());
    }
    Ok(worst)
}

/// Compare `d e / d x_k` against a central difference (step 1e-5, relative tolerance 1e-6).
pub fn fd_check(e: &Expr, k: usize, dom: &Domain) -> Result<(), String> {
    fd_check_with(e, k, dom, &Params::new())
}

pub fn fd_check_with(e: &Expr, k: usize, dom: &Domain, params: &Params) -> Result<(), String> {
    const H: f64 = 1e-5;
    let d = e.diff(k);
    for p in dom.points(DEFAULT_SAMPLES) {
        let exact = d.eval_at(&p, params).map_err(|err| err.to_string())?;
        let mut hi = p.clone();
        let mut lo = p.clone();
        hi[k] += H;
        lo[k] -= H;
        let f_hi = e.eval_at(&hi, params).map_err(|err| err.to_string())?;
        let f_lo = e.eval_at(&lo, params).map_err(|err| err.to_string())?;
        let approx = (f_hi - f_lo) / (2.0 * H);
        if (exact - approx).abs() > 1e-6 * (1.0 + exact.abs().max(approx.abs())) {
            return Err(format!("at {p:?}: symbolic {exact}, finite difference {approx}"));
        }
    }
    Ok(())
}
