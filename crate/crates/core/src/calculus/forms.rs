use thiserror::Error;

use super::ext_d;
use crate::connection::Connection;
use crate::multivector::{Multivector, Probe, Signature};
use crate::symexpr::EvalError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeError {
    #[error("index extent {found} does not match dimension {expected}")]
    Extent { expected: usize, found: usize },
    #[error("expected {expected} entries, found {found}")]
    Count { expected: usize, found: usize },
    #[error("entries must be homogeneous of one grade")]
    Grade,
}

/// A family `X^{a₁…a_p}_{b₁…b_q}` of r-forms, upper indices first, row-major.
#[derive(Debug, Clone)]
pub struct IndexedForms {
    upper: usize,
    lower: usize,
    n: usize,
    entries: Vec<Multivector>,
}

impl IndexedForms {
    pub fn new(upper: usize, lower: usize, n: usize, entries: Vec<Multivector>) -> Result<IndexedForms, ShapeError> {
        let expected = n.pow((upper + lower) as u32);
        if entries.len() != expected {
            return Err(ShapeError::Count { expected, found: entries.len() });
        }
        if let Some(first) = entries.first() {
            if first.signature().n() != n {
                return Err(ShapeError::Extent { expected: n, found: first.signature().n() });
            }
        }
        let mut grade = None;
        for e in &entries {
            match (e.homogeneous_grade(), grade) {
                (None, _) => return Err(ShapeError::Grade),
                (Some(_), _) if e.is_zero() => {}
                (Some(g), None) => grade = Some(g),
                (Some(g), Some(h)) if g != h => return Err(ShapeError::Grade),
                _ => {}
            }
        }
        Ok(IndexedForms { upper, lower, n, entries })
    }

    pub fn from_fn(upper: usize, lower: usize, n: usize, f: impl Fn(&[usize]) -> Multivector) -> IndexedForms {
        let entries = multi_indices(upper + lower, n).iter().map(|ix| f(ix)).collect();
        IndexedForms::new(upper, lower, n, entries).expect("entries built with a consistent shape")
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.upper, self.lower)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, ix: &[usize]) -> &Multivector {
        &self.entries[self.flat(ix)]
    }

    fn flat(&self, ix: &[usize]) -> usize {
        assert_eq!(ix.len(), self.upper + self.lower, "index count");
        ix.iter().fold(0, |acc, &i| {
            assert!(i < self.n, "index out of range");
            acc * self.n + i
        })
    }

    pub fn entries(&self) -> &[Multivector] {
        &self.entries
    }

    pub fn indices(&self) -> Vec<Vec<usize>> {
        multi_indices(self.upper + self.lower, self.n)
    }

    pub fn map(&self, f: impl Fn(&Multivector) -> Multivector) -> IndexedForms {
        IndexedForms { upper: self.upper, lower: self.lower, n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn zip(&self, other: &IndexedForms, f: impl Fn(&Multivector, &Multivector) -> Multivector) -> IndexedForms {
        assert_eq!((self.upper, self.lower, self.n), (other.upper, other.lower, other.n), "shape mismatch");
        IndexedForms {
            upper: self.upper,
            lower: self.lower,
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &IndexedForms) -> IndexedForms {
        self.zip(other, |a, b| a.sub(b))
    }

    /// Largest blade coefficient over all entries and sample points.
    pub fn max_abs(&self, probe: &Probe) -> Result<f64, EvalError> {
        let mut worst: f64 = 0.0;
        for e in &self.entries {
            worst = worst.max(probe.mv_residual(e, &Multivector::zero(e.signature()))?);
        }
        Ok(worst)
    }

    pub fn signature(&self) -> Option<Signature> {
        self.entries.first().map(Multivector::signature)
    }
}

pub(crate) fn multi_indices(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|ix| {
                (0..n).map(move |i| {
                    let mut v = ix.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

/// `DX = dX + ω^{a}_s∧X^{…s…}` per upper index `− ω^s_{b}∧X_{…s…}` per lower index.
pub fn ext_cov_d(c: &Connection, x: &IndexedForms) -> Result<IndexedForms, ShapeError> {
    let g = c.geometry();
    let n = g.n();
    if x.n != n {
        return Err(ShapeError::Extent { expected: n, found: x.n });
    }
    let sig = g.signature();
    let omega: Vec<Vec<Multivector>> = (0..n).map(|a| (0..n).map(|b| c.omega(a, b)).collect()).collect();
    let entries = x
        .indices()
        .iter()
        .map(|ix| {
            let mut parts = vec![ext_d(g, x.get(ix))];
            for slot in 0..x.upper + x.lower {
                for s in 0..n {
                    let mut jx = ix.clone();
                    jx[slot] = s;
                    let term = if slot < x.upper {
                        omega[ix[slot]][s].wedge(x.get(&jx))
                    } else {
                        omega[s][ix[slot]].wedge(x.get(&jx)).neg()
                    };
                    parts.push(term);
                }
            }
            Multivector::sum(sig, &parts)
        })
        .collect();
    IndexedForms::new(x.upper, x.lower, n, entries)
}
