//! Differential operators on Clifford fields.
//!
//! `d` is intrinsic (Pfaff derivatives plus `dθ^a` from the structure
//! coefficients) and `δ` is the ⋆-conjugate of `d`. Connection-based routes
//! to the same operators live alongside as separate code paths so they can be
//! compared.

mod dirac;
mod forms;
mod identities;

use crate::manifold::Geometry;
use crate::multivector::Multivector;
use crate::symexpr::Expr;

pub use dirac::{
    cov_deriv, cov_deriv_by_derivation, d_delta_via_rc, dirac, dirac_contract, dirac_wedge, einstein_operator,
    einstein_operator_alt, hodge_dalembertian, ricci_operator, square_split,
};
pub use forms::{ext_cov_d, IndexedForms, ShapeError};
pub use identities::{
    bianchi_reports, cotetrad_wave_equation, dual_ricci_like, dual_torsion_bianchi, dual_torsion_d,
    dual_torsion_d_decomposed, evans_check, BianchiReport, EvansReport, WaveReport,
};

/// Exterior derivative in the orthonormal coframe.
pub fn ext_d(g: &Geometry, x: &Multivector) -> Multivector {
    let sig = g.signature();
    let mut parts = Vec::new();
    for (blade, f) in x.terms() {
        let basis = Multivector::blade(sig, blade, Expr::one());
        for a in 0..g.n() {
            let ef = g.pfaff(f, a);
            if !ef.is_zero() {
                parts.push(Multivector::blade(sig, 1 << a, ef).wedge(&basis));
            }
        }
        let db = g.d_blade(blade);
        if !db.is_zero() {
            parts.push(db.scale(f));
        }
    }
    Multivector::sum(sig, &parts)
}

/// `δ = (−1)^r ⋆⁻¹ d ⋆` on each grade-r part.
pub fn codifferential(g: &Geometry, x: &Multivector) -> Multivector {
    let tau = g.volume_element();
    let parts: Vec<Multivector> = x
        .grades()
        .into_iter()
        .filter(|&r| r > 0)
        .map(|r| {
            let inner = ext_d(g, &x.grade_project(r).hodge_star(tau)).hodge_inverse(tau);
            if r % 2 == 0 {
                inner
            } else {
                inner.neg()
            }
        })
        .collect();
    Multivector::sum(g.signature(), &parts)
}

pub fn hodge(g: &Geometry, x: &Multivector) -> Multivector {
    x.hodge_star(g.volume_element())
}

pub fn hodge_inv(g: &Geometry, x: &Multivector) -> Multivector {
    x.hodge_inverse(g.volume_element())
}

#[cfg(test)]
mod tests;
