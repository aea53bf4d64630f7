//! Symbolic calculus of differential forms in the Clifford bundle of a
//! Riemann-Cartan chart.
//!
//! Everything lives in an orthonormal coframe `θ^a = q^a_μ dx^μ`; scalar
//! coefficients are [`symexpr::Expr`] trees and equality is decided by
//! deterministic sampling over the chart's domain.

// Tensor code indexes several arrays with the same frame index.
#![allow(clippy::needless_range_loop)]

pub mod calculus;
pub mod connection;
pub mod manifold;
pub mod multivector;
pub mod report;
pub mod scenarios;
pub mod symexpr;
