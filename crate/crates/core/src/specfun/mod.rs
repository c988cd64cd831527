//! Special functions and quadrature.
//!
//! Classical Jacobi polynomials `P_n^(α,β)` through the ascending three-term
//! recurrence, their derivatives, the X₁ exceptional Jacobi family built on
//! top of them, and an adaptive Gauss–Kronrod integrator used for
//! orthogonality checks and wavefunction normalization.

mod jacobi;
mod quad;

pub use jacobi::{jacobi, jacobi_deriv, x1_jacobi, JacobiIndex, Tagged};
pub use quad::{integrate, integrate_with_budget, Quadrature, DEFAULT_PANEL_BUDGET};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("invalid Jacobi index: n = {n}, alpha = {alpha}, beta = {beta} (need alpha > -1, beta > -1)")]
    InvalidIndex { n: usize, alpha: f64, beta: f64 },
    #[error("X1 Jacobi polynomials need n >= 1 and alpha != beta (got n = {n}, alpha = {alpha}, beta = {beta})")]
    InvalidExceptionalIndex { n: usize, alpha: f64, beta: f64 },
    #[error("invalid integration interval [{a}, {b}] or tolerance {tol}")]
    InvalidInterval { a: f64, b: f64, tol: f64 },
    #[error("integration did not converge after {panels} panels: estimate {partial} +/- {error_estimate}")]
    IntegrationFailure {
        partial: f64,
        error_estimate: f64,
        panels: usize,
    },
}
