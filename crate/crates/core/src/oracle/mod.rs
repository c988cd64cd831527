//! Finite-difference Sturm–Liouville oracle.
//!
//! Discretizes `𝔥 = -(cosh²w φ')' + V φ` with the flux-form three-point
//! scheme on a uniform Dirichlet grid, solves for the lowest eigenpairs,
//! builds the discrete first-order factorization whose two compositions are
//! isospectral by construction, and assembles the verification report that
//! scores each closed-form result against these numbers.

mod checks;
mod eigen;
mod factor;
mod grid;
mod matrix;
mod report;

pub use checks::{
    box_convergence, derive_partner_component, oracle_spectrum, truncation_stability, verify_eigenpair,
    BoxConvergence, PartnerConvention, TruncationStability,
};
pub use eigen::{dense_eigenvalues, eig_lowest, eigenvalues_lowest, EigenPair};
pub use factor::{
    compare_nonzero_spectra, compose_factorized, convention_residuals, first_order_operator, probe_residual,
    FactorConvention, FirstOrderOperator, Isospectrality, Stencil, PROBE_CENTERS, ZERO_FLOOR_RELATIVE,
};
pub use grid::Grid;
pub use matrix::{build_sl_matrix, curvature_coefficient, sl_matrix_for_potential, SLMatrix};
pub use report::{
    consistency_report, Claim, ClaimGrid, Fault, ModelSpec, ReportConfig, Verdict, VerificationReport,
};


use thiserror::Error;

use crate::gauge::GaugeError;
use crate::spectra::SpectraError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid grid: L = {l}, N = {n} (need L > 0 and N >= 3)")]
    InvalidGrid { l: f64, n: usize },
    #[error("singular potential at w = {at}")]
    SingularPotential { at: f64 },
    #[error("kinetic coefficient must be positive, got {value} at w = {at}")]
    NonPositiveCoefficient { at: f64, value: f64 },
    #[error("non-finite wavefunction sample at w = {at}")]
    NonFiniteSample { at: f64 },
    #[error("requested {count} eigenvalues of a matrix of order {order}")]
    TooManyEigenvalues { count: usize, order: usize },
    #[error("eigensolver failed to converge")]
    EigenFailure,
    #[error("E = 0 has no partner component")]
    ZeroMode,
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}
