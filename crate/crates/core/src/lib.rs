//! Exact and numerical spectra of the massless Dirac operator on a sphere
//! threaded by hyperbolic magnetic fields.
//!
//! The crate is organised bottom-up: [`specfun`] and [`geometry`] are pure
//! numerics, [`gauge`] builds vector-potential profiles and the effective
//! potentials they induce, [`spectra`] evaluates closed-form energies and
//! eigenfunctions, [`oracle`] is an independent finite-difference
//! Sturm–Liouville solver that checks all of the above, and [`cli`] wires the
//! lot to files.

pub mod cli;
pub mod gauge;
pub mod geometry;
mod hyp;
pub mod oracle;
pub mod spectra;
pub mod specfun;
