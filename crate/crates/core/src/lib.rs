//! Spectra of PT-symmetric multidimensional anharmonic oscillators,
//! block-diagonalized by point-group symmetry.
//!
//! The crate provides exact ladder-operator algebra over truncated
//! harmonic-oscillator product bases, point groups with antiunitary
//! extensions and projection operators, a catalog of coupled-oscillator
//! Hamiltonians with one imaginary coupling `i·a`, dense complex
//! eigensolution with convergence control, exact characteristic polynomials
//! in the coupling, exact Rayleigh–Schrödinger perturbation series, and
//! exceptional-point location along the coupling axis.

pub mod error;
pub mod scalar;
pub mod matrix;
pub mod fock;
pub mod eigen;
pub mod pointgroup;
pub mod models;
pub mod solvable;
pub mod spectra;
pub mod charpoly;
pub mod perturb;
pub mod transitions;
pub mod report;

pub use error::{PtError, Result};
pub use scalar::{ExactScalar, RadReal, Rational, Scalar};

/// Concrete scalar aliases used throughout the numerical paths.
pub type C64 = num_complex::Complex64;
pub type MatExact = matrix::Mat<ExactScalar>;
pub type MatC64 = matrix::Mat<C64>;
