//! Entanglement dynamics of non-Gaussian (Fock, NOON) and Gaussian (squeezed)
//! light propagating through two evanescently coupled, lossy waveguides.
//!
//! Time is measured throughout in the dimensionless coupling phase `tau = J t`
//! and loss as the ratio `gamma / J`.
//!
//! * [`fock`] - truncated two-mode Fock space, ladder operators, the coupler
//!   Hamiltonian and exact unitary propagation.
//! * [`analytic`] - closed-form evolutions of `|1,1>`, `|2,0>`, NOON inputs and
//!   the lossy `|1,1>` density matrix.
//! * [`negativity`] - logarithmic negativity via the partial transpose, plus the
//!   closed forms for pure two-mode number states.
//! * [`gaussian`] - covariance matrices of the squeezed-light scenarios,
//!   symplectic spectra and Gaussian logarithmic negativity.
//! * [`lindblad`] - brute-force master-equation integrator used as an oracle.
//! * [`scenario`] - named scenarios, material presets, unit helpers, sweeps and
//!   CSV output driving the `wgent` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod lindblad;
pub mod negativity;
pub mod scenario;

pub use error::{Error, Result};

/// Complex scalar used for all amplitudes and operator matrices.
pub type C64 = num_complex::Complex64;
