//! Ro-vibrational spectra of diatomic molecules in the shifted Deng-Fan
//! potential.
//!
//! The crate evaluates closed-form bound-state energies and the
//! Hellmann-Feynman expectation values `<r^-2>`, `<V>`, `<T>` and `<p^2>`,
//! and carries three independent ways of checking them:
//!
//! * [`hft::hft_fd_check`] differentiates the energy formula numerically
//!   with respect to the well depth, the reduced mass and the (continuous)
//!   rotational quantum number;
//! * [`quantize`] evaluates the momentum action integrals by quadrature and
//!   checks the proper quantization rule and the ground-state Riccati ansatz;
//! * [`oracle`] solves the radial Schrödinger equation by finite differences.
//!
//! Units throughout: energies in eV, lengths in Å, masses in amu.

// `!(x > 0.0)` is used deliberately so NaN falls into the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fixtures;
pub mod hft;
pub mod molecule;
pub mod oracle;
pub mod potential;
pub mod quadrature;
pub mod quantize;
pub mod spectrum;
pub mod units;

pub use error::{Error, Result};
pub use molecule::{builtin_registry, MoleculeParams, Registry};
pub use potential::CentrifugalMode;
pub use spectrum::{QuantumState, StateReport};
