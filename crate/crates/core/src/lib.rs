//! Numerical laboratory for infrared phenomena of charged particles coupled to
//! massless bosons.
//!
//! The crate is organised bottom-up:
//!
//! * [`fock`] – truncated bosonic Fock spaces over a finite photon mode grid,
//!   ladder and field operators, Weyl operators and coherent states.
//! * [`spectral`] – Lanczos ground states and Krylov propagation for the
//!   sparse operators built on a [`fock::FockBasis`].
//! * [`nrqed`] – fiber Hamiltonians of non-relativistic QED / Nelson-type
//!   models, dispersion relations, dressing clouds, infrared-cutoff scans and
//!   approximating vectors of the physical electron.
//! * [`dollard`] – one-dimensional long-range scattering with the Dollard
//!   modifier.
//! * [`softphoton`] – classical soft currents, exclusive/inclusive cross
//!   sections, the Coulomb phase with adiabatic switching and the resummed
//!   propagator exponent.
//!
//! [`exec`] provides the ordered task executor used for parameter scans; it is
//! backed by rayon when the `parallel` feature is enabled.

// `!(x > 0.0)` is how NaN gets rejected along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dollard;
pub mod error;
pub mod exec;
pub mod fit;
pub mod fock;
pub mod nrqed;
pub mod quad;
pub mod softphoton;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Three-component real vector; one-dimensional models use the first slot.
pub type Vec3 = [f64; 3];

pub(crate) fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}
