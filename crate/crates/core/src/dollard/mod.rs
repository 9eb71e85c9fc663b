//! One-dimensional long-range scattering: ballistic asymptotic phases, the
//! Dollard modifier and Møller-type convergence diagnostics on a split-step
//! grid.

mod moller;
mod potential;
mod propagate;
mod wave;

pub use moller::{coulomb_log_slope_fit, moller_residual, moller_vector, MollerDiagnostics, MollerOptions};
pub use potential::{asymptotic_phase, asymptotic_phase_quadrature, LongRangePotential, PotentialForm};
pub use propagate::{dollard_modifier_apply, free_evolve, propagate_full, PropagationOptions, ABSORBER_FRACTION};
pub use wave::{Grid1d, GridWavefunction};
