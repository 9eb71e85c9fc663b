//! Fiber Hamiltonians of a non-relativistic charge coupled to massless
//! bosons at fixed total momentum `p`.
//!
//! Two couplings are provided. The scalar (Nelson) model is
//! `H(p) = (p − P_ph)²/2m + H_ph − e Φ` with
//! `Φ = Σ_i κ_i (b*_i + b_i)` and `κ_i = sqrt(w_i) ρ̃(k_i)/sqrt(2|k_i|)`;
//! the transversal model is `(p − P_ph − eA)²/2m + H_ph` with
//! `A = Σ_i κ_i ε_i (b*_i + b_i)`, optionally without the `e²A²` term.
//! With these signs the cloud of [`cloud_function`] is the one removed by
//! the dressing `W(f_p) · W(f_p)*`.

mod approx;
mod cloud;
mod dispersion;
mod dressed;
mod forms;
mod hamiltonian;
mod params;
mod scan;

pub use approx::{
    bdg_cloud_norm_sqr, bdg_fiber_vector, cfp_fiber_vector, consecutive_distances, ApproxKind, ApproxOptions,
    ApproxVector, ApproximatingVectors, DollardPhases,
};
pub use cloud::cloud_function;
pub use dispersion::{
    dispersion, ground_state, group_velocity, second_order_energy, velocity, DispersionTable, VelocityEstimate,
};
pub use dressed::{dressed_hamiltonian, DressedHamiltonian};
pub use hamiltonian::{fiber_hamiltonian, FiberModel, FiberOperator};
pub use params::{ChargeProfile, CouplingVariant, NelsonFiberParams};
pub use scan::{ir_scan, scan_row, IrScanRow, ScanOptions};
