//! Classical soft-photon content of charged scattering processes.
//!
//! Every external leg contributes the ray current `±q v^μ`, `+` for outgoing
//! and `−` for incoming legs. The transversal soft current
//! `j(k̂) = Σ ±q v_⊥/(v·k)`, `k = (1, k̂)`, defines the coherent cloud
//! `j(k̂)/(√2 |k|^{3/2})` whose norm over a shell `λ < |k| < Λ` grows like
//! `a · ln(Λ/λ)`. Exclusive and inclusive cross sections, the vacuum overlap
//! of the asymptotic Weyl operator and the pairwise Coulomb phase are built
//! from these currents.

mod cloud;
mod coulomb;
mod legs;
mod propagator;

pub use cloud::{
    exclusive_cross_section, fock_vacuum_overlap, inclusive_partial_sum, soft_cloud, soft_exponent,
    weyl_vacuum_overlap, InclusiveSeries, SoftExponent, SoftQuadrature, INCLUSIVE_TAIL,
};
pub use coulomb::{
    coulomb_log_coefficient, coulomb_phase, CoulombPhase, CoulombPhaseOptions, SwitchingFunction, SwitchingProfile,
};
pub use legs::{soft_current, ChargedLeg, LegDirection, ProcessCurrents};
pub use propagator::{propagator_exponent, resummed_propagator_scaling};
