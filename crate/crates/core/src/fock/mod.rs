//! Truncated bosonic Fock space over a finite photon mode grid.

mod basis;
mod cloud;
mod grid;
mod ladder;
mod operator;
pub(crate) mod vector;
mod weyl;

pub use basis::{count_states, FockBasis, DEFAULT_BASIS_LIMIT};
pub use cloud::CloudFunction;
pub use grid::{radial_cells, radial_node, transverse_frame, DirectionSet, GridSpec, Mode, ModeGrid};
pub use ladder::{
    annihilation_op, creation_combination, creation_leakage, creation_op, free_photon_hamiltonian, number_operator,
    photon_momentum, photon_number_distribution, smeared_field_ops,
};
pub use operator::{SparseOperator, HERMITIAN_TOL};
pub use vector::FockVector;
pub use weyl::{weyl_cocycle_check, weyl_operator, CocycleCheck, WeylAction, WeylMethod, WeylOperator, DENSE_WEYL_LIMIT};
