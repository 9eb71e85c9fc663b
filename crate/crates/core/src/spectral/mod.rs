//! Sparse spectral kernels: Lanczos ground states and Krylov propagation.
//!
//! Every routine is single-threaded and deterministic; start vectors come
//! from a seeded ChaCha stream so identical inputs give identical bits.

mod dense;
mod lanczos;
mod propagate;
mod tridiag;

pub use dense::{dense_evolve, dense_lowest, dense_spectrum};
pub use lanczos::{lowest_eigenpair, lowest_eigenpair_with, LanczosOptions};
pub use propagate::{evolve, evolve_with, exp_antihermitian_apply, KrylovOptions};

use num_complex::Complex64;

use crate::fock::{FockVector, SparseOperator};

/// Matrix-free view of an operator on a truncated Fock space.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    /// `y = A x`.
    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]);
    fn is_hermitian(&self) -> bool;
    /// Upper bound on the spectral radius.
    fn norm_bound(&self) -> f64;

    fn apply_vector(&self, v: &FockVector) -> FockVector {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim()];
        self.apply_into(v.amplitudes(), &mut y);
        FockVector::new(y)
    }

    /// ⟨ψ, A ψ⟩.
    fn expectation_value(&self, v: &FockVector) -> Complex64 {
        v.inner(&self.apply_vector(v))
    }
}

impl LinearOperator for SparseOperator {
    fn dim(&self) -> usize {
        SparseOperator::dim(self)
    }

    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        SparseOperator::apply_into(self, x, y)
    }

    fn is_hermitian(&self) -> bool {
        SparseOperator::is_hermitian(self)
    }

    fn norm_bound(&self) -> f64 {
        SparseOperator::norm_bound(self)
    }
}

#[derive(Debug, Clone)]
pub struct EigResult {
    pub eigenvalue: f64,
    pub eigenvector: FockVector,
    /// ‖Hψ − Eψ‖ of the returned pair.
    pub residual: f64,
    /// Number of operator applications.
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct PropagationResult {
    pub vector: FockVector,
    /// Accumulated a-posteriori Krylov error, relative to ‖ψ‖.
    pub error_estimate: f64,
    pub steps: usize,
}
