//! Dense reference solvers, practical up to a few thousand states.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{EigResult, PropagationResult};
use crate::fock::{FockVector, SparseOperator};
use crate::{Error, Result};

fn check(h: &SparseOperator) -> Result<()> {
    if !h.is_hermitian() {
        return Err(Error::arg("dense solver needs a Hermitian operator"));
    }
    Ok(())
}

/// Full spectrum of a Hermitian operator, eigenvalues ascending.
pub fn dense_spectrum(h: &SparseOperator) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    check(h)?;
    let eig = SymmetricEigen::new(h.to_dense());
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.dim(), h.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

pub fn dense_lowest(h: &SparseOperator) -> Result<EigResult> {
    let (values, vectors) = dense_spectrum(h)?;
    let v = FockVector::new(vectors.column(0).iter().copied().collect());
    let hv = h.apply(&v);
    let residual = hv.sub(&v.scaled(Complex64::new(values[0], 0.0))).norm();
    Ok(EigResult {
        eigenvalue: values[0],
        eigenvector: v,
        residual,
        iterations: 0,
    })
}

/// `e^{−itH} ψ` by diagonalisation.
pub fn dense_evolve(h: &SparseOperator, psi: &FockVector, t: f64) -> Result<PropagationResult> {
    let (values, vectors) = dense_spectrum(h)?;
    let x = DVector::from_column_slice(psi.amplitudes());
    let mut c = vectors.adjoint() * x;
    for (ci, e) in c.iter_mut().zip(&values) {
        *ci *= Complex64::from_polar(1.0, -e * t);
    }
    let y = vectors * c;
    Ok(PropagationResult {
        vector: FockVector::new(y.iter().copied().collect()),
        error_estimate: 0.0,
        steps: 1,
    })
}
