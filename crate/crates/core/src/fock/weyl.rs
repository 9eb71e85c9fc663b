use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::ladder::{creation_leakage, smeared_field_ops};
use super::{CloudFunction, FockBasis, FockVector, SparseOperator};
use crate::quad::gauss_legendre;
use crate::spectral::evolve;
use crate::{Error, Result};

/// Bases up to this size exponentiate by dense diagonalisation.
pub const DENSE_WEYL_LIMIT: usize = 512;

const KRYLOV_TOL: f64 = 1e-12;
const DUHAMEL_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeylMethod {
    Dense,
    Krylov,
}

impl fmt::Display for WeylMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeylMethod::Dense => "dense",
            WeylMethod::Krylov => "krylov",
        })
    }
}

#[derive(Debug, Clone)]
pub struct WeylAction {
    pub vector: FockVector,
    /// Bound on the distance between the truncated and the exact `W(g)ψ`.
    pub leakage: f64,
    pub method: WeylMethod,
}

/// `W(g) = exp(a*(g) − a(g))` on a truncated Fock space.
///
/// The generator is written as `−iH` with `H = i(a*(g) − a(g))` Hermitian.
/// The truncated exponential is exactly unitary on the basis; what it
/// misses are the creation steps across the caps. Since
/// `e^{A∞}ψ − e^{A}ψ = ∫₀¹ e^{(1−s)A∞} D e^{sA}ψ ds` with `D` the dropped
/// creation part, `∫₀¹ ‖D e^{sA}ψ‖ ds` bounds the error and is what
/// [`WeylAction::leakage`] reports.
#[derive(Debug, Clone)]
pub struct WeylOperator {
    coeffs: Vec<Complex64>,
    basis: FockBasis,
    generator: SparseOperator,
    dense: Option<(DVector<f64>, DMatrix<Complex64>)>,
}

pub fn weyl_operator(basis: &FockBasis, g: &CloudFunction) -> Result<WeylOperator> {
    WeylOperator::new(basis, g)
}

impl WeylOperator {
    pub fn new(basis: &FockBasis, g: &CloudFunction) -> Result<Self> {
        let (create, annihilate) = smeared_field_ops(basis, g)?;
        let i = Complex64::new(0.0, 1.0);
        let generator =
            SparseOperator::linear_combination(basis.len(), &[(i, &create), (-i, &annihilate)])?.into_hermitian()?;
        let dense = if basis.len() <= DENSE_WEYL_LIMIT {
            let eig = SymmetricEigen::new(generator.to_dense());
            Some((eig.eigenvalues, eig.eigenvectors))
        } else {
            None
        };
        Ok(Self {
            coeffs: g.ladder_coefficients(),
            basis: basis.clone(),
            generator,
            dense,
        })
    }

    pub fn method(&self) -> WeylMethod {
        if self.dense.is_some() {
            WeylMethod::Dense
        } else {
            WeylMethod::Krylov
        }
    }

    /// The Hermitian `H` with `W = e^{−iH}`.
    pub fn generator(&self) -> &SparseOperator {
        &self.generator
    }

    fn exp_s(&self, psi: &FockVector, s: f64) -> Result<FockVector> {
        match &self.dense {
            Some((values, vectors)) => {
                let mut c = vectors.adjoint() * DVector::from_column_slice(psi.amplitudes());
                for (ci, e) in c.iter_mut().zip(values.iter()) {
                    *ci *= Complex64::from_polar(1.0, -e * s);
                }
                Ok(FockVector::new((vectors * c).iter().copied().collect()))
            }
            None => Ok(evolve(&self.generator, psi, s, KRYLOV_TOL)?.vector),
        }
    }

    /// `W(g)ψ`, without the leakage estimate.
    pub fn apply(&self, psi: &FockVector) -> Result<FockVector> {
        self.exp_s(psi, 1.0)
    }

    /// `W(g)* ψ = W(−g) ψ`.
    pub fn apply_adjoint(&self, psi: &FockVector) -> Result<FockVector> {
        self.exp_s(psi, -1.0)
    }

    pub fn apply_reporting(&self, psi: &FockVector) -> Result<WeylAction> {
        let vector = self.apply(psi)?;
        let (nodes, weights) = gauss_legendre(DUHAMEL_NODES);
        let mut leakage = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            let s = 0.5 * (x + 1.0);
            let v = self.exp_s(psi, s)?;
            leakage += 0.5 * w * creation_leakage(&self.basis, &self.coeffs, &v);
        }
        Ok(WeylAction {
            vector,
            leakage,
            method: self.method(),
        })
    }

    /// Like [`Self::apply_reporting`], failing when the leakage exceeds `max_leak`.
    pub fn apply_within(&self, psi: &FockVector, max_leak: f64) -> Result<WeylAction> {
        let action = self.apply_reporting(psi)?;
        if action.leakage > max_leak {
            return Err(Error::Leakage {
                measured: action.leakage,
                bound: max_leak,
            });
        }
        Ok(action)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CocycleCheck {
    /// θ minimising ‖W(g)W(h)ψ − e^{iθ}W(g+h)ψ‖ over the probe states.
    pub phase: f64,
    /// Largest remaining residual over the probes.
    pub defect: f64,
    /// `−Im⟨g, h⟩`, the phase of the exact relation.
    pub expected_phase: f64,
}

/// Compares `W(g)W(h)` with `W(g+h)` on the vacuum and the one-photon states,
/// which sit far from the truncation edge.
pub fn weyl_cocycle_check(basis: &FockBasis, g: &CloudFunction, h: &CloudFunction) -> Result<CocycleCheck> {
    let wg = WeylOperator::new(basis, g)?;
    let wh = WeylOperator::new(basis, h)?;
    let wgh = WeylOperator::new(basis, &g.add(h)?)?;
    let probes: Vec<usize> = (0..basis.len()).filter(|&s| basis.total(s) <= 1).collect();
    let mut lhs = Vec::with_capacity(probes.len());
    let mut rhs = Vec::with_capacity(probes.len());
    let mut overlap = Complex64::new(0.0, 0.0);
    for &s in &probes {
        let psi = FockVector::basis_state(basis.len(), s);
        let u = wg.apply(&wh.apply(&psi)?)?;
        let v = wgh.apply(&psi)?;
        overlap += v.inner(&u);
        lhs.push(u);
        rhs.push(v);
    }
    let phase = overlap.arg();
    let rot = Complex64::from_polar(1.0, phase);
    let defect = lhs
        .iter()
        .zip(&rhs)
        .map(|(u, v)| u.distance(&v.scaled(rot)))
        .fold(0.0, f64::max);
    Ok(CocycleCheck {
        phase,
        defect,
        expected_phase: -g.inner(h)?.im,
    })
}
