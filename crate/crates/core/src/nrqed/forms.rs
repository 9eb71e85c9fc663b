use num_complex::Complex64;

use crate::fock::{creation_combination, FockBasis, SparseOperator};
use crate::Result;

/// Hermitian operator `Σ c_i b*_i b_i + Σ (u_i b*_i + ū_i b_i) + c0`.
///
/// Every building block of the fiber Hamiltonians has this shape, which is
/// closed under the Bogolubov substitution `b_i → b_i − β_i`.
#[derive(Debug, Clone)]
pub(crate) struct LadderForm {
    pub number: Vec<f64>,
    pub field: Vec<Complex64>,
    pub constant: f64,
}

impl LadderForm {
    pub fn number(weights: Vec<f64>, constant: f64) -> Self {
        let n = weights.len();
        Self {
            number: weights,
            field: vec![Complex64::new(0.0, 0.0); n],
            constant,
        }
    }

    pub fn field(coeffs: Vec<Complex64>) -> Self {
        let n = coeffs.len();
        Self {
            number: vec![0.0; n],
            field: coeffs,
            constant: 0.0,
        }
    }

    /// `self + s · other`.
    pub fn plus(&self, s: f64, other: &LadderForm) -> Self {
        Self {
            number: self.number.iter().zip(&other.number).map(|(a, b)| a + s * b).collect(),
            field: self.field.iter().zip(&other.field).map(|(a, b)| a + s * b).collect(),
            constant: self.constant + s * other.constant,
        }
    }

    /// The form after `b_i → b_i − β_i`.
    pub fn shifted(&self, beta: &[Complex64]) -> Self {
        let mut out = self.clone();
        for (i, &b) in beta.iter().enumerate().take(self.number.len()) {
            let (c, u) = (self.number[i], self.field[i]);
            out.field[i] -= c * b;
            out.constant += c * b.norm_sqr() - 2.0 * (u * b.conj()).re;
        }
        out
    }

    pub fn to_sparse(&self, basis: &FockBasis) -> Result<SparseOperator> {
        let diag: Vec<f64> = basis
            .states()
            .map(|occ| self.constant + occ.iter().zip(&self.number).map(|(&n, &c)| n as f64 * c).sum::<f64>())
            .collect();
        let one = Complex64::new(1.0, 0.0);
        let d = SparseOperator::diagonal(&diag);
        if self.field.iter().all(|u| u.norm() == 0.0) {
            return Ok(d);
        }
        let up = creation_combination(basis, &self.field)?;
        let down = up.adjoint();
        SparseOperator::linear_combination(basis.len(), &[(one, &d), (one, &up), (one, &down)])?.into_hermitian()
    }
}
