use num_complex::Complex64;

use crate::{Error, Result};

/// Amplitudes of a state in a [`super::FockBasis`], one per basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// y += alpha * x
pub(crate) fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

impl FockVector {
    pub fn new(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); dim])
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amps[index] = Complex64::new(1.0, 0.0);
        v
    }

    /// The Fock vacuum, always state 0 of a basis.
    pub fn vacuum(dim: usize) -> Self {
        Self::basis_state(dim, 0)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// ⟨self, other⟩, antilinear in `self`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        dot(&self.amps, &other.amps)
    }

    pub fn normalized(&self) -> Result<FockVector> {
        let n = self.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::arg("cannot normalize a zero or non-finite vector"));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }

    pub fn scaled(&self, s: Complex64) -> FockVector {
        FockVector::new(self.amps.iter().map(|a| a * s).collect())
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        FockVector::new(self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        FockVector::new(self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect())
    }

    pub fn distance(&self, other: &FockVector) -> f64 {
        self.sub(other).norm()
    }

    /// `sqrt(2 − 2|⟨a, b⟩|)`: the distance between the rays of two unit
    /// vectors, blind to any global phase.
    ///
    /// Evaluated as `min_θ ‖a − e^{iθ} b‖` to avoid the cancellation in the
    /// closed form when the rays nearly coincide.
    pub fn phase_quotient_distance(&self, other: &FockVector) -> f64 {
        let overlap = other.inner(self);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - phase * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_quotient_ignores_global_phase() {
        let v = FockVector::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let w = v.scaled(Complex64::from_polar(1.0, 1.234));
        assert!(v.phase_quotient_distance(&w) < 1e-15);
        assert!(v.distance(&w) > 0.5);
    }

    #[test]
    fn normalization() {
        let v = FockVector::new(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]);
        assert!(v.normalized().unwrap().is_normalized());
        assert!(FockVector::zeros(3).normalized().is_err());
    }
}
