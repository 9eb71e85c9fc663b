use std::sync::Arc;

use num_complex::Complex64;

use super::{Mode, ModeGrid};
use crate::{Error, Result};

/// One-photon amplitude `g(k_i)` sampled on the modes of a grid.
///
/// Integrals over momentum space become weighted sums, so
/// `‖g‖² = Σ_i w_i |g(k_i)|²` and `⟨g, h⟩ = Σ_i w_i conj(g_i) h_i`.
#[derive(Debug, Clone)]
pub struct CloudFunction {
    grid: Arc<ModeGrid>,
    amplitudes: Vec<Complex64>,
}

impl CloudFunction {
    pub fn new(grid: Arc<ModeGrid>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::arg(format!(
                "cloud has {} amplitudes for {} modes",
                amplitudes.len(),
                grid.len()
            )));
        }
        if amplitudes.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::arg("cloud amplitudes must be finite"));
        }
        Ok(Self { grid, amplitudes })
    }

    pub fn zero(grid: Arc<ModeGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            amplitudes: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(grid: Arc<ModeGrid>, f: impl Fn(&Mode) -> Complex64) -> Result<Self> {
        let amplitudes = grid.modes().iter().map(f).collect();
        Self::new(grid, amplitudes)
    }

    pub fn grid(&self) -> &Arc<ModeGrid> {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn same_grid(&self, grid: &ModeGrid) -> bool {
        self.grid.fingerprint() == grid.fingerprint()
    }

    fn check_grid(&self, other: &CloudFunction) -> Result<()> {
        if self.grid.fingerprint() != other.grid.fingerprint() {
            return Err(Error::arg("cloud functions live on different grids"));
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.grid
            .modes()
            .iter()
            .zip(&self.amplitudes)
            .map(|(m, a)| m.weight * a.norm_sqr())
            .sum()
    }

    /// ‖g‖² restricted to modes with `lo < |k| <= hi`.
    pub fn shell_norm_sqr(&self, lo: f64, hi: f64) -> f64 {
        self.grid
            .modes()
            .iter()
            .zip(&self.amplitudes)
            .filter(|(m, _)| m.energy() > lo && m.energy() <= hi)
            .map(|(m, a)| m.weight * a.norm_sqr())
            .sum()
    }

    pub fn inner(&self, other: &CloudFunction) -> Result<Complex64> {
        self.check_grid(other)?;
        Ok(self
            .grid
            .modes()
            .iter()
            .zip(self.amplitudes.iter().zip(&other.amplitudes))
            .map(|(m, (a, b))| m.weight * a.conj() * b)
            .sum())
    }

    /// Coefficients of the discrete ladder operators, `sqrt(w_i) g(k_i)`.
    pub fn ladder_coefficients(&self) -> Vec<Complex64> {
        self.grid
            .modes()
            .iter()
            .zip(&self.amplitudes)
            .map(|(m, a)| a * m.weight.sqrt())
            .collect()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        self.map_modes(|_, a| a * s)
    }

    pub fn add(&self, other: &CloudFunction) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            amplitudes: self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn map_modes(&self, f: impl Fn(&Mode, Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            amplitudes: self
                .grid
                .modes()
                .iter()
                .zip(&self.amplitudes)
                .map(|(m, a)| f(m, *a))
                .collect(),
        }
    }

    /// `e^{-i|k|t} g(k)`.
    pub fn free_evolved(&self, t: f64) -> Self {
        self.map_modes(|m, a| a * Complex64::from_polar(1.0, -m.energy() * t))
    }
}
