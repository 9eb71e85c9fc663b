use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Uniform periodic grid `x_j = x_min + j dx`, `j < n`.
#[derive(Clone)]
pub struct Grid1d {
    x_min: f64,
    dx: f64,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Grid1d {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid1d")
            .field("x_min", &self.x_min)
            .field("dx", &self.dx)
            .field("n", &self.n)
            .finish()
    }
}

impl PartialEq for Grid1d {
    fn eq(&self, other: &Self) -> bool {
        self.x_min == other.x_min && self.dx == other.dx && self.n == other.n
    }
}

impl Grid1d {
    pub fn new(x_min: f64, x_max: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0 && x_max > x_min && x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::arg("grid needs x_min < x_max and dx > 0"));
        }
        let n = ((x_max - x_min) / dx).round() as usize;
        if n < 16 {
            return Err(Error::arg("grid needs at least 16 points"));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            x_min,
            dx,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn extent(&self) -> f64 {
        self.dx * self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + self.dx * j as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Conjugate momenta in FFT order.
    pub fn momenta(&self) -> Vec<f64> {
        let dk = 2.0 * PI / self.extent();
        (0..self.n)
            .map(|j| {
                let m = if j < self.n.div_ceil(2) { j as f64 } else { j as f64 - self.n as f64 };
                m * dk
            })
            .collect()
    }

    /// Largest representable momentum, `π/dx`.
    pub fn max_momentum(&self) -> f64 {
        PI / self.dx
    }

    /// Unitary transform to momentum amplitudes; the phase of `x_min` is
    /// dropped, which every operation here treats consistently.
    pub fn to_momentum(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut buf = amps.to_vec();
        self.forward.process(&mut buf);
        let s = 1.0 / (self.n as f64).sqrt();
        buf.iter_mut().for_each(|a| *a *= s);
        buf
    }

    pub fn from_momentum(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut buf = amps.to_vec();
        self.inverse.process(&mut buf);
        let s = 1.0 / (self.n as f64).sqrt();
        buf.iter_mut().for_each(|a| *a *= s);
        buf
    }

    pub(crate) fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    pub(crate) fn inverse_in_place(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }
}

/// Wavefunction on a [`Grid1d`] normalised as `Σ_j |ψ_j|² = 1`, with the
/// probability removed by absorbing boundaries so far.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    pub grid: Grid1d,
    pub amplitudes: Vec<Complex64>,
    pub absorbed: f64,
}

impl GridWavefunction {
    pub fn new(grid: Grid1d, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::arg("amplitude count does not match the grid"));
        }
        let psi = Self {
            grid,
            amplitudes,
            absorbed: 0.0,
        };
        let n = psi.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::arg("wavefunction must have a positive finite norm"));
        }
        Ok(psi.scaled(1.0 / n))
    }

    /// Gaussian packet with position spread `width`, centred at `center`
    /// with mean momentum `momentum`.
    pub fn gaussian(grid: Grid1d, center: f64, width: f64, momentum: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::arg("packet width must be positive"));
        }
        let amps = (0..grid.len())
            .map(|j| {
                let y = grid.x(j) - center;
                Complex64::from_polar((-y * y / (4.0 * width * width)).exp(), momentum * y)
            })
            .collect();
        Self::new(grid, amps)
    }

    /// Odd extension `g(x) − g(−x)` of a Gaussian: the reduced radial
    /// function `u(r)` of an s-wave, vanishing at the origin.
    pub fn s_wave(grid: Grid1d, center: f64, width: f64, momentum: f64) -> Result<Self> {
        let g = |x: f64| {
            let y = x - center;
            Complex64::from_polar((-y * y / (4.0 * width * width)).exp(), momentum * y)
        };
        let amps = (0..grid.len()).map(|j| g(grid.x(j)) - g(-grid.x(j))).collect();
        Self::new(grid, amps)
    }

    fn scaled(mut self, s: f64) -> Self {
        self.amplitudes.iter_mut().for_each(|a| *a *= s);
        self
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self, other⟩.
    pub fn inner(&self, other: &GridWavefunction) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn distance(&self, other: &GridWavefunction) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn momentum_amplitudes(&self) -> Vec<Complex64> {
        self.grid.to_momentum(&self.amplitudes)
    }

    pub fn with_momentum_amplitudes(&self, amps: &[Complex64]) -> Self {
        Self {
            grid: self.grid.clone(),
            amplitudes: self.grid.from_momentum(amps),
            absorbed: self.absorbed,
        }
    }

    /// `⟨|p|⟩` of the momentum distribution.
    pub fn mean_abs_momentum(&self) -> f64 {
        self.moment(|p| p.abs())
    }

    /// `⟨1/|p|⟩`, omitting the `p = 0` bin.
    pub fn mean_inverse_momentum(&self) -> f64 {
        self.moment(|p| if p == 0.0 { 0.0 } else { 1.0 / p.abs() })
    }

    fn moment(&self, f: impl Fn(f64) -> f64) -> f64 {
        let probs = self.momentum_amplitudes();
        let total: f64 = probs.iter().map(|a| a.norm_sqr()).sum();
        self.grid
            .momenta()
            .iter()
            .zip(&probs)
            .map(|(&p, a)| f(p) * a.norm_sqr())
            .sum::<f64>()
            / total
    }
}
