use crate::fock::GridSpec;
use crate::{Error, Result};

/// Fourier-space charge density ρ̃(|k|) of the massive particle.
#[derive(Debug, Clone, PartialEq)]
pub enum ChargeProfile {
    /// `ρ0 (1 − x²)²` with `x = |k|/cutoff`; charged, ρ̃(0) = ρ0.
    Electron { rho0: f64, cutoff: f64 },
    /// `ρ0 x (1 − x²)²`; neutral, ρ̃(0) = 0.
    Atom { rho0: f64, cutoff: f64 },
    /// Constant ρ0 at every grid momentum; charged.
    Flat { rho0: f64 },
}

impl ChargeProfile {
    pub fn value(&self, k: f64) -> f64 {
        match *self {
            ChargeProfile::Electron { rho0, cutoff } => {
                let x = k / cutoff;
                if x >= 1.0 {
                    0.0
                } else {
                    rho0 * (1.0 - x * x).powi(2)
                }
            }
            ChargeProfile::Atom { rho0, cutoff } => {
                let x = k / cutoff;
                if x >= 1.0 {
                    0.0
                } else {
                    rho0 * x * (1.0 - x * x).powi(2)
                }
            }
            ChargeProfile::Flat { rho0 } => rho0,
        }
    }

    /// Neutral particles have ρ̃(0) = 0.
    pub fn is_atom(&self) -> bool {
        matches!(self, ChargeProfile::Atom { .. })
    }

    fn validate(&self, uv_cutoff: f64) -> Result<()> {
        let (rho0, cutoff) = match *self {
            ChargeProfile::Electron { rho0, cutoff } | ChargeProfile::Atom { rho0, cutoff } => (rho0, Some(cutoff)),
            ChargeProfile::Flat { rho0 } => (rho0, None),
        };
        if !rho0.is_finite() {
            return Err(Error::arg("profile amplitude must be finite"));
        }
        if let Some(c) = cutoff {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::arg("profile cutoff must be positive"));
            }
            if uv_cutoff > c * (1.0 + 1e-12) {
                return Err(Error::arg(format!(
                    "grid UV cutoff {uv_cutoff} exceeds the profile support {c}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingVariant {
    /// Nelson-type coupling linear in a scalar field.
    Scalar,
    /// Minimal coupling to the transversal vector potential; the `e²A²` term
    /// is kept when `a_squared` is set.
    Transversal { a_squared: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelsonFiberParams {
    pub mass: f64,
    pub coupling: f64,
    pub profile: ChargeProfile,
    pub variant: CouplingVariant,
    pub grid: GridSpec,
    pub max_total: usize,
    pub max_per_mode: usize,
}

impl NelsonFiberParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::arg("mass must be positive"));
        }
        if !self.coupling.is_finite() {
            return Err(Error::arg("coupling must be finite"));
        }
        self.profile.validate(self.grid.uv_cutoff)?;
        if let CouplingVariant::Transversal { .. } = self.variant {
            if !self.grid.polarized || self.grid.dimension != 3 {
                return Err(Error::arg("the transversal variant needs a polarized three-dimensional grid"));
            }
        }
        Ok(())
    }

    pub fn with_ir_cutoff(&self, ir_cutoff: f64) -> Self {
        Self {
            grid: self.grid.with_ir_cutoff(ir_cutoff),
            ..self.clone()
        }
    }

    pub fn with_coupling(&self, coupling: f64) -> Self {
        Self {
            coupling,
            ..self.clone()
        }
    }
}
