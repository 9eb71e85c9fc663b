use crate::quad::{integrate, QuadOptions};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialForm {
    /// Soft-core Coulomb `1/sqrt(r² + r0²)` for the s-wave radial problem.
    Coulomb3dRadial,
    /// `1/(r0 + |x|)` on the line.
    RegularizedCoulomb1d,
    /// `1/(r0 + |x|)^α`.
    PowerLaw { exponent: f64 },
}

/// `V(x) = e · shape(x)`: bounded at the origin, decaying like `|x|^{-α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongRangePotential {
    pub form: PotentialForm,
    pub strength: f64,
    pub regulator: f64,
}

impl LongRangePotential {
    pub fn new(form: PotentialForm, strength: f64, regulator: f64) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::arg("potential strength must be finite"));
        }
        if !(regulator > 0.0 && regulator.is_finite()) {
            return Err(Error::arg("regulator r0 must be positive"));
        }
        if let PotentialForm::PowerLaw { exponent } = form {
            if !(exponent > 0.0 && exponent.is_finite()) {
                return Err(Error::arg("power-law exponent must be positive"));
            }
        }
        Ok(Self {
            form,
            strength,
            regulator,
        })
    }

    pub fn regularized_coulomb(strength: f64, regulator: f64) -> Result<Self> {
        Self::new(PotentialForm::RegularizedCoulomb1d, strength, regulator)
    }

    pub fn power_law(strength: f64, exponent: f64, regulator: f64) -> Result<Self> {
        Self::new(PotentialForm::PowerLaw { exponent }, strength, regulator)
    }

    /// Decay exponent α.
    pub fn exponent(&self) -> f64 {
        match self.form {
            PotentialForm::PowerLaw { exponent } => exponent,
            _ => 1.0,
        }
    }

    /// α ≤ 1: the Dollard phase diverges.
    pub fn is_long_range(&self) -> bool {
        self.exponent() <= 1.0
    }

    pub fn value(&self, x: f64) -> f64 {
        let r0 = self.regulator;
        let r = x.abs();
        self.strength
            * match self.form {
                PotentialForm::Coulomb3dRadial => 1.0 / (r * r + r0 * r0).sqrt(),
                PotentialForm::RegularizedCoulomb1d => 1.0 / (r0 + r),
                PotentialForm::PowerLaw { exponent } => (r0 + r).powf(-exponent),
            }
    }

    /// `∫₀ᵗ V(sτ) dτ` for speed `s ≥ 0`, in closed form; odd in `t`.
    pub(crate) fn ballistic_integral(&self, s: f64, t: f64) -> f64 {
        if t < 0.0 {
            return -self.ballistic_integral(s, -t);
        }
        let r0 = self.regulator;
        if s == 0.0 {
            return self.value(0.0) * t;
        }
        let x = s * t;
        self.strength / s
            * match self.form {
                PotentialForm::Coulomb3dRadial => (x / r0).asinh(),
                PotentialForm::RegularizedCoulomb1d => (x / r0).ln_1p(),
                PotentialForm::PowerLaw { exponent: 1.0 } => (x / r0).ln_1p(),
                PotentialForm::PowerLaw { exponent } => {
                    ((r0 + x).powf(1.0 - exponent) - r0.powf(1.0 - exponent)) / (1.0 - exponent)
                }
            }
    }
}

/// Phase `φ_D(p, t) = ∫₀ᵗ V(pτ/m) dτ` accumulated along the free ballistic
/// trajectory (the coupling sits in [`LongRangePotential::strength`]).
///
/// The closed forms are `(m/|p|) asinh(|p|t/(m r0))` for the soft-core
/// radial Coulomb potential and `(m/|p|) log(1 + |p|t/(m r0))` for the
/// regularized line Coulomb potential, times the strength.
pub fn asymptotic_phase(v: &LongRangePotential, p: f64, mass: f64, t: f64) -> Result<f64> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::domain("the ballistic trajectory is degenerate at p = 0"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::arg("time must be finite and non-negative"));
    }
    if !(mass > 0.0) {
        return Err(Error::arg("mass must be positive"));
    }
    Ok(v.ballistic_integral(p.abs() / mass, t))
}

/// Same integral by adaptive quadrature; kept as an independent check.
pub fn asymptotic_phase_quadrature(v: &LongRangePotential, p: f64, mass: f64, t: f64) -> Result<f64> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::domain("the ballistic trajectory is degenerate at p = 0"));
    }
    let s = p.abs() / mass;
    let opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_subdivisions: 5000,
    };
    Ok(integrate(|tau| v.value(s * tau), 0.0, t, opts)?.value)
}
