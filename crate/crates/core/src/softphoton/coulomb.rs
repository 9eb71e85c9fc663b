//! Pairwise Coulomb phase of two asymptotic ray currents.
//!
//! Conventions: metric `(+,−,−,−)`, `D^D = ½(D_ret + D_adv) = δ(x²)/(4π)`
//! and `Φ = ½ ∫∫ g_ε(x) g_ε(y) D^D(x − y) j₁(x)·j₂(y)` with
//! `j(x) = ±q v ∫ dτ δ⁴(x − τv)` along the ray `τ > 0` (out) or `τ < 0`
//! (in). The light-cone delta fixes the second proper time to `r±τ` with
//! `r± = w ± √(w² − 1)`, `w = v₁·v₂`, leaving
//!
//! `Φ = (±q₁)(±q₂) w / (16π √(w² − 1)) · Σ± ∫ dτ/τ g(ετv₁) g(ετ r± v₂) R(τ) R(r±τ)`.
//!
//! `R(τ) = 1 − exp(−τ²/s²)` stands in for the smeared charge profile and
//! removes the coincidence singularity at the vertex. Rays of opposite
//! orientation never meet on the light cone and give no phase.

use std::f64::consts::PI;

use super::legs::ChargedLeg;
use crate::quad::{integrate, QuadOptions};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchingProfile {
    /// `g(x) = exp(−(x₀² + |x|²))`.
    Gaussian,
}

/// `g_ε(x) = g(εx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchingFunction {
    profile: SwitchingProfile,
    scale: f64,
}

impl SwitchingFunction {
    pub fn new(profile: SwitchingProfile, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::arg(format!("switching scale ε = {scale} outside (0, 1]")));
        }
        Ok(Self { profile, scale })
    }

    pub fn gaussian(scale: f64) -> Result<Self> {
        Self::new(SwitchingProfile::Gaussian, scale)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, x: [f64; 4]) -> f64 {
        let s2 = self.scale * self.scale;
        match self.profile {
            SwitchingProfile::Gaussian => (-s2 * x.iter().map(|c| c * c).sum::<f64>()).exp(),
        }
    }

    /// `g_ε(τv)`.
    fn along(&self, leg: &ChargedLeg, tau: f64) -> f64 {
        let v = leg.four_velocity();
        self.eval([tau * v[0], tau * v[1], tau * v[2], tau * v[3]])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CoulombPhaseOptions {
    /// Proper-time scale `s` of the vertex onset.
    pub onset: f64,
    pub quad: QuadOptions,
}

impl Default for CoulombPhaseOptions {
    fn default() -> Self {
        Self {
            onset: 0.1,
            quad: QuadOptions {
                abs_tol: 1e-13,
                rel_tol: 1e-10,
                max_subdivisions: 4000,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombPhase {
    pub value: f64,
    pub error: f64,
}

fn relative_rapidity(a: &ChargedLeg, b: &ChargedLeg) -> Result<(f64, f64)> {
    let w = a.dot(b);
    if w - 1.0 < 1e-12 {
        return Err(Error::domain("legs share a four-velocity; the Coulomb phase is undefined"));
    }
    Ok((w, ((w - 1.0) * (w + 1.0)).sqrt()))
}

fn same_orientation(a: &ChargedLeg, b: &ChargedLeg) -> bool {
    a.direction() == b.direction()
}

/// Coefficient of `ln(1/ε)` in the small-ε growth of [`coulomb_phase`].
pub fn coulomb_log_coefficient(a: &ChargedLeg, b: &ChargedLeg) -> Result<f64> {
    let (w, root) = relative_rapidity(a, b)?;
    if !same_orientation(a, b) {
        return Ok(0.0);
    }
    Ok(a.signed_charge() * b.signed_charge() * w / (8.0 * PI * root))
}

/// Coulomb phase of the pair `(a, b)` under the switching `g`.
pub fn coulomb_phase(
    a: &ChargedLeg,
    b: &ChargedLeg,
    g: &SwitchingFunction,
    opts: &CoulombPhaseOptions,
) -> Result<CoulombPhase> {
    let (w, root) = relative_rapidity(a, b)?;
    if !(opts.onset > 0.0 && opts.onset.is_finite()) {
        return Err(Error::arg("onset scale must be positive"));
    }
    let coupling = a.signed_charge() * b.signed_charge();
    if coupling == 0.0 || !same_orientation(a, b) {
        return Ok(CoulombPhase { value: 0.0, error: 0.0 });
    }
    let prefactor = coupling * w / (16.0 * PI * root);
    let roots = [w + root, w - root];
    let s2 = opts.onset * opts.onset;
    let onset = |tau: f64| -(-tau * tau / s2).exp_m1();
    // dτ/τ = du with τ = e^u; the onset makes the integrand O(τ²) at the
    // vertex and the switching cuts it off beyond τ ~ 1/ε
    let integrand = |u: f64| {
        let tau = u.exp();
        roots
            .iter()
            .map(|r| g.along(a, tau) * g.along(b, r * tau) * onset(tau) * onset(r * tau))
            .sum::<f64>()
    };
    let lo = (opts.onset * 1e-9 / roots[0].max(1.0)).ln();
    let hi = (8.0 / g.scale()).ln();
    let r = integrate(integrand, lo, hi, opts.quad)?;
    Ok(CoulombPhase {
        value: prefactor * r.value,
        error: prefactor.abs() * r.error,
    })
}
