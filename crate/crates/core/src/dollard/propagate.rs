use std::f64::consts::PI;

use num_complex::Complex64;

use super::{GridWavefunction, LongRangePotential};
use crate::{Error, Result};

/// Fraction of the grid, at each end, covered by the absorbing mask.
pub const ABSORBER_FRACTION: f64 = 0.1;

/// Mask `cos(πs/2)^{1/8}` with `s ∈ [0, 1]` the depth into the absorbing layer.
fn absorber(psi: &GridWavefunction) -> Vec<f64> {
    let n = psi.grid.len();
    let width = ((n as f64) * ABSORBER_FRACTION).max(1.0);
    (0..n)
        .map(|j| {
            let depth = (width - j as f64).max(width - (n - 1 - j) as f64).max(0.0) / width;
            (0.5 * PI * depth.min(1.0)).cos().powf(0.125)
        })
        .collect()
}

/// Free evolution `e^{−itp²/2m}`, exact in momentum space.
pub fn free_evolve(psi: &GridWavefunction, mass: f64, t: f64) -> GridWavefunction {
    let k = psi.grid.momenta();
    let amps: Vec<Complex64> = psi
        .momentum_amplitudes()
        .iter()
        .zip(&k)
        .map(|(a, p)| a * Complex64::from_polar(1.0, -t * p * p / (2.0 * mass)))
        .collect();
    psi.with_momentum_amplitudes(&amps)
}

/// Dollard modifier `e^{−iφ_D(p, t)}` applied bin by bin to momentum
/// amplitudes. At `p = 0` the trajectory rests at the origin and the phase
/// is `t V(0)`.
pub fn dollard_modifier_apply(
    momentum_amps: &[Complex64],
    momenta: &[f64],
    v: &LongRangePotential,
    mass: f64,
    t: f64,
) -> Vec<Complex64> {
    momentum_amps
        .iter()
        .zip(momenta)
        .map(|(a, p)| a * Complex64::from_polar(1.0, -v.ballistic_integral(p.abs() / mass, t)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationOptions {
    pub dt: f64,
    pub absorb: bool,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        Self { dt: 5e-3, absorb: true }
    }
}

/// Strang split-step evolution under `p²/2m + V(x)` for time `t`
/// (negative times run backwards). The absorbed probability is added to
/// [`GridWavefunction::absorbed`].
pub fn propagate_full(
    psi: &GridWavefunction,
    v: &LongRangePotential,
    mass: f64,
    t: f64,
    opts: &PropagationOptions,
) -> Result<GridWavefunction> {
    if !(mass > 0.0) || !t.is_finite() {
        return Err(Error::arg("mass must be positive and time finite"));
    }
    let kmax = psi.grid.max_momentum();
    if !(opts.dt > 0.0) || opts.dt * kmax * kmax / (2.0 * mass) >= 0.5 {
        return Err(Error::arg(format!(
            "dt = {} does not resolve the kinetic phase (need dt·p_max²/2m < 0.5, p_max = {kmax})",
            opts.dt
        )));
    }
    let mut out = psi.clone();
    if t == 0.0 {
        return Ok(out);
    }
    let steps = (t.abs() / opts.dt).ceil() as usize;
    let h = t / steps as f64;
    let grid = &psi.grid;
    let n = grid.len();
    let scale = 1.0 / n as f64;
    let half_v: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, -0.5 * h * v.value(grid.x(j))))
        .collect();
    let kinetic: Vec<Complex64> = grid
        .momenta()
        .iter()
        .map(|p| Complex64::from_polar(scale, -h * p * p / (2.0 * mass)))
        .collect();
    let mask = if opts.absorb { Some(absorber(psi)) } else { None };
    let buf = &mut out.amplitudes;
    for _ in 0..steps {
        buf.iter_mut().zip(&half_v).for_each(|(a, f)| *a *= f);
        grid.forward_in_place(buf);
        buf.iter_mut().zip(&kinetic).for_each(|(a, f)| *a *= f);
        grid.inverse_in_place(buf);
        buf.iter_mut().zip(&half_v).for_each(|(a, f)| *a *= f);
        if let Some(mask) = &mask {
            buf.iter_mut().zip(mask).for_each(|(a, m)| *a *= m);
        }
    }
    let before = psi.norm().powi(2);
    out.absorbed += (before - out.norm().powi(2)).max(0.0);
    Ok(out)
}
