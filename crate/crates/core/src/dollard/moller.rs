use num_complex::Complex64;

use super::{dollard_modifier_apply, free_evolve, propagate_full, GridWavefunction, LongRangePotential, PropagationOptions};
use crate::exec;
use crate::fit::{fit_line, LineFit};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MollerOptions {
    pub propagation: PropagationOptions,
    /// Largest tolerated absorbed probability per run.
    pub max_mass_loss: f64,
    pub threads: usize,
}

impl Default for MollerOptions {
    fn default() -> Self {
        Self {
            propagation: PropagationOptions::default(),
            max_mass_loss: 1e-3,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MollerDiagnostics {
    pub times: Vec<f64>,
    /// `r[i][j] = ‖ψ_{t_i} − ψ_{t_j}‖`.
    pub residuals: Vec<Vec<f64>>,
    /// Accumulated `arg⟨ψ_{t_i}, ψ_{t_{i+1}}⟩`, starting at 0.
    pub phase_track: Vec<f64>,
    pub mass_loss: Vec<f64>,
}

impl MollerDiagnostics {
    /// `r(t_i, t_{i+1})`.
    pub fn consecutive(&self) -> Vec<f64> {
        (1..self.times.len()).map(|i| self.residuals[i - 1][i]).collect()
    }
}

/// `U_full(−t) U_as(t) ψ0` with `U_as(t) = e^{−itp²/2m} e^{−iφ_D(p,t)}`
/// when `modified`, plain free evolution otherwise.
pub fn moller_vector(
    psi0: &GridWavefunction,
    v: &LongRangePotential,
    mass: f64,
    t: f64,
    modified: bool,
    opts: &PropagationOptions,
) -> Result<GridWavefunction> {
    let mut forward = free_evolve(psi0, mass, t);
    if modified {
        let amps = dollard_modifier_apply(&forward.momentum_amplitudes(), &psi0.grid.momenta(), v, mass, t);
        forward = forward.with_momentum_amplitudes(&amps);
    }
    propagate_full(&forward, v, mass, -t, opts)
}

/// Comparison-dynamics vectors on a ladder of times and their mutual L²
/// distances. The metric is not phase-quotiented: for long-range
/// potentials the divergence is the phase.
pub fn moller_residual(
    psi0: &GridWavefunction,
    v: &LongRangePotential,
    mass: f64,
    times: &[f64],
    modified: bool,
    opts: &MollerOptions,
) -> Result<MollerDiagnostics> {
    if times.len() < 2 || times.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
        return Err(Error::arg("need at least two finite non-negative times"));
    }
    let vectors = exec::execute(times.to_vec(), opts.threads, |t| {
        moller_vector(psi0, v, mass, t, modified, &opts.propagation)
    })
    .into_iter()
    .map(|r| r.map_err(Error::from).and_then(|x| x))
    .collect::<Result<Vec<_>>>()?;
    let mass_loss: Vec<f64> = vectors.iter().map(|w| w.absorbed).collect();
    if let Some(&lost) = mass_loss.iter().find(|&&l| l > opts.max_mass_loss) {
        return Err(Error::MassLoss {
            lost,
            limit: opts.max_mass_loss,
        });
    }
    let n = times.len();
    let mut residuals = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = vectors[i].distance(&vectors[j]);
            residuals[i][j] = d;
            residuals[j][i] = d;
        }
    }
    let mut phase_track = vec![0.0];
    for w in vectors.windows(2) {
        let step: Complex64 = w[0].inner(&w[1]);
        phase_track.push(phase_track.last().unwrap() + step.arg());
    }
    Ok(MollerDiagnostics {
        times: times.to_vec(),
        residuals,
        phase_track,
        mass_loss,
    })
}

/// Least-squares fit of the accumulated phase against `log t`.
pub fn coulomb_log_slope_fit(diag: &MollerDiagnostics) -> Result<LineFit> {
    let (lo, hi) = diag
        .times
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    if diag.times.len() < 5 || !(lo > 0.0) || (hi / lo).log2() < 4.0 - 1e-12 {
        return Err(Error::arg("the log-slope fit needs at least 4 octaves of positive times"));
    }
    let x: Vec<f64> = diag.times.iter().map(|t| t.ln()).collect();
    fit_line(&x, &diag.phase_track)
}
