use std::f64::consts::SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;

use super::legs::{soft_current, ProcessCurrents};
use crate::fit::fit_line;
use crate::fock::{radial_cells, CloudFunction, DirectionSet, FockBasis, FockVector, GridSpec, ModeGrid, WeylOperator};
use crate::{dot3, Error, Result};

/// Relative tail below which an inclusive sum counts as converged.
pub const INCLUSIVE_TAIL: f64 = 1e-6;

const FIT_LIMIT: f64 = 0.05;

/// Angular and radial resolution of the photon shells.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftQuadrature {
    pub points_per_decade: usize,
    pub directions: DirectionSet,
}

impl Default for SoftQuadrature {
    fn default() -> Self {
        Self {
            points_per_decade: 4,
            directions: DirectionSet::GaussProduct {
                polar: 24,
                azimuthal: 24,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftExponent {
    /// Coefficient of `ln(Λ/λ)` in the shell norm.
    pub a: f64,
    /// Constant part `c` of the fitted line.
    pub finite_part: f64,
    /// RMS deviation from the line relative to the largest shell norm.
    pub fit_residual: f64,
}

/// The cloud `ε·j(k̂)/(√2|k|^{3/2})` on a polarized grid between `λ` and `Λ`.
pub fn soft_cloud(process: &ProcessCurrents, lambda: f64, uv: f64, quad: &SoftQuadrature) -> Result<CloudFunction> {
    let grid = Arc::new(ModeGrid::log_radial(&GridSpec {
        dimension: 3,
        ir_cutoff: lambda,
        uv_cutoff: uv,
        points_per_decade: quad.points_per_decade,
        directions: quad.directions.clone(),
        polarized: true,
    })?);
    let mut amps = Vec::with_capacity(grid.len());
    for m in grid.modes() {
        let j = soft_current(process, &m.direction())?;
        let eps = grid.polarization_vector(m.index).expect("grid is polarized");
        let k = m.energy();
        amps.push(Complex64::new(dot3(&eps, &j) / (SQRT_2 * k * k.sqrt()), 0.0));
    }
    CloudFunction::new(grid, amps)
}

fn check_shell(lambda: f64, uv: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= uv && uv.is_finite()) {
        return Err(Error::arg(format!("shell needs 0 < λ <= Λ (λ = {lambda}, Λ = {uv})")));
    }
    Ok(())
}

fn shell_norm_sqr(process: &ProcessCurrents, lo: f64, hi: f64, quad: &SoftQuadrature) -> Result<f64> {
    check_shell(lo, hi)?;
    if lo == hi {
        return Ok(0.0);
    }
    Ok(soft_cloud(process, lo, hi, quad)?.norm_sqr())
}

/// Fits `‖cloud‖²_{λ'<|k|<Λ} = c + a·ln(Λ/λ')` over the radial cell edges
/// `λ'` between `λ` and `Λ`.
pub fn soft_exponent(process: &ProcessCurrents, lambda: f64, uv: f64, quad: &SoftQuadrature) -> Result<SoftExponent> {
    check_shell(lambda, uv)?;
    if uv / lambda < 100.0 * (1.0 - 1e-12) {
        return Err(Error::arg("soft exponent needs at least two decades between λ and Λ"));
    }
    let cloud = soft_cloud(process, lambda, uv, quad)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = radial_cells(lambda, uv, quad.points_per_decade)
        .iter()
        .map(|&(lo, _)| ((uv / lo).ln(), cloud.shell_norm_sqr(lo, uv)))
        .unzip();
    let fit = fit_line(&xs, &ys)?;
    let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let fit_residual = if scale > 0.0 { fit.rms_residual / scale } else { 0.0 };
    if fit_residual > FIT_LIMIT {
        return Err(Error::Fit {
            residual: fit_residual,
            limit: FIT_LIMIT,
        });
    }
    Ok(SoftExponent {
        a: fit.slope.max(0.0),
        finite_part: fit.intercept,
        fit_residual,
    })
}

/// `σ0 · exp(−‖cloud‖²_{λ<|k|<Λ})`.
pub fn exclusive_cross_section(process: &ProcessCurrents, lambda: f64, uv: f64, quad: &SoftQuadrature) -> Result<f64> {
    Ok(process.sigma0() * (-shell_norm_sqr(process, lambda, uv, quad)?).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct InclusiveSeries {
    /// Partial sums for `n = 0..=n_max`.
    pub partial_sums: Vec<f64>,
    pub limit: f64,
    /// Smallest `n` whose relative tail is below [`INCLUSIVE_TAIL`].
    pub terms_needed: usize,
}

/// `Σ_{n<=n_max} (1/n!) ‖cloud‖²ⁿ_{λ<|k|<E} · σ(λ)` with `σ(λ)` the
/// exclusive cross section on `(λ, Λ)`.
pub fn inclusive_partial_sum(
    process: &ProcessCurrents,
    lambda: f64,
    resolution: f64,
    uv: f64,
    n_max: usize,
    quad: &SoftQuadrature,
) -> Result<InclusiveSeries> {
    if !(lambda < resolution && resolution <= uv) {
        return Err(Error::arg(format!(
            "inclusive sum needs λ < E <= Λ (λ = {lambda}, E = {resolution}, Λ = {uv})"
        )));
    }
    let sigma = exclusive_cross_section(process, lambda, uv, quad)?;
    let s = shell_norm_sqr(process, lambda, resolution, quad)?;
    let limit = sigma * s.exp();

    // terms t_n = sⁿ/n!, tails are e^{−s} Σ_{m>n} t_m
    let mut terms = vec![1.0f64];
    loop {
        let n = terms.len();
        let next = terms[n - 1] * s / n as f64;
        if n > n_max && (next == 0.0 || next < 1e-18 * terms.iter().sum::<f64>()) {
            break;
        }
        terms.push(next);
    }
    let norm = (-s).exp();
    let mut tails = vec![0.0; terms.len()];
    let mut acc = 0.0;
    for n in (0..terms.len()).rev() {
        tails[n] = acc * norm;
        acc += terms[n];
    }
    let mut partial_sums = Vec::with_capacity(n_max + 1);
    let mut running = 0.0;
    for t in terms.iter().take(n_max + 1) {
        running += t;
        partial_sums.push(sigma * running);
    }
    match tails.iter().position(|&t| t <= INCLUSIVE_TAIL) {
        Some(n) if n <= n_max => Ok(InclusiveSeries {
            partial_sums,
            limit,
            terms_needed: n,
        }),
        _ => Err(Error::SeriesTail {
            n_max,
            tail: tails[n_max],
        }),
    }
}

/// `exp(−½‖cloud‖²)` on the shell `(εΛ, Λ)` reached by adiabatic switching
/// at scale `ε`.
pub fn weyl_vacuum_overlap(process: &ProcessCurrents, epsilon: f64, uv: f64, quad: &SoftQuadrature) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::arg(format!("switching scale ε = {epsilon} outside (0, 1]")));
    }
    Ok((-0.5 * shell_norm_sqr(process, epsilon * uv, uv, quad)?).exp())
}

/// `⟨Ω, W(g)Ω⟩` evaluated in a truncated Fock space over the grid of `g`.
pub fn fock_vacuum_overlap(g: &CloudFunction, max_total: usize, max_per_mode: usize) -> Result<f64> {
    let basis = FockBasis::new(g.grid().clone(), max_total, max_per_mode)?;
    let w = WeylOperator::new(&basis, g)?;
    let omega = FockVector::vacuum(basis.len());
    Ok(omega.inner(&w.apply(&omega)?).re)
}
