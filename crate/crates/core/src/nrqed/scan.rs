use super::{cloud_function, ground_state, velocity, FiberModel, NelsonFiberParams};
use crate::exec;
use crate::spectral::{lowest_eigenpair_with, LanczosOptions};
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub struct IrScanRow {
    pub lambda: f64,
    pub energy: f64,
    pub mean_photon_number: f64,
    /// `|⟨Ω, φ⟩|²` for the undressed ground state φ.
    pub vacuum_overlap: f64,
    pub dressed_mean_photon_number: f64,
    /// Larger of the two eigensolver residuals.
    pub residual: f64,
    pub velocity: Vec3,
    pub cloud_norm_sqr: f64,
    pub basis_size: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanOptions {
    pub lanczos: LanczosOptions,
    /// Worker threads; 0 lets rayon decide, 1 runs sequentially.
    pub threads: usize,
}

/// One row of an infrared scan with the grid rebuilt at cutoff `lambda`.
pub fn scan_row(params: &NelsonFiberParams, p: &Vec3, lambda: f64, opts: &LanczosOptions) -> Result<IrScanRow> {
    let model = FiberModel::new(params.with_ir_cutoff(lambda))?;
    let ground = ground_state(&model, p, opts)?;
    let v = velocity(&model, p, opts)?;
    let cloud = cloud_function(&model, &v.velocity)?;
    let dressed = lowest_eigenpair_with(&model.conjugated_operator(p, &cloud)?, opts)?;
    Ok(IrScanRow {
        lambda,
        energy: ground.eigenvalue,
        mean_photon_number: model.photon_number(&ground.eigenvector),
        vacuum_overlap: ground.eigenvector.amplitudes()[0].norm_sqr().min(1.0),
        dressed_mean_photon_number: model.photon_number(&dressed.eigenvector),
        residual: ground.residual.max(dressed.residual),
        velocity: v.velocity,
        cloud_norm_sqr: cloud.norm_sqr(),
        basis_size: model.basis().len(),
    })
}

/// Scans a decreasing schedule of infrared cutoffs. Rows fail
/// independently; the outer error only reports an invalid schedule.
pub fn ir_scan(
    params: &NelsonFiberParams,
    p: &Vec3,
    schedule: &[f64],
    opts: &ScanOptions,
) -> Result<Vec<Result<IrScanRow>>> {
    if schedule.is_empty() {
        return Err(Error::arg("empty λ schedule"));
    }
    if schedule.iter().any(|&l| !(l > 0.0 && l < params.grid.uv_cutoff)) {
        return Err(Error::arg("every λ must lie in (0, Λ)"));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::arg("λ schedule must be strictly decreasing"));
    }
    params.validate()?;
    Ok(exec::execute(schedule.to_vec(), opts.threads, |lambda| {
        scan_row(params, p, lambda, &opts.lanczos)
    })
    .into_iter()
    .map(|r| r.map_err(Error::from).and_then(|x| x))
    .collect())
}
