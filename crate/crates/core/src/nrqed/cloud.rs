use num_complex::Complex64;

use super::{CouplingVariant, FiberModel};
use crate::fock::CloudFunction;
use crate::{dot3, norm3, Error, Result, Vec3};

/// Soft cloud of a particle moving with velocity `v`:
/// `f(k) = −e ρ̃(|k|) / (sqrt(2) |k|^{3/2}) · X / (1 − k̂·v)` with `X = ε(k)·v`
/// for transversal photons and `X = 1` in the scalar model.
pub fn cloud_function(model: &FiberModel, v: &Vec3) -> Result<CloudFunction> {
    let speed = norm3(v);
    if !(speed < 1.0) {
        return Err(Error::domain(format!("|v| = {speed} must be below 1")));
    }
    let params = model.params();
    let e = params.coupling;
    let amps = model
        .grid()
        .modes()
        .iter()
        .enumerate()
        .map(|(i, mode)| {
            let k = mode.energy();
            let radial = -e * params.profile.value(k) / (2f64.sqrt() * k.powf(1.5));
            let numerator = match params.variant {
                CouplingVariant::Scalar => 1.0,
                CouplingVariant::Transversal { .. } => dot3(&model.polarization(i).expect("validated"), v),
            };
            Complex64::new(radial * numerator / (1.0 - dot3(&mode.direction(), v)), 0.0)
        })
        .collect();
    CloudFunction::new(model.grid().clone(), amps)
}
