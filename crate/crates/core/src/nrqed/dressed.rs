use super::{cloud_function, velocity, FiberModel, FiberOperator, VelocityEstimate};
use crate::fock::CloudFunction;
use crate::spectral::LanczosOptions;
use crate::{Error, Result, Vec3};

/// `H^w(p) = W(f_p) H(p) W(f_p)*` together with the cloud that defines it.
#[derive(Debug, Clone)]
pub struct DressedHamiltonian {
    pub operator: FiberOperator,
    pub cloud: CloudFunction,
    pub velocity: VelocityEstimate,
    /// Leakage bound of `W(f_p)Ω` on the model's basis.
    pub leakage: f64,
}

/// Dresses `H(p)` with the cloud of its own group velocity.
///
/// Fails with [`Error::Leakage`] when the basis cannot hold the coherent
/// cloud to within `max_leakage`.
pub fn dressed_hamiltonian(
    model: &FiberModel,
    p: &Vec3,
    max_leakage: f64,
    opts: &LanczosOptions,
) -> Result<DressedHamiltonian> {
    let velocity = velocity(model, p, opts)?;
    let cloud = cloud_function(model, &velocity.velocity)?;
    let leakage = model.cloud_leakage(&cloud)?;
    if leakage > max_leakage {
        return Err(Error::Leakage {
            measured: leakage,
            bound: max_leakage,
        });
    }
    Ok(DressedHamiltonian {
        operator: model.conjugated_operator(p, &cloud)?,
        cloud,
        velocity,
        leakage,
    })
}
