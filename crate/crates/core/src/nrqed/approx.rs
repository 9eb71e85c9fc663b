use num_complex::Complex64;

use super::{cloud_function, velocity, FiberModel, FiberOperator, VelocityEstimate};
use crate::fock::{CloudFunction, FockVector, WeylOperator};
use crate::spectral::{evolve_with, lowest_eigenpair_with, EigResult, KrylovOptions, LanczosOptions};
use crate::{Error, Result, Vec3};

/// The undetermined phases `C_p, γ'_t(p), γ''_t(p), γ_t(p)` of the Dollard
/// construction. They only ever multiply a vector by `e^{i(C + γ' + γ'' + γ)}`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DollardPhases {
    pub c_p: f64,
    pub gamma_prime: f64,
    pub gamma_double_prime: f64,
    pub gamma: f64,
}

impl DollardPhases {
    pub fn factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.c_p + self.gamma_prime + self.gamma_double_prime + self.gamma)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ApproxOptions {
    pub lanczos: LanczosOptions,
    pub krylov: KrylovOptions,
}

#[derive(Debug, Clone)]
pub struct ApproxVector {
    pub time: f64,
    pub vector: FockVector,
    /// Weyl truncation bound of the cloud step.
    pub leakage: f64,
    /// Krylov error estimate of the backward propagation.
    pub propagation_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxKind {
    /// `e^{itH} W(e^{−i|k|t} f) e^{−itE} φ` with φ the ground state at cutoff λ.
    Cfp,
    /// `e^{itH} W((e^{−i|k|t} − 1) f) Φ` with Φ the ground state of `H^w`.
    Bdg,
}

/// Everything the two approximating vectors of one fiber share.
#[derive(Debug, Clone)]
pub struct ApproximatingVectors {
    model: FiberModel,
    hamiltonian: FiberOperator,
    ground: EigResult,
    dressed_ground: EigResult,
    cloud: CloudFunction,
    velocity: VelocityEstimate,
    opts: ApproxOptions,
}

impl ApproximatingVectors {
    pub fn new(model: FiberModel, p: &Vec3, opts: ApproxOptions) -> Result<Self> {
        let hamiltonian = model.fiber_operator(p)?;
        let ground = lowest_eigenpair_with(&hamiltonian, &opts.lanczos)?;
        let velocity = velocity(&model, p, &opts.lanczos)?;
        let cloud = cloud_function(&model, &velocity.velocity)?;
        let dressed_ground = lowest_eigenpair_with(&model.conjugated_operator(p, &cloud)?, &opts.lanczos)?;
        Ok(Self {
            model,
            hamiltonian,
            ground,
            dressed_ground,
            cloud,
            velocity,
            opts,
        })
    }

    pub fn model(&self) -> &FiberModel {
        &self.model
    }

    pub fn ground(&self) -> &EigResult {
        &self.ground
    }

    pub fn dressed_ground(&self) -> &EigResult {
        &self.dressed_ground
    }

    pub fn cloud(&self) -> &CloudFunction {
        &self.cloud
    }

    pub fn velocity(&self) -> &VelocityEstimate {
        &self.velocity
    }

    pub fn vector(&self, kind: ApproxKind, t: f64, phases: &DollardPhases) -> Result<ApproxVector> {
        if !t.is_finite() {
            return Err(Error::arg("time must be finite"));
        }
        let (g, start, phase) = match kind {
            ApproxKind::Cfp => (
                self.cloud.free_evolved(t),
                &self.ground.eigenvector,
                Complex64::from_polar(1.0, -t * self.ground.eigenvalue),
            ),
            ApproxKind::Bdg => (
                self.cloud.free_evolved(t).add(&self.cloud.scaled(Complex64::new(-1.0, 0.0)))?,
                &self.dressed_ground.eigenvector,
                Complex64::new(1.0, 0.0),
            ),
        };
        let w = WeylOperator::new(self.model.basis(), &g)?;
        let clouded = w.apply_reporting(&start.scaled(phase * phases.factor()))?;
        let evolved = evolve_with(&self.hamiltonian, &clouded.vector, -t, &self.opts.krylov)?;
        Ok(ApproxVector {
            time: t,
            vector: evolved.vector,
            leakage: clouded.leakage,
            propagation_error: evolved.error_estimate,
        })
    }

    pub fn cfp(&self, t: f64) -> Result<ApproxVector> {
        self.vector(ApproxKind::Cfp, t, &DollardPhases::default())
    }

    pub fn bdg(&self, t: f64) -> Result<ApproxVector> {
        self.vector(ApproxKind::Bdg, t, &DollardPhases::default())
    }

    /// Phase-quotient distances between consecutive times of `times`.
    pub fn cauchy_residuals(&self, kind: ApproxKind, times: &[f64]) -> Result<Vec<f64>> {
        let vectors = times
            .iter()
            .map(|&t| self.vector(kind, t, &DollardPhases::default()))
            .collect::<Result<Vec<_>>>()?;
        Ok(consecutive_distances(&vectors))
    }
}

pub fn consecutive_distances(vectors: &[ApproxVector]) -> Vec<f64> {
    vectors
        .windows(2)
        .map(|w| w[0].vector.phase_quotient_distance(&w[1].vector))
        .collect()
}

/// `‖(e^{−i|k|t} − 1) f‖²`.
pub fn bdg_cloud_norm_sqr(cloud: &CloudFunction, t: f64) -> f64 {
    cloud
        .map_modes(|m, a| a * (Complex64::from_polar(1.0, -m.energy() * t) - 1.0))
        .norm_sqr()
}

pub fn cfp_fiber_vector(model: &FiberModel, p: &Vec3, t: f64, opts: &ApproxOptions) -> Result<ApproxVector> {
    ApproximatingVectors::new(model.clone(), p, opts.clone())?.cfp(t)
}

pub fn bdg_fiber_vector(model: &FiberModel, p: &Vec3, t: f64, opts: &ApproxOptions) -> Result<ApproxVector> {
    ApproximatingVectors::new(model.clone(), p, opts.clone())?.bdg(t)
}
