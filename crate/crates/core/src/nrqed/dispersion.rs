use super::{CouplingVariant, FiberModel, NelsonFiberParams};
use crate::exec;
use crate::fock::DirectionSet;
use crate::spectral::{lowest_eigenpair_with, EigResult, LanczosOptions};
use crate::{dot3, Error, Result, Vec3};

/// Ground state of `H(p)` by Lanczos.
pub fn ground_state(model: &FiberModel, p: &Vec3, opts: &LanczosOptions) -> Result<EigResult> {
    lowest_eigenpair_with(&model.fiber_operator(p)?, opts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityEstimate {
    pub velocity: Vec3,
    /// Richardson estimate of the finite-difference error, max over components.
    pub bound: f64,
}

/// Grids whose angular rule is invariant under each coordinate reflection;
/// on those `E(p)` is even in every component of `p`.
fn reflection_symmetric(directions: &DirectionSet) -> bool {
    match directions {
        DirectionSet::Line | DirectionSet::Axes6 | DirectionSet::Lebedev14 => true,
        DirectionSet::GaussProduct { azimuthal, .. } => azimuthal % 2 == 0,
    }
}

/// `∇E(p)` by central differences with step `h = 10⁻² Λ`.
///
/// The bound is `(4/3)|D(h) − D(h/2)|`, the Richardson estimate of the
/// error of `D(h)`. Components with `p_μ = 0` vanish by symmetry on
/// reflection-symmetric grids and are not computed.
pub fn velocity(model: &FiberModel, p: &Vec3, opts: &LanczosOptions) -> Result<VelocityEstimate> {
    model.check_momentum(p)?;
    let h = 1e-2 * model.grid().uv_cutoff();
    let symmetric = reflection_symmetric(&model.params().grid.directions);
    let energy = |q: Vec3| -> Result<f64> { Ok(ground_state(model, &q, opts)?.eigenvalue) };
    let mut v = [0.0; 3];
    let mut bound: f64 = 0.0;
    for mu in 0..model.dimension() {
        if p[mu] == 0.0 && symmetric {
            continue;
        }
        let diff = |step: f64| -> Result<f64> {
            let mut plus = *p;
            let mut minus = *p;
            plus[mu] += step;
            minus[mu] -= step;
            Ok((energy(plus)? - energy(minus)?) / (2.0 * step))
        };
        let coarse = diff(h)?;
        let fine = diff(0.5 * h)?;
        v[mu] = coarse;
        bound = bound.max(4.0 / 3.0 * (coarse - fine).abs());
    }
    Ok(VelocityEstimate { velocity: v, bound })
}

/// `E(p)` on a list of momenta. Failed rows carry their error and NaN
/// entries; velocities are filled in wherever both neighbours succeeded.
#[derive(Debug, Clone)]
pub struct DispersionTable {
    pub momenta: Vec<Vec3>,
    pub energies: Vec<f64>,
    pub residuals: Vec<f64>,
    pub velocities: Vec<Option<Vec3>>,
    pub failures: Vec<Option<Error>>,
}

impl DispersionTable {
    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }
}

pub fn dispersion(
    params: &NelsonFiberParams,
    momenta: &[Vec3],
    opts: &LanczosOptions,
    threads: usize,
) -> Result<DispersionTable> {
    let model = FiberModel::new(params.clone())?;
    for p in momenta {
        model.check_momentum(p)?;
    }
    let results = exec::execute(momenta.to_vec(), threads, |p| ground_state(&model, &p, opts));
    let mut table = DispersionTable {
        momenta: momenta.to_vec(),
        energies: Vec::with_capacity(momenta.len()),
        residuals: Vec::with_capacity(momenta.len()),
        velocities: Vec::new(),
        failures: Vec::with_capacity(momenta.len()),
    };
    for r in results {
        match r.map_err(Error::from).and_then(|x| x) {
            Ok(eig) => {
                table.energies.push(eig.eigenvalue);
                table.residuals.push(eig.residual);
                table.failures.push(None);
            }
            Err(e) => {
                table.energies.push(f64::NAN);
                table.residuals.push(f64::NAN);
                table.failures.push(Some(e));
            }
        }
    }
    table.velocities = (0..table.len()).map(|i| group_velocity(&table, i).ok()).collect();
    Ok(table)
}

/// Central difference of the tabulated energies at row `index`.
///
/// The neighbours `index ± 1` must be equidistant from the row, so the
/// table is read as samples along a line; the result is the component of
/// `∇E` along that line.
pub fn group_velocity(table: &DispersionTable, index: usize) -> Result<Vec3> {
    if index == 0 || index + 1 >= table.len() {
        return Err(Error::Range {
            index,
            what: format!("group velocity needs an interior row of a table with {} rows", table.len()),
        });
    }
    let (a, b, c) = (table.momenta[index - 1], table.momenta[index], table.momenta[index + 1]);
    let step = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let step2 = [c[0] - b[0], c[1] - b[1], c[2] - b[2]];
    let len2 = dot3(&step, &step);
    let mismatch = (0..3).map(|i| (step[i] - step2[i]).abs()).fold(0.0, f64::max);
    if len2 == 0.0 || mismatch > 1e-9 * len2.sqrt() {
        return Err(Error::arg(format!("rows around {index} are not equally spaced along a line")));
    }
    let (e0, e1) = (table.energies[index - 1], table.energies[index + 1]);
    if !(e0.is_finite() && e1.is_finite()) {
        return Err(Error::arg(format!("neighbours of row {index} failed")));
    }
    let slope = (e1 - e0) / (2.0 * len2);
    Ok([slope * step[0], slope * step[1], slope * step[2]])
}

/// Second-order Rayleigh–Schrödinger energy of the vacuum sector,
/// `p²/2m + E⁽²⁾`.
pub fn second_order_energy(model: &FiberModel, p: &Vec3) -> Result<f64> {
    model.check_momentum(p)?;
    let params = model.params();
    let m = params.mass;
    let e = params.coupling;
    let free = dot3(p, p) / (2.0 * m);
    let mut shift = 0.0;
    for (i, mode) in model.grid().modes().iter().enumerate() {
        let k = mode.momentum;
        let q = [p[0] - k[0], p[1] - k[1], p[2] - k[2]];
        let gap = mode.energy() + dot3(&q, &q) / (2.0 * m) - free;
        let kappa = model.kappa()[i];
        let matrix_element = match params.variant {
            CouplingVariant::Scalar => e * kappa,
            CouplingVariant::Transversal { a_squared } => {
                if a_squared {
                    shift += e * e * kappa * kappa / (2.0 * m);
                }
                let eps = model.polarization(i).expect("validated");
                e / m * kappa * dot3(&eps, p)
            }
        };
        shift -= matrix_element * matrix_element / gap;
    }
    Ok(free + shift)
}
