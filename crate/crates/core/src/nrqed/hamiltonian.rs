use std::sync::Arc;

use num_complex::Complex64;

use super::forms::LadderForm;
use super::{CouplingVariant, NelsonFiberParams};
use crate::fock::{CloudFunction, FockBasis, FockVector, ModeGrid, SparseOperator, WeylOperator};
use crate::spectral::LinearOperator;
use crate::{Error, Result, Vec3};

/// Truncated fiber model: parameters, mode grid and Fock basis.
#[derive(Debug, Clone)]
pub struct FiberModel {
    params: NelsonFiberParams,
    basis: FockBasis,
    /// `sqrt(w_i) ρ̃(k_i) / sqrt(2|k_i|)`, the ladder coefficient of the field.
    kappa: Vec<f64>,
    polarizations: Vec<Option<Vec3>>,
}

impl FiberModel {
    pub fn new(params: NelsonFiberParams) -> Result<Self> {
        params.validate()?;
        let grid = Arc::new(ModeGrid::log_radial(&params.grid)?);
        Self::with_grid(params, grid)
    }

    /// Uses a prebuilt grid instead of the one described by `params.grid`.
    pub fn with_grid(params: NelsonFiberParams, grid: Arc<ModeGrid>) -> Result<Self> {
        if !(params.mass > 0.0 && params.mass.is_finite()) || !params.coupling.is_finite() {
            return Err(Error::arg("mass must be positive and coupling finite"));
        }
        let kappa = grid
            .modes()
            .iter()
            .map(|m| m.weight.sqrt() * params.profile.value(m.energy()) / (2.0 * m.energy()).sqrt())
            .collect();
        let polarizations: Vec<Option<Vec3>> = (0..grid.len()).map(|i| grid.polarization_vector(i)).collect();
        if matches!(params.variant, CouplingVariant::Transversal { .. }) && polarizations.iter().any(Option::is_none) {
            return Err(Error::arg("the transversal variant needs polarized modes"));
        }
        let basis = FockBasis::new(grid, params.max_total, params.max_per_mode)?;
        Ok(Self {
            params,
            basis,
            kappa,
            polarizations,
        })
    }

    pub fn params(&self) -> &NelsonFiberParams {
        &self.params
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn grid(&self) -> &Arc<ModeGrid> {
        self.basis.grid()
    }

    pub fn dimension(&self) -> usize {
        self.grid().dimension()
    }

    pub(crate) fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub(crate) fn polarization(&self, mode: usize) -> Option<Vec3> {
        self.polarizations[mode]
    }

    pub fn check_momentum(&self, p: &Vec3) -> Result<()> {
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::arg("total momentum must be finite"));
        }
        if p[self.dimension()..].iter().any(|&x| x != 0.0) {
            return Err(Error::arg(format!(
                "momentum {p:?} has components beyond dimension {}",
                self.dimension()
            )));
        }
        Ok(())
    }

    fn photon_energy(&self) -> LadderForm {
        LadderForm::number(self.grid().modes().iter().map(|m| m.energy()).collect(), 0.0)
    }

    /// `p_μ − P_ph,μ`.
    fn kinetic_momentum(&self, p: &Vec3, mu: usize) -> LadderForm {
        LadderForm::number(self.grid().modes().iter().map(|m| -m.momentum[mu]).collect(), p[mu])
    }

    /// `A_μ = Σ κ_i ε_{i,μ} (b*_i + b_i)`.
    fn vector_potential(&self, mu: usize) -> LadderForm {
        LadderForm::field(
            self.kappa
                .iter()
                .zip(&self.polarizations)
                .map(|(k, e)| Complex64::new(k * e.expect("validated")[mu], 0.0))
                .collect(),
        )
    }

    /// `H(p)` as a base form plus weighted squares of forms.
    fn forms(&self, p: &Vec3) -> (LadderForm, Vec<(f64, LadderForm)>) {
        let m = self.params.mass;
        let e = self.params.coupling;
        let d = self.dimension();
        match self.params.variant {
            CouplingVariant::Scalar => {
                let phi = LadderForm::field(self.kappa.iter().map(|&k| Complex64::new(k, 0.0)).collect());
                let base = self.photon_energy().plus(-e, &phi);
                let squares = (0..d).map(|mu| (0.5 / m, self.kinetic_momentum(p, mu))).collect();
                (base, squares)
            }
            CouplingVariant::Transversal { a_squared } => {
                let mut squares = Vec::new();
                for mu in 0..d {
                    let a = self.vector_potential(mu);
                    squares.push((0.5 / m, self.kinetic_momentum(p, mu).plus(-e, &a)));
                    if !a_squared && e != 0.0 {
                        squares.push((-0.5 * e * e / m, a));
                    }
                }
                (self.photon_energy(), squares)
            }
        }
    }

    /// Matrix-free `H(p)`.
    pub fn fiber_operator(&self, p: &Vec3) -> Result<FiberOperator> {
        self.check_momentum(p)?;
        let (base, squares) = self.forms(p);
        FiberOperator::from_forms(&self.basis, &base, &squares)
    }

    /// `W(f) H(p) W(f)*` obtained by the substitution `b → b − sqrt(w) f`
    /// before truncation.
    pub fn conjugated_operator(&self, p: &Vec3, cloud: &CloudFunction) -> Result<FiberOperator> {
        self.check_momentum(p)?;
        if !cloud.same_grid(self.grid()) {
            return Err(Error::arg("cloud function and model use different grids"));
        }
        let beta = cloud.ladder_coefficients();
        let (base, squares) = self.forms(p);
        let squares: Vec<_> = squares.iter().map(|(c, f)| (*c, f.shifted(&beta))).collect();
        FiberOperator::from_forms(&self.basis, &base.shifted(&beta), &squares)
    }

    /// Total photon number `Σ n_i` of a state.
    pub fn photon_number(&self, psi: &FockVector) -> f64 {
        psi.amplitudes()
            .iter()
            .enumerate()
            .map(|(s, a)| a.norm_sqr() * self.basis.total(s) as f64)
            .sum()
    }

    /// Leakage bound of `W(f)Ω` on this basis.
    pub fn cloud_leakage(&self, cloud: &CloudFunction) -> Result<f64> {
        let w = WeylOperator::new(&self.basis, cloud)?;
        Ok(w.apply_reporting(&FockVector::vacuum(self.basis.len()))?.leakage)
    }
}

/// `B + Σ_j c_j S_j²` with `B`, `S_j` sparse and Hermitian.
///
/// Squares whose factor is diagonal are folded into `B`; the rest are
/// applied as two sparse products, which keeps the memory linear in the
/// basis size.
#[derive(Debug, Clone)]
pub struct FiberOperator {
    base: SparseOperator,
    squares: Vec<(f64, SparseOperator)>,
}

impl FiberOperator {
    fn from_forms(basis: &FockBasis, base: &LadderForm, squares: &[(f64, LadderForm)]) -> Result<Self> {
        let mut folded = vec![0.0; basis.len()];
        let mut kept = Vec::new();
        for (c, form) in squares {
            if form.field.iter().all(|u| u.norm() == 0.0) {
                for (s, occ) in basis.states().enumerate() {
                    let v = form.constant + occ.iter().zip(&form.number).map(|(&n, &w)| n as f64 * w).sum::<f64>();
                    folded[s] += c * v * v;
                }
            } else {
                kept.push((*c, form.to_sparse(basis)?));
            }
        }
        let one = Complex64::new(1.0, 0.0);
        let b = base.to_sparse(basis)?;
        let base = SparseOperator::linear_combination(basis.len(), &[(one, &b), (one, &SparseOperator::diagonal(&folded))])?
            .into_hermitian()?;
        Ok(Self { base, squares: kept })
    }

    /// Assembled sparse matrix.
    pub fn to_sparse(&self) -> Result<SparseOperator> {
        let mut products = Vec::with_capacity(self.squares.len());
        for (_, s) in &self.squares {
            products.push(s.matmul(s)?);
        }
        let one = Complex64::new(1.0, 0.0);
        let mut terms = vec![(one, &self.base)];
        for ((c, _), prod) in self.squares.iter().zip(&products) {
            terms.push((Complex64::new(*c, 0.0), prod));
        }
        SparseOperator::linear_combination(self.base.dim(), &terms)?.into_hermitian()
    }
}

impl LinearOperator for FiberOperator {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.base.apply_into(x, y);
        if self.squares.is_empty() {
            return;
        }
        let n = x.len();
        let mut t = vec![Complex64::new(0.0, 0.0); n];
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        for (c, s) in &self.squares {
            s.apply_into(x, &mut t);
            s.apply_into(&t, &mut u);
            for (yi, ui) in y.iter_mut().zip(&u) {
                *yi += *c * ui;
            }
        }
    }

    fn is_hermitian(&self) -> bool {
        true
    }

    fn norm_bound(&self) -> f64 {
        self.base.norm_bound() + self.squares.iter().map(|(c, s)| c.abs() * s.norm_bound().powi(2)).sum::<f64>()
    }
}

/// `H(p)` assembled as a sparse matrix with its Hermitian flag verified.
pub fn fiber_hamiltonian(params: &NelsonFiberParams, p: &Vec3) -> Result<SparseOperator> {
    FiberModel::new(params.clone())?.fiber_operator(p)?.to_sparse()
}
