use num_complex::Complex64;

use super::{CloudFunction, FockBasis, FockVector, SparseOperator};
use crate::{Error, Result};

/// Triplets of `Σ_i c_i b*_i`; transitions leaving the truncated space are
/// dropped.
fn creation_triplets(basis: &FockBasis, coeffs: &[Complex64]) -> Vec<(usize, usize, Complex64)> {
    let mut triplets = Vec::new();
    let mut scratch = vec![0u8; basis.n_modes()];
    for s in 0..basis.len() {
        if basis.total(s) >= basis.max_total() {
            continue;
        }
        scratch.copy_from_slice(basis.occupation(s));
        for (i, &c) in coeffs.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let n = scratch[i] as usize;
            if n >= basis.max_per_mode() {
                continue;
            }
            scratch[i] += 1;
            let target = basis.index_of(&scratch).expect("raised state lies in the basis");
            scratch[i] -= 1;
            triplets.push((target, s, c * ((n + 1) as f64).sqrt()));
        }
    }
    triplets
}

/// Linear combination `Σ_i c_i b*_i` of discrete creation operators.
pub fn creation_combination(basis: &FockBasis, coeffs: &[Complex64]) -> Result<SparseOperator> {
    if coeffs.len() != basis.n_modes() {
        return Err(Error::arg(format!(
            "{} coefficients for {} modes",
            coeffs.len(),
            basis.n_modes()
        )));
    }
    SparseOperator::from_triplets(basis.len(), creation_triplets(basis, coeffs))
}

fn unit_coeffs(basis: &FockBasis, mode: usize) -> Result<Vec<Complex64>> {
    if mode >= basis.n_modes() {
        return Err(Error::arg(format!("mode index {mode} invalid for {} modes", basis.n_modes())));
    }
    let mut c = vec![Complex64::new(0.0, 0.0); basis.n_modes()];
    c[mode] = Complex64::new(1.0, 0.0);
    Ok(c)
}

/// Creation operator of one mode: `⟨n+1| b* |n⟩ = sqrt(n+1)`.
pub fn creation_op(basis: &FockBasis, mode: usize) -> Result<SparseOperator> {
    creation_combination(basis, &unit_coeffs(basis, mode)?)
}

pub fn annihilation_op(basis: &FockBasis, mode: usize) -> Result<SparseOperator> {
    Ok(creation_op(basis, mode)?.adjoint())
}

/// Smeared creation and annihilation operators `(a*(g), a(g))`.
///
/// The continuum field `a(k)` is represented on mode `i` by
/// `b_i / sqrt(w_i)`, so `a*(g) = Σ_i w_i g_i a*(k_i) = Σ_i sqrt(w_i) g_i b*_i`
/// and `[a(g), a*(h)] = ⟨g, h⟩` on states below the truncation edge.
pub fn smeared_field_ops(basis: &FockBasis, g: &CloudFunction) -> Result<(SparseOperator, SparseOperator)> {
    if !g.same_grid(basis.grid()) {
        return Err(Error::arg("cloud function and basis use different grids"));
    }
    let create = creation_combination(basis, &g.ladder_coefficients())?;
    let annihilate = create.adjoint();
    Ok((create, annihilate))
}

/// `Σ_i |k_i| n_i`.
pub fn free_photon_hamiltonian(basis: &FockBasis) -> SparseOperator {
    let energies: Vec<f64> = basis.grid().modes().iter().map(|m| m.energy()).collect();
    occupation_weighted(basis, &energies)
}

/// `Σ_i n_i`.
pub fn number_operator(basis: &FockBasis) -> SparseOperator {
    let diag: Vec<f64> = (0..basis.len()).map(|s| basis.total(s) as f64).collect();
    SparseOperator::diagonal(&diag)
}

/// Components `Σ_i (k_i)_μ n_i` for μ < grid dimension.
pub fn photon_momentum(basis: &FockBasis) -> Vec<SparseOperator> {
    (0..basis.grid().dimension())
        .map(|mu| {
            let comps: Vec<f64> = basis.grid().modes().iter().map(|m| m.momentum[mu]).collect();
            occupation_weighted(basis, &comps)
        })
        .collect()
}

pub(crate) fn occupation_weighted(basis: &FockBasis, per_mode: &[f64]) -> SparseOperator {
    let diag: Vec<f64> = basis
        .states()
        .map(|occ| occ.iter().zip(per_mode).map(|(&n, &e)| n as f64 * e).sum())
        .collect();
    SparseOperator::diagonal(&diag)
}

/// Norm of the part of `Σ_i c_i b*_i ψ` that the truncation drops.
pub fn creation_leakage(basis: &FockBasis, coeffs: &[Complex64], psi: &FockVector) -> f64 {
    let mut lost = 0.0;
    for (s, amp) in psi.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let occ = basis.occupation(s);
        let mut flux = 0.0;
        for (i, c) in coeffs.iter().enumerate() {
            if basis.creation_dropped(s, i) {
                flux += c.norm_sqr() * (occ[i] as f64 + 1.0);
            }
        }
        lost += p * flux;
    }
    lost.sqrt()
}

/// Probability of each total photon number `0..=max_total`.
pub fn photon_number_distribution(basis: &FockBasis, psi: &FockVector) -> Vec<f64> {
    let mut dist = vec![0.0; basis.max_total() + 1];
    for (s, a) in psi.amplitudes().iter().enumerate() {
        dist[basis.total(s)] += a.norm_sqr();
    }
    dist
}
