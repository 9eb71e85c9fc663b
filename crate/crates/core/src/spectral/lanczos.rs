use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{tridiag, EigResult};
use crate::fock::vector::{axpy, dot, norm};
use super::LinearOperator;
use crate::fock::FockVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Target for ‖Hψ − Eψ‖.
    pub tol: f64,
    /// Cap on operator applications over all restarts.
    pub max_iter: usize,
    pub seed: u64,
    /// Largest Krylov basis held before restarting from the current Ritz vector.
    pub krylov_dim: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 20_000,
            seed: 0,
            krylov_dim: 300,
        }
    }
}

/// Lowest eigenpair of a Hermitian operator.
pub fn lowest_eigenpair<H: LinearOperator + ?Sized>(h: &H, tol: f64, max_iter: usize, seed: u64) -> Result<EigResult> {
    lowest_eigenpair_with(
        h,
        &LanczosOptions {
            tol,
            max_iter,
            seed,
            ..LanczosOptions::default()
        },
    )
}

fn start_vector(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let nrm = norm(&v);
    v.iter_mut().for_each(|x| *x /= nrm);
    v
}

/// Rotates the global phase so the largest component is real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.norm() > v[best].norm() * (1.0 + 1e-9) {
            best = i;
        }
    }
    let a = v[best];
    if a.norm() > 0.0 {
        let phase = a.conj() / a.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

pub fn lowest_eigenpair_with<H: LinearOperator + ?Sized>(h: &H, opts: &LanczosOptions) -> Result<EigResult> {
    if !h.is_hermitian() {
        return Err(Error::arg("lowest_eigenpair needs a Hermitian operator"));
    }
    if !(opts.tol > 0.0) || opts.krylov_dim < 2 {
        return Err(Error::arg("invalid Lanczos options"));
    }
    let n = h.dim();
    if n == 0 {
        return Err(Error::arg("empty operator"));
    }
    let scale = h.norm_bound().max(1e-300);
    let breakdown = 1e-14 * scale;
    let m_max = opts.krylov_dim.min(n);
    let check_every = 8;

    let mut start = start_vector(n, opts.seed);
    let mut iterations = 0usize;
    let mut best_residual = f64::INFINITY;
    let mut w = vec![Complex64::new(0.0, 0.0); n];

    loop {
        let mut basis: Vec<Vec<Complex64>> = vec![std::mem::take(&mut start)];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for j in 0..m_max {
            h.apply_into(&basis[j], &mut w);
            iterations += 1;
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            let b = norm(&w);
            let last = j + 1 == m_max || b < breakdown || iterations >= opts.max_iter;
            if last || (j + 1) % check_every == 0 {
                let (_, s) = tridiag::lowest_eigenpair(&alpha, &beta);
                let estimate = b * s[j].abs();
                if last || estimate <= 0.25 * opts.tol {
                    let mut x = vec![Complex64::new(0.0, 0.0); n];
                    for (v, &c) in basis.iter().zip(&s) {
                        axpy(Complex64::new(c, 0.0), v, &mut x);
                    }
                    let nrm = norm(&x);
                    x.iter_mut().for_each(|z| *z /= nrm);
                    fix_phase(&mut x);
                    h.apply_into(&x, &mut w);
                    iterations += 1;
                    let rq = dot(&x, &w).re;
                    axpy(Complex64::new(-rq, 0.0), &x, &mut w);
                    let residual = norm(&w);
                    best_residual = best_residual.min(residual);
                    if residual <= opts.tol {
                        return Ok(EigResult {
                            eigenvalue: rq,
                            eigenvector: FockVector::new(x),
                            residual,
                            iterations,
                        });
                    }
                    if iterations >= opts.max_iter {
                        return Err(Error::NotConverged {
                            iterations,
                            best_residual,
                        });
                    }
                    start = x;
                    break;
                }
            }
            if b < breakdown {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|z| z / b).collect());
        }
    }
}
