use num_complex::Complex64;

use super::{tridiag, PropagationResult};
use crate::fock::vector::{axpy, dot, norm};
use super::LinearOperator;
use crate::fock::{FockVector, SparseOperator};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    /// Bound on the accumulated error relative to ‖ψ‖.
    pub tol: f64,
    pub krylov_dim: usize,
    pub max_steps: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            krylov_dim: 30,
            max_steps: 100_000,
        }
    }
}

/// `e^{−itH} ψ` for Hermitian `H`.
pub fn evolve<H: LinearOperator + ?Sized>(h: &H, psi: &FockVector, t: f64, tol: f64) -> Result<PropagationResult> {
    evolve_with(
        h,
        psi,
        t,
        &KrylovOptions {
            tol,
            ..KrylovOptions::default()
        },
    )
}

/// `exp(A₊ − A₋) ψ` where `A₋ = A₊†`, evaluated as `e^{−iH}` with the
/// Hermitian `H = i(A₊ − A₋)`.
pub fn exp_antihermitian_apply(
    a_plus: &SparseOperator,
    a_minus: &SparseOperator,
    psi: &FockVector,
    tol: f64,
) -> Result<PropagationResult> {
    let i = Complex64::new(0.0, 1.0);
    let h = SparseOperator::linear_combination(a_plus.dim(), &[(i, a_plus), (-i, a_minus)])?.into_hermitian()?;
    evolve(&h, psi, 1.0, tol)
}

struct Krylov {
    basis: Vec<Vec<Complex64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// β of the first vector outside the subspace; zero on breakdown.
    next_beta: f64,
}

fn build<H: LinearOperator + ?Sized>(h: &H, u: &[Complex64], m: usize, breakdown: f64) -> Krylov {
    let n = u.len();
    let nrm = norm(u);
    let mut basis = vec![u.iter().map(|z| z / nrm).collect::<Vec<_>>()];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut next_beta = 0.0;
    for j in 0..m {
        h.apply_into(&basis[j], &mut w);
        alpha.push(dot(&basis[j], &w).re);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
            }
        }
        let b = norm(&w);
        if b < breakdown {
            next_beta = 0.0;
            break;
        }
        if j + 1 == m {
            next_beta = b;
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|z| z / b).collect());
    }
    Krylov {
        basis,
        alpha,
        beta,
        next_beta,
    }
}

pub fn evolve_with<H: LinearOperator + ?Sized>(h: &H, psi: &FockVector, t: f64, opts: &KrylovOptions) -> Result<PropagationResult> {
    if !h.is_hermitian() {
        return Err(Error::arg("evolve needs a Hermitian generator"));
    }
    if psi.dim() != h.dim() {
        return Err(Error::arg("vector and operator dimensions differ"));
    }
    if !(opts.tol > 0.0) || opts.krylov_dim == 0 {
        return Err(Error::arg("invalid Krylov options"));
    }
    let psi_norm = psi.norm();
    if t == 0.0 || psi_norm == 0.0 {
        return Ok(PropagationResult {
            vector: psi.clone(),
            error_estimate: 0.0,
            steps: 0,
        });
    }
    let scale = h.norm_bound();
    if scale == 0.0 {
        return Ok(PropagationResult {
            vector: psi.clone(),
            error_estimate: 0.0,
            steps: 0,
        });
    }
    let breakdown = 1e-14 * scale;
    let total = t.abs();
    let sign = t.signum();
    let mut u = psi.amplitudes().to_vec();
    let mut done = 0.0;
    let mut tau = total.min(opts.krylov_dim as f64 / scale);
    let mut err_total = 0.0;
    let mut steps = 0;

    while done < total {
        if steps >= opts.max_steps {
            return Err(Error::StepUnderflow {
                time: done,
                step: tau,
                error_estimate: err_total,
            });
        }
        let u_norm = norm(&u);
        let k = build(h, &u, opts.krylov_dim.min(h.dim()), breakdown);
        let eig = tridiag::full_eigen(&k.alpha, &k.beta);
        let dim = k.alpha.len();
        let propagate = |tau: f64| -> Vec<Complex64> {
            // y = Q e^{-i sign τ Λ} Qᵀ e₁
            let mut y = vec![Complex64::new(0.0, 0.0); dim];
            for c in 0..dim {
                let q0 = eig.eigenvectors[(0, c)];
                let ph = Complex64::from_polar(q0, -sign * tau * eig.eigenvalues[c]);
                for (r, yr) in y.iter_mut().enumerate() {
                    *yr += ph * eig.eigenvectors[(r, c)];
                }
            }
            y
        };
        let remaining = total - done;
        tau = tau.min(remaining);
        if k.next_beta == 0.0 {
            tau = remaining;
        }
        let (y, err) = loop {
            let y = propagate(tau);
            let err = k.next_beta * y[dim - 1].norm();
            let allowed = opts.tol * tau / total;
            if err <= allowed {
                break (y, err);
            }
            let shrink = (0.9 * (allowed / err).powf(1.0 / dim as f64)).clamp(0.1, 0.9);
            tau *= shrink;
            if tau < 1e-14 * total {
                return Err(Error::StepUnderflow {
                    time: done,
                    step: tau,
                    error_estimate: err,
                });
            }
        };
        let mut next = vec![Complex64::new(0.0, 0.0); u.len()];
        for (v, &c) in k.basis.iter().zip(&y) {
            axpy(c * u_norm, v, &mut next);
        }
        u = next;
        done += tau;
        if remaining - tau <= 1e-15 * total {
            done = total;
        }
        err_total += err;
        steps += 1;
        let allowed = opts.tol * tau / total;
        let grow = if err > 0.0 {
            (0.9 * (allowed / err).powf(1.0 / dim as f64)).clamp(1.0, 5.0)
        } else {
            5.0
        };
        tau *= grow;
    }
    Ok(PropagationResult {
        vector: FockVector::new(u),
        error_estimate: err_total,
        steps,
    })
}
