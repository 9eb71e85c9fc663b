//! Small real symmetric tridiagonal helpers for the Lanczos drivers.

use nalgebra::{DMatrix, SymmetricEigen};

/// Number of eigenvalues of T strictly below `x` (Sturm sequence count).
fn count_below(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = alpha[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for j in 1..alpha.len() {
        let denom = if q == 0.0 { f64::EPSILON * (beta[j - 1].abs() + 1.0) } else { q };
        q = alpha[j] - x - beta[j - 1] * beta[j - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenvalue and unit eigenvector of the tridiagonal matrix with
/// diagonal `alpha` and off-diagonal `beta` (`beta.len() == alpha.len() - 1`).
pub(crate) fn lowest_eigenpair(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let n = alpha.len();
    debug_assert_eq!(beta.len() + 1, n);
    if n == 1 {
        return (alpha[0], vec![1.0]);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..n {
        let r = if j > 0 { beta[j - 1].abs() } else { 0.0 } + if j + 1 < n { beta[j].abs() } else { 0.0 };
        lo = lo.min(alpha[j] - r);
        hi = hi.max(alpha[j] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    while hi - lo > 4.0 * f64::EPSILON * scale {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(alpha, beta, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    (theta, inverse_iteration(alpha, beta, theta, scale))
}

/// Eigenvector for an eigenvalue estimate by shifted inverse iteration with a
/// partially pivoted tridiagonal solve.
fn inverse_iteration(alpha: &[f64], beta: &[f64], theta: f64, scale: f64) -> Vec<f64> {
    let n = alpha.len();
    let shift = theta - 1e-13 * scale;
    let mut x = vec![1.0; n];
    for (j, xj) in x.iter_mut().enumerate() {
        // deterministic, non-special start
        *xj = 1.0 + 0.1 * ((j as f64) * 0.618_033_988_75).fract();
    }
    for _ in 0..3 {
        x = solve_shifted(alpha, beta, shift, &x);
        let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut x {
            *v /= nrm;
        }
    }
    if x[0] < 0.0 {
        for v in &mut x {
            *v = -*v;
        }
    }
    x
}

/// Solves (T − shift I) x = b by Gaussian elimination with partial pivoting
/// specialised to tridiagonal structure.
fn solve_shifted(alpha: &[f64], beta: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    // rows stored as (main, upper1, upper2) after pivoting
    let mut d: Vec<f64> = alpha.iter().map(|a| a - shift).collect();
    let mut u1: Vec<f64> = (0..n).map(|j| if j + 1 < n { beta[j] } else { 0.0 }).collect();
    let mut u2 = vec![0.0; n];
    let mut l: Vec<f64> = (0..n).map(|j| if j > 0 { beta[j - 1] } else { 0.0 }).collect();
    let mut rhs = b.to_vec();
    let tiny = f64::EPSILON * alpha.iter().chain(beta).fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    for j in 0..n - 1 {
        let sub = l[j + 1];
        if sub.abs() > d[j].abs() {
            // swap rows j and j+1
            let (dj, u1j, u2j, rj) = (d[j], u1[j], u2[j], rhs[j]);
            d[j] = sub;
            u1[j] = d[j + 1];
            u2[j] = u1[j + 1];
            rhs[j] = rhs[j + 1];
            l[j + 1] = dj;
            d[j + 1] = u1j;
            u1[j + 1] = u2j;
            rhs[j + 1] = rj;
            let f = l[j + 1] / d[j];
            d[j + 1] -= f * u1[j];
            u1[j + 1] -= f * u2[j];
            rhs[j + 1] -= f * rhs[j];
        } else {
            if d[j] == 0.0 {
                d[j] = tiny;
            }
            let f = sub / d[j];
            d[j + 1] -= f * u1[j];
            u1[j + 1] -= f * u2[j];
            rhs[j + 1] -= f * rhs[j];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for j in (0..n).rev() {
        let mut s = rhs[j];
        if j + 1 < n {
            s -= u1[j] * x[j + 1];
        }
        if j + 2 < n {
            s -= u2[j] * x[j + 2];
        }
        x[j] = s / d[j];
    }
    x
}

/// Full eigendecomposition of a small tridiagonal matrix.
pub(crate) fn full_eigen(alpha: &[f64], beta: &[f64]) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let n = alpha.len();
    let mut t = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        t[(j, j)] = alpha[j];
        if j + 1 < n {
            t[(j, j + 1)] = beta[j];
            t[(j + 1, j)] = beta[j];
        }
    }
    SymmetricEigen::new(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_eigen() {
        let alpha = [2.0, -1.0, 0.5, 3.0, 0.0, 1.5];
        let beta = [0.7, 1.2, 0.01, 2.0, 0.3];
        let (theta, v) = lowest_eigenpair(&alpha, &beta);
        let e = full_eigen(&alpha, &beta);
        let min = e.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((theta - min).abs() < 1e-13);
        // residual of the returned vector
        let n = alpha.len();
        let mut r2 = 0.0;
        for j in 0..n {
            let mut tv = alpha[j] * v[j];
            if j > 0 {
                tv += beta[j - 1] * v[j - 1];
            }
            if j + 1 < n {
                tv += beta[j] * v[j + 1];
            }
            r2 += (tv - theta * v[j]).powi(2);
        }
        assert!(r2.sqrt() < 1e-12);
    }

    #[test]
    fn tiny_off_diagonal() {
        let (theta, v) = lowest_eigenpair(&[1.0, 0.0], &[1e-20]);
        assert!(theta.abs() < 1e-15);
        assert!((v[1].abs() - 1.0).abs() < 1e-12);
    }
}
