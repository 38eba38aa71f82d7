//! Extreme eigenvalues and condition number of the preconditioned operator
//! D^(-1/2) G D^(-1/2): a dense oracle and a Lanczos path with full
//! reorthogonalization (shift-invert for the smallest eigenvalue), plus the
//! two-sided combinatorial sandwich report.

use num_bigint::BigUint;
use serde::Serialize;

use crate::assembly::GalerkinSystem;
use crate::error::{Error, Result};
use crate::index_set::BoundsReport;
use crate::lapack;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub kappa: f64,
    pub method: Method,
    pub residual_tol: f64,
    pub iterations: usize,
}

pub const DEFAULT_DENSE_CAP: usize = 4000;
pub const DEFAULT_LANCZOS_TOL: f64 = 1e-8;
pub const DEFAULT_LANCZOS_MAXIT: usize = 5000;
pub const DEFAULT_SEED: u64 = 42;

/// Full symmetric eigensolve of the preconditioned operator.
pub fn dense_extremal_eigs(system: &GalerkinSystem, cap: usize) -> Result<SpectralReport> {
    let n = system.dim();
    if n > cap {
        return Err(Error::CapExceeded(format!("dense eigensolve: dim {} > cap {}", n, cap)));
    }
    let mut a = system.preconditioned_dense();
    let w = lapack::sym_eigvals(&mut a, n)?;
    let lambda_min = w[0];
    let lambda_max = w[n - 1];
    Ok(SpectralReport {
        lambda_min,
        lambda_max,
        kappa: lambda_max / lambda_min,
        method: Method::Dense,
        residual_tol: 0.0,
        iterations: 0,
    })
}

/// Lanczos with full reorthogonalization for the largest eigenvalue of a
/// symmetric positive definite operator. Returns (lambda, ritz vector,
/// iterations). Convergence: ||A x - lambda x|| / lambda <= tol.
fn lanczos_largest<F>(
    apply: F,
    n: usize,
    tol: f64,
    seed: u64,
    maxit: usize,
) -> Result<(f64, Vec<f64>, usize)>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= norm);

    let mut basis: Vec<Vec<f64>> = vec![q.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let m_max = maxit.min(n);
    let mut best = 0.0;

    for j in 0..m_max {
        let mut w = apply(&basis[j]);
        let alpha: f64 = w.iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
        alphas.push(alpha);
        // full reorthogonalization against the whole basis, twice
        for _ in 0..2 {
            for qk in &basis {
                let proj: f64 = w.iter().zip(qk).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(qk).for_each(|(a, b)| *a -= proj * b);
            }
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();

        // Ritz values of the tridiagonal section
        let k = alphas.len();
        let mut t = vec![0.0; k * k];
        for i in 0..k {
            t[i * k + i] = alphas[i];
            if i + 1 < k {
                t[i * k + i + 1] = betas[i];
                t[(i + 1) * k + i] = betas[i];
            }
        }
        let (vals, vecs) = lapack::sym_eig(&mut t, k)?;
        let theta = vals[k - 1];
        best = theta;
        let s = &vecs[(k - 1) * k..k * k];
        // residual estimate |beta * s_k|, then an explicit check
        if beta * s[k - 1].abs() <= tol * theta || beta <= f64::EPSILON * theta || k == n {
            let mut x = vec![0.0; n];
            for (i, qk) in basis.iter().enumerate() {
                let c = s[i];
                x.iter_mut().zip(qk).for_each(|(a, b)| *a += c * b);
            }
            let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= xn);
            let ax = apply(&x);
            let res: f64 = ax
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - theta * b) * (a - theta * b))
                .sum::<f64>()
                .sqrt();
            if res <= tol * theta || k == n {
                return Ok((theta, x, k));
            }
        }
        if j + 1 == m_max {
            break;
        }
        betas.push(beta);
        let mut next = w;
        next.iter_mut().for_each(|x| *x /= beta);
        basis.push(next);
    }
    Err(Error::NoConvergence { iterations: m_max, best_estimate: best })
}

/// Extremal eigenvalues by Lanczos: lambda_max on the operator itself,
/// lambda_min by shift-invert through a dense Cholesky factorization of the
/// preconditioned matrix (robust for clustered small eigenvalues at desk
/// scale).
pub fn lanczos_extremal_eigs(
    system: &GalerkinSystem,
    tol: f64,
    seed: u64,
    maxit: usize,
) -> Result<SpectralReport> {
    let n = system.dim();
    if n == 1 {
        let y = system.preconditioned_apply(&[1.0]);
        return Ok(SpectralReport {
            lambda_min: y[0],
            lambda_max: y[0],
            kappa: 1.0,
            method: Method::Lanczos,
            residual_tol: tol,
            iterations: 1,
        });
    }

    let (lambda_max, _, it_max) =
        lanczos_largest(|x| system.preconditioned_apply(x), n, tol, seed, maxit)?;

    let factor = lapack::cholesky(system.preconditioned_dense(), n)?;
    let (mu, x_min, it_min) =
        lanczos_largest(|x| factor.solve(x).expect("factor solve"), n, tol, seed ^ 1, maxit)?;
    let lambda_min = 1.0 / mu;
    // confirm on the original operator
    let ax = system.preconditioned_apply(&x_min);
    let res: f64 = ax
        .iter()
        .zip(&x_min)
        .map(|(a, b)| (a - lambda_min * b) * (a - lambda_min * b))
        .sum::<f64>()
        .sqrt();
    if res > 10.0 * tol * lambda_max {
        return Err(Error::NoConvergence { iterations: it_min, best_estimate: lambda_min });
    }

    Ok(SpectralReport {
        lambda_min,
        lambda_max,
        kappa: lambda_max / lambda_min,
        method: Method::Lanczos,
        residual_tol: tol,
        iterations: it_max + it_min,
    })
}

/// Condition number against the two-sided combinatorial bounds:
/// lower = n_Lambda * n~'_Lambda, upper = n_Lambda * n~_Lambda.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub kappa: f64,
    pub lower: f64,
    pub upper: f64,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
}

pub fn sandwich_check(bounds: &BoundsReport, report: &SpectralReport) -> SandwichReport {
    let lower = biguint_to_f64(&(BigUint::from(bounds.n_lambda) * &bounds.n_tilde_prime));
    let upper = biguint_to_f64(&(BigUint::from(bounds.n_lambda) * &bounds.n_tilde));
    SandwichReport {
        kappa: report.kappa,
        lower,
        upper,
        ratio_lower: report.kappa / lower,
        ratio_upper: report.kappa / upper,
    }
}

fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_string().parse::<f64>().unwrap_or(f64::INFINITY)
}
