//! Preconditioned conjugate gradients on the Galerkin system with the
//! scaling diagonal as preconditioner, plus model right-hand sides.

use serde::Serialize;

use crate::assembly::GalerkinSystem;
use crate::error::{Error, Result};
use crate::space::SparseGridSpace;
use crate::transform::HbCoeffs;

pub const DEFAULT_PCG_TOL: f64 = 1e-10;
pub const DEFAULT_PCG_MAXIT: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Solves G x = b with CG preconditioned by the scaling diagonal D.
/// Stops when the D^{-1}-weighted residual norm drops below `tol` times
/// its initial value.
pub fn pcg(
    system: &GalerkinSystem,
    b: &[f64],
    tol: f64,
    maxit: usize,
) -> Result<(HbCoeffs, SolveStats)> {
    let n = system.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("pcg tolerance must be positive".into()));
    }
    let inv_d: Vec<f64> = system.scaling.iter().map(|&d| 1.0 / d).collect();

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_d).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let target = tol * tol * rz;
    if rz <= 0.0 {
        return Ok((
            HbCoeffs(x),
            SolveStats { iterations: 0, residual: 0.0, converged: true },
        ));
    }

    let mut gp = vec![0.0; n];
    let mut iterations = 0;
    while iterations < maxit {
        system.stiffness.matvec(&p, &mut gp);
        let p_gp: f64 = p.iter().zip(&gp).map(|(a, b)| a * b).sum();
        if p_gp <= 0.0 {
            return Err(Error::SolverStalled {
                iterations,
                residual: (rz / (target / (tol * tol))).sqrt(),
            });
        }
        let alpha = rz / p_gp;
        x.iter_mut().zip(&p).for_each(|(a, b)| *a += alpha * b);
        r.iter_mut().zip(&gp).for_each(|(a, b)| *a -= alpha * b);
        z.iter_mut().zip(r.iter().zip(&inv_d)).for_each(|(a, (b, c))| *a = b * c);
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        iterations += 1;
        if rz_new <= target {
            return Ok((
                HbCoeffs(x),
                SolveStats {
                    iterations,
                    residual: (rz_new / (target / (tol * tol))).max(0.0).sqrt(),
                    converged: true,
                },
            ));
        }
        let beta = rz_new / rz;
        p.iter_mut().zip(&z).for_each(|(a, b)| *a = b + beta * *a);
        rz = rz_new;
    }
    Err(Error::NoConvergence {
        iterations,
        best_estimate: (rz / (target / (tol * tol))).max(0.0).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelRhs {
    /// f == 1: b_alpha = integral of the basis hat = 2^{-|beta|_1}.
    ConstantOne,
    /// f(x) = prod_j sin(pi x_j).
    ProductSine,
}

impl ModelRhs {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "one" | "constant_one" => Ok(ModelRhs::ConstantOne),
            "sine" | "product_sine" => Ok(ModelRhs::ProductSine),
            other => Err(Error::Parse(format!("unknown rhs '{}'", other))),
        }
    }
}

pub fn model_rhs(space: &SparseGridSpace, kind: ModelRhs) -> Vec<f64> {
    match kind {
        ModelRhs::ConstantOne => space
            .functions()
            .iter()
            .map(|f| 2.0f64.powi(-(f.block.l1() as i32)))
            .collect(),
        ModelRhs::ProductSine => space
            .functions()
            .iter()
            .map(|f| {
                f.block
                    .levels()
                    .iter()
                    .zip(&f.offsets)
                    .map(|(&k, &i)| sine_hat_integral(k, i))
                    .product()
            })
            .collect(),
    }
}

/// integral over [0,1] of sin(pi t) * hat_{k,i}(t), by 6-point Gauss on each
/// of the hat's two linear pieces (exact to machine precision at these sizes)
fn sine_hat_integral(k: u32, i: u64) -> f64 {
    let h = 2.0f64.powi(-(k as i32));
    let center = (2 * i + 1) as f64 * h;
    let mut total = 0.0;
    for (lo, hi) in [(center - h, center), (center, center + h)] {
        total += gauss6(lo, hi, |t| {
            let v = 1.0 - (t - center).abs() / h;
            (std::f64::consts::PI * t).sin() * v
        });
    }
    total
}

fn gauss6(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    const X: [f64; 3] = [0.238619186083196909, 0.661209386466264514, 0.932469514203152028];
    const W: [f64; 3] = [0.467913934572691047, 0.360761573048138608, 0.171324492379170345];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut total = 0.0;
    for j in 0..3 {
        total += W[j] * (f(mid + half * X[j]) + f(mid - half * X[j]));
    }
    total * half
}
