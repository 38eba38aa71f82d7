//! Solve -Laplace u = f on the unit square with PCG on the scaled system.
//! Iteration counts track sqrt(kappa), and the discrete solution converges
//! to the known solution for f = 2 pi^2 sin(pi x) sin(pi y).

use hbgrid::assembly::{assemble, DEFAULT_NNZ_CAP};
use hbgrid::solver::{model_rhs, pcg, ModelRhs};
use hbgrid::spectral::{dense_extremal_eigs, DEFAULT_DENSE_CAP};
use hbgrid::transform::evaluate_function;
use hbgrid::{make_standard_sparse, SparseGridSpace};

fn main() -> hbgrid::Result<()> {
    let pi = std::f64::consts::PI;
    for k in 3..=8u32 {
        let space = SparseGridSpace::new(make_standard_sparse(k, 2)?)?;
        let system = assemble(&space, DEFAULT_NNZ_CAP)?;
        let b: Vec<f64> = model_rhs(&space, ModelRhs::ProductSine)
            .iter()
            .map(|v| 2.0 * pi * pi * v)
            .collect();
        let (x, stats) = pcg(&system, &b, 1e-8, 10_000)?;
        let err = (evaluate_function(&space, &x, &[0.5, 0.5])? - 1.0).abs();
        let line = format!(
            "k={k} dim={:<5} iters={:<3} center error={err:.2e}",
            space.dim(),
            stats.iterations
        );
        if space.dim() <= DEFAULT_DENSE_CAP {
            let kappa = dense_extremal_eigs(&system, DEFAULT_DENSE_CAP)?.kappa;
            println!("{line}  iters/sqrt(kappa)={:.2}", stats.iterations as f64 / kappa.sqrt());
        } else {
            println!("{line}");
        }
    }
    Ok(())
}
