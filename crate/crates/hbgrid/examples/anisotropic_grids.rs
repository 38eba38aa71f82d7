//! Extreme anisotropy: for Lambda = closure{(k,1)} the smallest eigenvalue
//! of the scaled system does not deteriorate as k grows, in contrast to the
//! isotropic families.

use hbgrid::assembly::{assemble, DEFAULT_NNZ_CAP};
use hbgrid::spectral::{dense_extremal_eigs, DEFAULT_DENSE_CAP};
use hbgrid::{monotone_closure, MultiIndex, SparseGridSpace};

fn main() -> hbgrid::Result<()> {
    for k in 2..=10u32 {
        let set = monotone_closure(&[MultiIndex::new(vec![k, 1])?])?;
        let space = SparseGridSpace::new(set)?;
        let system = assemble(&space, DEFAULT_NNZ_CAP)?;
        let r = dense_extremal_eigs(&system, DEFAULT_DENSE_CAP)?;
        println!(
            "k={k:<3} dim={:<5} lambda_min={:.6} lambda_max={:.6} kappa={:.4}",
            space.dim(),
            r.lambda_min,
            r.lambda_max,
            r.kappa
        );
    }
    Ok(())
}
