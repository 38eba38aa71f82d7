//! Norm-equivalence constants of the L2-orthogonal (prewavelet) splitting:
//! the extreme generalized eigenvalues of the stiffness matrix against the
//! weighted prewavelet Gram matrix stay bounded as the level grows.

use hbgrid::assembly::{assemble, DEFAULT_NNZ_CAP};
use hbgrid::prewavelet::{estimate_pw_constants, pw_basis, DEFAULT_DENSE_CAP};
use hbgrid::{make_full_grid, make_standard_sparse, MultiIndex, SparseGridSpace};

fn main() -> hbgrid::Result<()> {
    println!("standard sparse grids, d=2:");
    for k in 2..=6u32 {
        let space = SparseGridSpace::new(make_standard_sparse(k, 2)?)?;
        let system = assemble(&space, DEFAULT_NNZ_CAP)?;
        let basis = pw_basis(&space, DEFAULT_DENSE_CAP)?;
        let c = estimate_pw_constants(&system, &basis, DEFAULT_DENSE_CAP)?;
        println!(
            "  k={k} dim={:<5} c_pw={:.5}  C_pw={:.5}  ratio={:.3}",
            space.dim(),
            c.c_pw_est,
            c.c_pw_max_est,
            c.c_pw_max_est / c.c_pw_est
        );
    }
    println!("full grids, d=2:");
    for k in 2..=5u32 {
        let space = SparseGridSpace::new(make_full_grid(&MultiIndex::new(vec![k, k])?))?;
        let system = assemble(&space, DEFAULT_NNZ_CAP)?;
        let basis = pw_basis(&space, DEFAULT_DENSE_CAP)?;
        let c = estimate_pw_constants(&system, &basis, DEFAULT_DENSE_CAP)?;
        println!(
            "  k={k} dim={:<5} c_pw={:.5}  C_pw={:.5}  ratio={:.3}",
            space.dim(),
            c.c_pw_est,
            c.c_pw_max_est,
            c.c_pw_max_est / c.c_pw_est
        );
    }
    Ok(())
}
