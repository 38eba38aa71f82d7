//! Explicit Rayleigh-quotient witnesses: the tensor hat psi_beta presses
//! lambda_min from above, the lacunary block sum s-bar presses lambda_max
//! from below. Both quotients must land inside the computed spectrum.

use hbgrid::assembly::{assemble, DEFAULT_NNZ_CAP};
use hbgrid::extremal::{witness_lower, witness_upper};
use hbgrid::spectral::{dense_extremal_eigs, DEFAULT_DENSE_CAP};
use hbgrid::{make_standard_sparse, SparseGridSpace};

fn main() -> hbgrid::Result<()> {
    for k in 3..=7u32 {
        let space = SparseGridSpace::new(make_standard_sparse(k, 2)?)?;
        let system = assemble(&space, DEFAULT_NNZ_CAP)?;
        let spectrum = dense_extremal_eigs(&system, DEFAULT_DENSE_CAP)?;
        let sbar = witness_upper(&space, &system)?;
        let psi = witness_lower(&space, &system, false)?;
        println!(
            "k={k}: lambda in [{:.5}, {:.5}]   psi({:?}) = {:.5}   sbar({} blocks) = {:.5}",
            spectrum.lambda_min,
            spectrum.lambda_max,
            psi.blocks[0],
            psi.rayleigh,
            sbar.blocks.len(),
            sbar.rayleigh,
        );
        assert!(psi.rayleigh >= spectrum.lambda_min - 1e-10);
        assert!(sbar.rayleigh <= spectrum.lambda_max + 1e-10);
    }
    Ok(())
}
