//! Condition numbers of the scaled hierarchical-basis system for the three
//! grid families, next to the combinatorial sandwich.

use hbgrid::assembly::{assemble, DEFAULT_NNZ_CAP};
use hbgrid::spectral::{dense_extremal_eigs, sandwich_check, DEFAULT_DENSE_CAP};
use hbgrid::{
    bounds_quantities, make_energy_optimized, make_full_grid, make_standard_sparse, MultiIndex,
    Ratio, SparseGridSpace,
};

fn main() -> hbgrid::Result<()> {
    println!("{:<22} {:>6} {:>12} {:>12} {:>10}", "space", "dim", "kappa", "lower", "upper");
    let a = Ratio::new(1, 2)?;
    for k in 2..=6u32 {
        let families = [
            (format!("sparse k={k}"), make_standard_sparse(k, 2)?),
            (format!("full k={k}"), make_full_grid(&MultiIndex::new(vec![k, k])?)),
            (format!("energy a=1/2 k={k}"), make_energy_optimized(k, 2, a)?),
        ];
        for (name, set) in families {
            let bounds = bounds_quantities(&set)?;
            let space = SparseGridSpace::new(set)?;
            let system = assemble(&space, DEFAULT_NNZ_CAP)?;
            let report = dense_extremal_eigs(&system, DEFAULT_DENSE_CAP)?;
            let s = sandwich_check(&bounds, &report);
            println!(
                "{:<22} {:>6} {:>12.4} {:>12.1} {:>10.1}",
                name,
                space.dim(),
                report.kappa,
                s.lower,
                s.upper
            );
        }
    }
    Ok(())
}
