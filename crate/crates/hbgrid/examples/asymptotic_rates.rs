//! Normalized condition numbers rho_k = kappa / (k^(d-1) 2^(k r)): the
//! growth rates r = 1/2 (sparse, d=2), 1 (full), 1/3 (energy a=1/2) leave
//! rho roughly constant across k.

use hbgrid::assembly::{assemble, DEFAULT_NNZ_CAP};
use hbgrid::spectral::{dense_extremal_eigs, lanczos_extremal_eigs, DEFAULT_DENSE_CAP};
use hbgrid::{
    make_energy_optimized, make_full_grid, make_standard_sparse, MonotoneIndexSet, MultiIndex,
    Ratio, SparseGridSpace,
};

fn kappa(set: MonotoneIndexSet) -> hbgrid::Result<(usize, f64)> {
    let space = SparseGridSpace::new(set)?;
    let system = assemble(&space, DEFAULT_NNZ_CAP)?;
    let report = if space.dim() <= DEFAULT_DENSE_CAP {
        dense_extremal_eigs(&system, DEFAULT_DENSE_CAP)?
    } else {
        lanczos_extremal_eigs(&system, 1e-8, 42, 5000)?
    };
    Ok((space.dim(), report.kappa))
}

fn main() -> hbgrid::Result<()> {
    let runs: [(&str, f64, Vec<u32>); 3] = [
        ("sparse d=2", 0.5, (3..=9).collect()),
        ("full d=2", 1.0, (2..=6).collect()),
        ("energy a=1/2 d=2", 1.0 / 3.0, (3..=9).collect()),
    ];
    for (name, rate, ks) in runs {
        println!("{name} (rate {rate:.4}):");
        for &k in &ks {
            let set = match name {
                "sparse d=2" => make_standard_sparse(k, 2)?,
                "full d=2" => make_full_grid(&MultiIndex::new(vec![k, k])?),
                _ => make_energy_optimized(k, 2, Ratio::new(1, 2)?)?,
            };
            let (dim, kap) = kappa(set)?;
            let rho = kap / (k as f64 * 2.0f64.powf(k as f64 * rate));
            println!("  k={k:<2} dim={dim:<6} kappa={kap:<12.4} rho={rho:.4}");
        }
    }
    Ok(())
}
