//! Sparse grid interpolation: sample a smooth function at the grid nodes,
//! hierarchize to surplus coefficients, evaluate anywhere. Shows how much a
//! sparse grid saves over the full grid at comparable accuracy.

use hbgrid::space::space_dimension;
use hbgrid::transform::{evaluate_function, hierarchize, NodalValues};
use hbgrid::{make_full_grid, make_standard_sparse, MultiIndex, SparseGridSpace};

fn f(p: &[f64]) -> f64 {
    (std::f64::consts::PI * p[0]).sin() * (std::f64::consts::PI * p[1]).sin()
}

fn max_error(space: &SparseGridSpace) -> hbgrid::Result<f64> {
    let samples = NodalValues(
        (0..space.dim())
            .map(|i| {
                let p: Vec<f64> = space.node(i).iter().map(|c| c.value()).collect();
                f(&p)
            })
            .collect(),
    );
    let c = hierarchize(space, &samples)?;
    let mut worst = 0.0f64;
    for i in 0..40 {
        for j in 0..40 {
            let p = [(i as f64 + 0.5) / 40.0, (j as f64 + 0.5) / 40.0];
            worst = worst.max((evaluate_function(space, &c, &p)? - f(&p)).abs());
        }
    }
    Ok(worst)
}

fn main() -> hbgrid::Result<()> {
    println!("{:<4} {:>10} {:>12} {:>10} {:>12}", "k", "sparse dim", "sparse err", "full dim", "full err");
    for k in 2..=8u32 {
        let sparse = SparseGridSpace::new(make_standard_sparse(k, 2)?)?;
        let sparse_err = max_error(&sparse)?;
        let full_set = make_full_grid(&MultiIndex::new(vec![k, k])?);
        let full_dim = space_dimension(&full_set);
        let full_err = if k <= 6 {
            format!("{:.3e}", max_error(&SparseGridSpace::new(full_set)?)?)
        } else {
            "-".into()
        };
        println!(
            "{:<4} {:>10} {:>12.3e} {:>10} {:>12}",
            k,
            sparse.dim(),
            sparse_err,
            full_dim,
            full_err
        );
    }
    Ok(())
}
