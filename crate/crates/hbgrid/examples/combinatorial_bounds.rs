//! The combinatorial quantities n, n~, n~' for a few index sets, including
//! the two-sided gap example where upper and lower bound scale differently.

use hbgrid::{bounds_quantities, gap_example, make_standard_sparse, MonotoneIndexSet};
use hbgrid::index_set::bounds_quantities_of;

fn show(name: &str, set: &MonotoneIndexSet) -> hbgrid::Result<()> {
    let b = bounds_quantities(set)?;
    println!(
        "{:<16} |Lambda|={:<5} n={:<4} n~={:<8} n~'={}",
        name,
        set.len(),
        b.n_lambda,
        b.n_tilde,
        b.n_tilde_prime
    );
    Ok(())
}

fn main() -> hbgrid::Result<()> {
    for k in [3, 5, 7] {
        show(&format!("sparse k={k} d=2"), &make_standard_sparse(k, 2)?)?;
    }
    show("sparse k=4 d=3", &make_standard_sparse(4, 3)?)?;

    println!();
    println!("gap family: upper bound n*n~ grows with k, lower bound n*n~' stays flat");
    for k in 2..=5u32 {
        let (closure, literal) = gap_example(k, 2)?;
        let b = bounds_quantities(&closure)?;
        let lit = bounds_quantities_of(&literal)?;
        println!(
            "k={k}: closure n={} n~={} n~'={} | literal slice n={} n~={}",
            b.n_lambda, b.n_tilde, b.n_tilde_prime, lit.n_lambda, lit.n_tilde
        );
    }
    Ok(())
}
