//! Hierarchization and dehierarchization on generalized sparse grids via
//! unidirectional one-dimensional sweeps, plus multi-linear interpolation
//! onto full grids. The sweeps are valid exactly because the index set is
//! downward closed: every pole carries a complete 1D hierarchy.

use std::collections::HashMap;

use crate::basis::{evaluate, Dyadic};
use crate::error::{Error, Result};
use crate::index_set::{make_full_grid, MultiIndex};
use crate::space::SparseGridSpace;

/// Coefficients over the enumerated hierarchical basis of a space
/// (hierarchical surpluses).
#[derive(Clone, Debug, PartialEq)]
pub struct HbCoeffs(pub Vec<f64>);

/// Values at the sparse grid points, in the same enumeration order as the
/// basis functions they belong to.
#[derive(Clone, Debug, PartialEq)]
pub struct NodalValues(pub Vec<f64>);

fn check_len(space: &SparseGridSpace, len: usize) -> Result<()> {
    if len != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: len });
    }
    Ok(())
}

/// Groups the grid points into 1D "poles" along dimension `dim`: all points
/// sharing their coordinates in the other dimensions. Each pole lists
/// (global index, coordinate in `dim`) and a lookup by coordinate.
fn poles(space: &SparseGridSpace, dim: usize) -> Vec<(Vec<usize>, HashMap<Dyadic, usize>)> {
    let mut groups: HashMap<Vec<Dyadic>, Vec<usize>> = HashMap::new();
    for i in 0..space.dim() {
        let node = space.node(i);
        let mut key = Vec::with_capacity(node.len() - 1);
        for (j, &c) in node.iter().enumerate() {
            if j != dim {
                key.push(c);
            }
        }
        groups.entry(key).or_default().push(i);
    }
    groups
        .into_values()
        .map(|mut members| {
            // deepest level first, so parents (coarser) are processed last
            members.sort_by_key(|&i| std::cmp::Reverse(space.node(i)[dim].level));
            let lookup: HashMap<Dyadic, usize> =
                members.iter().map(|&i| (space.node(i)[dim], i)).collect();
            (members, lookup)
        })
        .collect()
}

/// Nodal values -> hierarchical surpluses.
pub fn hierarchize(space: &SparseGridSpace, v: &NodalValues) -> Result<HbCoeffs> {
    check_len(space, v.0.len())?;
    let mut values = v.0.clone();
    for dim in 0..space.spatial_dim() {
        for (members, lookup) in poles(space, dim) {
            // members are ordered fine-to-coarse; parents still hold the
            // values of the previous sweep when a node is updated
            for &i in &members {
                let node = space.node(i)[dim];
                if node.level == 1 {
                    continue;
                }
                let (left, right) = node.parents();
                let mut parent_sum = 0.0;
                for p in [left, right] {
                    if !p.is_boundary() {
                        parent_sum += values[lookup[&p]];
                    }
                }
                values[i] -= 0.5 * parent_sum;
            }
        }
    }
    Ok(HbCoeffs(values))
}

/// Hierarchical surpluses -> nodal values (exact inverse of `hierarchize`).
pub fn dehierarchize(space: &SparseGridSpace, c: &HbCoeffs) -> Result<NodalValues> {
    check_len(space, c.0.len())?;
    let mut values = c.0.clone();
    for dim in 0..space.spatial_dim() {
        for (members, lookup) in poles(space, dim) {
            // coarse-to-fine: parents already hold nodal values in `dim`
            for &i in members.iter().rev() {
                let node = space.node(i)[dim];
                if node.level == 1 {
                    continue;
                }
                let (left, right) = node.parents();
                let mut parent_sum = 0.0;
                for p in [left, right] {
                    if !p.is_boundary() {
                        parent_sum += values[lookup[&p]];
                    }
                }
                values[i] += 0.5 * parent_sum;
            }
        }
    }
    Ok(NodalValues(values))
}

/// Point evaluation of sum c_alpha phi_alpha. At most one function per
/// block is nonzero at x, so the cost is one term per block.
pub fn evaluate_function(space: &SparseGridSpace, c: &HbCoeffs, x: &[f64]) -> Result<f64> {
    check_len(space, c.0.len())?;
    if x.len() != space.spatial_dim() {
        return Err(Error::DimensionMismatch { expected: space.spatial_dim(), got: x.len() });
    }
    let mut total = 0.0;
    for (bi, beta) in space.blocks().iter().enumerate() {
        let offsets: Vec<u64> = beta
            .levels()
            .iter()
            .zip(x)
            .map(|(&level, &t)| {
                let cells = 1u64 << (level - 1);
                ((t * cells as f64).floor() as i64).clamp(0, cells as i64 - 1) as u64
            })
            .collect();
        let idx = space.position(beta, &offsets).expect("offset in range");
        let coeff = c.0[idx];
        if coeff != 0.0 {
            let f = &space.functions()[idx];
            total += coeff * evaluate(f, x);
        }
        let _ = bi;
    }
    Ok(total)
}

/// Multi-linear interpolation I_beta: samples the represented function at
/// the full grid points Sigma_beta and hierarchizes on the full grid over
/// closure{beta}. Returns the target space together with the coefficients.
pub fn interpolate(
    space: &SparseGridSpace,
    c: &HbCoeffs,
    beta_target: &MultiIndex,
) -> Result<(SparseGridSpace, HbCoeffs)> {
    check_len(space, c.0.len())?;
    let target = SparseGridSpace::new(make_full_grid(beta_target))?;
    let mut values = Vec::with_capacity(target.dim());
    for i in 0..target.dim() {
        let x: Vec<f64> = target.node(i).iter().map(|d| d.value()).collect();
        values.push(evaluate_function(space, c, &x)?);
    }
    let coeffs = hierarchize(&target, &NodalValues(values))?;
    Ok((target, coeffs))
}
