//! Explicit witness functions certifying one-sided spectral bounds: the
//! tensor hat psi_beta (upper bound on lambda_min) and the lacunary all-ones
//! block sums s-bar (lower bound on lambda_max).

use serde::Serialize;

use crate::assembly::GalerkinSystem;
use crate::error::{Error, Result};
use crate::index_set::{level_partition, maximal_elements, MultiIndex};
use crate::space::SparseGridSpace;
use crate::transform::HbCoeffs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    PsiBeta,
    Sbar,
    SbarSlice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundDirection {
    LowerOnLambdaMax,
    UpperOnLambdaMin,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub hb_sq: f64,
    pub h1_sq: f64,
    pub l2_sq: f64,
    pub rayleigh: f64,
    pub bound_direction: BoundDirection,
    /// The witness's block for psi_beta, or the slice blocks for s-bar.
    pub blocks: Vec<MultiIndex>,
}

/// HB coefficients of the tensor hat psi_beta (the nodal hat of V_beta at
/// the cube center) in the space over Lambda, which must contain beta.
/// Every block beta' <= beta with r components > 1 carries 2^r coefficients
/// equal to (-1/2)^r, from the univariate decomposition
/// phi(2^m t - 2^(m-1)) = phi_1 - sum_l (phi_left + phi_right)/2.
pub fn psi_hb_coeffs(space: &SparseGridSpace, beta: &MultiIndex) -> Result<HbCoeffs> {
    if !space.index_set().contains(beta) {
        return Err(Error::InvalidArgument(format!(
            "{:?} is not a member of the index set",
            beta
        )));
    }
    let d = beta.dim();
    let mut c = vec![0.0; space.dim()];
    for block in space.blocks() {
        if !block.le(beta) {
            continue;
        }
        // per-dimension contributions: level 1 keeps offset 0 with factor 1,
        // level m > 1 contributes the two hats adjacent to the center
        let choices: Vec<Vec<(u64, f64)>> = block
            .levels()
            .iter()
            .map(|&m| {
                if m == 1 {
                    vec![(0u64, 1.0)]
                } else {
                    let base = 1u64 << (m - 2);
                    vec![(base - 1, -0.5), (base, -0.5)]
                }
            })
            .collect();
        let mut offsets = vec![0usize; d];
        loop {
            let mut coeff = 1.0;
            let mut off = Vec::with_capacity(d);
            for j in 0..d {
                let (o, f) = choices[j][offsets[j]];
                coeff *= f;
                off.push(o);
            }
            let idx = space.position(block, &off).expect("offset in range");
            c[idx] = coeff;
            let mut j = d;
            let mut done = true;
            while j > 0 {
                j -= 1;
                if offsets[j] + 1 < choices[j].len() {
                    offsets[j] += 1;
                    done = false;
                    break;
                }
                offsets[j] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(HbCoeffs(c))
}

/// Exact HB norm of psi_beta:
/// sum over beta' <= beta of 2^(2|beta'|_inf) (2/3)^d 2^(-|beta'|_1) 2^r 4^(-r).
pub fn psi_hb_norm_sq_exact(beta: &MultiIndex) -> f64 {
    let d = beta.dim();
    let mut total = 0.0;
    let mut current = vec![1u32; d];
    loop {
        let l1: u64 = current.iter().map(|&b| b as u64).sum();
        let linf = *current.iter().max().unwrap();
        let r = current.iter().filter(|&&b| b > 1).count() as i32;
        total += 4.0f64.powi(linf as i32)
            * (2.0f64 / 3.0).powi(d as i32)
            * 0.5f64.powi(l1 as i32)
            * 2.0f64.powi(r)
            * 0.25f64.powi(r);
        let mut i = 0;
        loop {
            if i == d {
                return total;
            }
            if current[i] < beta.get(i) {
                current[i] += 1;
                break;
            }
            current[i] = 1;
            i += 1;
        }
    }
}

/// Witness report for psi_beta.
pub fn psi_norm_report(
    space: &SparseGridSpace,
    system: &GalerkinSystem,
    beta: &MultiIndex,
) -> Result<WitnessReport> {
    let c = psi_hb_coeffs(space, beta)?;
    let (l2_sq, h1_sq, hb_sq) = system.norms(&c)?;
    Ok(WitnessReport {
        kind: WitnessKind::PsiBeta,
        hb_sq,
        h1_sq,
        l2_sq,
        rayleigh: h1_sq / hb_sq,
        bound_direction: BoundDirection::UpperOnLambdaMin,
        blocks: vec![beta.clone()],
    })
}

/// Coefficient 1 on every basis function of every listed block (the
/// lacunary sum s-bar). Blocks must be members of the space's index set.
pub fn sbar_coeffs(space: &SparseGridSpace, blocks: &[MultiIndex]) -> Result<HbCoeffs> {
    let mut c = vec![0.0; space.dim()];
    for beta in blocks {
        let bi = space.block_position(beta).ok_or_else(|| {
            Error::InvalidArgument(format!("{:?} is not a block of the space", beta))
        })?;
        for i in space.block_range(bi) {
            c[i] = 1.0;
        }
    }
    Ok(HbCoeffs(c))
}

/// Certified lower bound on lambda_max: the Rayleigh quotient of the
/// lacunary sum over the largest one-sided slice Lambda_{k,i} of the
/// largest level slice (ties: smallest k, then smallest i).
pub fn witness_upper(space: &SparseGridSpace, system: &GalerkinSystem) -> Result<WitnessReport> {
    let partition = level_partition(space.index_set())?;
    let (k, slice) = partition
        .slices
        .iter()
        .enumerate()
        .map(|(i, s)| (i as u32 + 1, s))
        .max_by_key(|(k, s)| (s.len(), std::cmp::Reverse(*k)))
        .expect("non-empty set");
    let d = space.spatial_dim();
    let mut best: Option<(usize, Vec<MultiIndex>)> = None;
    for i in 0..d {
        let sub: Vec<MultiIndex> =
            slice.iter().filter(|b| b.get(i) == k).cloned().collect();
        let better = match &best {
            None => true,
            Some((len, _)) => sub.len() > *len,
        };
        if better {
            best = Some((sub.len(), sub));
        }
    }
    let (_, blocks) = best.expect("d >= 1");
    let c = sbar_coeffs(space, &blocks)?;
    let (l2_sq, h1_sq, hb_sq) = system.norms(&c)?;
    Ok(WitnessReport {
        kind: WitnessKind::SbarSlice,
        hb_sq,
        h1_sq,
        l2_sq,
        rayleigh: h1_sq / hb_sq,
        bound_direction: BoundDirection::LowerOnLambdaMax,
        blocks,
    })
}

/// Certified upper bound on lambda_min: the minimal psi_beta Rayleigh
/// quotient. The scan covers the maximal elements of Lambda, where the
/// ratio 2^(|beta|_1 - |beta|_inf) peaks; `full_scan` checks all of Lambda.
pub fn witness_lower(
    space: &SparseGridSpace,
    system: &GalerkinSystem,
    full_scan: bool,
) -> Result<WitnessReport> {
    let members = space.index_set().members();
    let candidates = if full_scan { members } else { maximal_elements(&members) };
    let mut best: Option<WitnessReport> = None;
    for beta in &candidates {
        let report = psi_norm_report(space, system, beta)?;
        let better = match &best {
            None => true,
            Some(b) => report.rayleigh < b.rayleigh,
        };
        if better {
            best = Some(report);
        }
    }
    best.ok_or(Error::EmptySet)
}
