//! Dense small-scale oracle for the L2-orthogonal decomposition into the
//! subspaces W_beta = tensor of (V_m minus V_{m-1}), the prewavelet norm,
//! and numerical estimates of its H1 norm-equivalence constants.
//!
//! Prewavelets are never written down as stencils: each univariate
//! complement space is orthogonalized densely against the coarser space
//! with exact 1D mass integrals, and the multivariate bases are their
//! tensor products.

use serde::Serialize;

use crate::assembly::{mass_1d, GalerkinSystem, UniHat};
use crate::error::{Error, Result};
use crate::index_set::MultiIndex;
use crate::lapack;
use crate::space::SparseGridSpace;
use crate::transform::HbCoeffs;

pub const DEFAULT_DENSE_CAP: usize = 2500;

/// Inverse of the flat enumeration of univariate hats: levels ascending,
/// offsets within a level, so position (2^(m-1) - 1) + o holds hat (m, o).
fn uni_hat_at(pos: usize) -> UniHat {
    let level = (pos + 1).ilog2() + 1;
    let offset = (pos + 1 - (1usize << (level - 1))) as u64;
    (level as u32, offset)
}

/// L2-orthonormal basis of the univariate complement W_m = V_m minus
/// V_{m-1}, as dense coefficient vectors over the hats of levels 1..=m.
/// Starts from the level-m hats, subtracts their projection onto V_{m-1},
/// and runs modified Gram-Schmidt in the L2 inner product.
fn univariate_pw_basis(m: u32) -> Result<Vec<Vec<f64>>> {
    let n = (1usize << m) - 1;
    let n_old = (1usize << (m - 1)) - 1;
    let n_new = n - n_old;
    let gram = |a: usize, b: usize| mass_1d(uni_hat_at(a), uni_hat_at(b));

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n_new);
    if m == 1 {
        vectors.push(vec![1.0]);
    } else {
        // projection of each new hat onto V_{m-1}: solve M_oo y = M_on e_i
        let mut m_oo = vec![0.0; n_old * n_old];
        for r in 0..n_old {
            for c in 0..n_old {
                m_oo[r * n_old + c] = gram(r, c);
            }
        }
        let factor = lapack::cholesky(m_oo, n_old)?;
        for i in 0..n_new {
            let rhs: Vec<f64> = (0..n_old).map(|r| gram(r, n_old + i)).collect();
            let y = factor.solve(&rhs)?;
            let mut w = vec![0.0; n];
            w[n_old + i] = 1.0;
            for (r, &yr) in y.iter().enumerate() {
                w[r] -= yr;
            }
            vectors.push(w);
        }
    }

    // modified Gram-Schmidt in the L2 inner product
    let inner = |a: &[f64], b: &[f64]| -> f64 {
        let mut total = 0.0;
        for (r, &ar) in a.iter().enumerate() {
            if ar == 0.0 {
                continue;
            }
            for (c, &bc) in b.iter().enumerate() {
                if bc != 0.0 {
                    total += ar * bc * gram(r, c);
                }
            }
        }
        total
    };
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for u in &ortho {
            let proj = inner(&v, u);
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= proj * b);
        }
        let norm_sq = inner(&v, &v);
        if norm_sq <= 1e-14 {
            return Err(Error::InvalidArgument(
                "rank deficiency in prewavelet orthogonalization".into(),
            ));
        }
        let scale = norm_sq.sqrt();
        v.iter_mut().for_each(|a| *a /= scale);
        ortho.push(v);
    }
    Ok(ortho)
}

/// An L2-orthonormal prewavelet basis of S_Lambda, grouped by block: column
/// q spans part of W_{block_of[q]} and is stored by its HB coordinates.
pub struct PwBasis {
    pub blocks: Vec<MultiIndex>,
    /// column -> index into `blocks`
    pub block_of: Vec<usize>,
    /// HB coordinates of each column over the space enumeration
    pub columns: Vec<Vec<f64>>,
}

pub fn pw_basis(space: &SparseGridSpace, cap: usize) -> Result<PwBasis> {
    let n = space.dim();
    if n > cap {
        return Err(Error::CapExceeded(format!("prewavelet oracle: dim {} > cap {}", n, cap)));
    }
    let d = space.spatial_dim();
    let max_level = space.index_set().k_lambda();
    let uni: Vec<Vec<Vec<f64>>> =
        (1..=max_level).map(univariate_pw_basis).collect::<Result<_>>()?;

    let mut blocks = Vec::new();
    let mut block_of = Vec::new();
    let mut columns = Vec::new();
    for beta in space.blocks() {
        let bi = blocks.len();
        blocks.push(beta.clone());
        let factors: Vec<&Vec<Vec<f64>>> =
            beta.levels().iter().map(|&m| &uni[(m - 1) as usize]).collect();
        // choose one univariate prewavelet per dimension
        let mut choice = vec![0usize; d];
        loop {
            // tensor the chosen univariate vectors into HB coordinates
            let mut col = vec![0.0; n];
            scatter_tensor(space, &factors, &choice, &mut col);
            columns.push(col);
            block_of.push(bi);
            let mut j = d;
            let mut done = true;
            while j > 0 {
                j -= 1;
                if choice[j] + 1 < factors[j].len() {
                    choice[j] += 1;
                    done = false;
                    break;
                }
                choice[j] = 0;
            }
            if done {
                break;
            }
        }
        // dim W_beta = 2^(|beta|_1 - d) = dim S_beta
        debug_assert_eq!(
            factors.iter().map(|f| f.len()).product::<usize>(),
            crate::basis::block_size(beta)
        );
    }
    Ok(PwBasis { blocks, block_of, columns })
}

/// Writes the tensor product of the chosen univariate vectors into `col`
/// over the space's HB enumeration.
fn scatter_tensor(
    space: &SparseGridSpace,
    factors: &[&Vec<Vec<f64>>],
    choice: &[usize],
    col: &mut [f64],
) {
    let d = factors.len();
    let vecs: Vec<&[f64]> = factors.iter().zip(choice).map(|(f, &c)| f[c].as_slice()).collect();
    let mut pos = vec![0usize; d];
    loop {
        let mut coeff = 1.0;
        for j in 0..d {
            coeff *= vecs[j][pos[j]];
        }
        if coeff != 0.0 {
            let mut levels = Vec::with_capacity(d);
            let mut offsets = Vec::with_capacity(d);
            for j in 0..d {
                let (l, o) = uni_hat_at(pos[j]);
                levels.push(l);
                offsets.push(o);
            }
            let block = MultiIndex::new(levels).expect("valid block");
            let idx = space.position(&block, &offsets).expect("block within space");
            col[idx] += coeff;
        }
        let mut j = d;
        let mut done = true;
        while j > 0 {
            j -= 1;
            if pos[j] + 1 < vecs[j].len() {
                pos[j] += 1;
                done = false;
                break;
            }
            pos[j] = 0;
        }
        if done {
            return;
        }
    }
}

/// The L2-orthogonal components w_beta of a function, as HB coefficient
/// vectors, together with their exact squared L2 norms.
#[derive(Clone, Debug)]
pub struct PwDecomposition {
    pub components: Vec<(MultiIndex, HbCoeffs)>,
    pub l2_sq: Vec<f64>,
}

pub fn pw_decompose(
    system: &GalerkinSystem,
    basis: &PwBasis,
    c: &HbCoeffs,
) -> Result<PwDecomposition> {
    let n = system.dim();
    if c.0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: c.0.len() });
    }
    let mut mc = vec![0.0; n];
    system.mass.matvec(&c.0, &mut mc);
    let mut per_block: Vec<Vec<f64>> = basis.blocks.iter().map(|_| vec![0.0; n]).collect();
    let mut l2_sq = vec![0.0; basis.blocks.len()];
    for (q, col) in basis.columns.iter().enumerate() {
        let y: f64 = col.iter().zip(&mc).map(|(a, b)| a * b).sum();
        let bi = basis.block_of[q];
        l2_sq[bi] += y * y;
        let target = &mut per_block[bi];
        target.iter_mut().zip(col).for_each(|(t, &v)| *t += y * v);
    }
    let components = basis
        .blocks
        .iter()
        .cloned()
        .zip(per_block.into_iter().map(HbCoeffs))
        .collect();
    Ok(PwDecomposition { components, l2_sq })
}

/// ||v||_PW^2 = sum over beta of 2^(2|beta|_inf) ||w_beta||_L2^2.
pub fn pw_norm_sq(dec: &PwDecomposition) -> f64 {
    dec.components
        .iter()
        .zip(&dec.l2_sq)
        .map(|((beta, _), &l2)| 4.0f64.powi(beta.linf() as i32) * l2)
        .sum()
}

/// Extremal generalized eigenvalues of the pencil (G, P), where P is the
/// PW-norm Gram matrix in HB coordinates: the measured constants of the
/// two-sided H1 / PW norm equivalence.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PwConstants {
    pub c_pw_est: f64,
    pub c_pw_max_est: f64,
}

pub fn estimate_pw_constants(
    system: &GalerkinSystem,
    basis: &PwBasis,
    cap: usize,
) -> Result<PwConstants> {
    let n = system.dim();
    if n > cap {
        return Err(Error::CapExceeded(format!("pw pencil: dim {} > cap {}", n, cap)));
    }
    // P = (M Q) Omega (M Q)^T with Q the prewavelet columns
    let m_dense = system.mass.to_dense();
    let mut q = vec![0.0; n * n];
    for (j, col) in basis.columns.iter().enumerate() {
        for i in 0..n {
            q[i * n + j] = col[i];
        }
    }
    let mq = lapack::matmul(&m_dense, &q, n, n, n);
    let mut mq_weighted = mq.clone();
    for j in 0..n {
        let w = 4.0f64.powi(basis.blocks[basis.block_of[j]].linf() as i32);
        for i in 0..n {
            mq_weighted[i * n + j] *= w;
        }
    }
    // P = mq_weighted * mq^T
    let mut mq_t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            mq_t[j * n + i] = mq[i * n + j];
        }
    }
    let mut p = lapack::matmul(&mq_weighted, &mq_t, n, n, n);
    let mut g = system.stiffness.to_dense();
    let vals = lapack::sym_eigvals_gen(&mut g, &mut p, n)?;
    Ok(PwConstants { c_pw_est: vals[0], c_pw_max_est: vals[n - 1] })
}
