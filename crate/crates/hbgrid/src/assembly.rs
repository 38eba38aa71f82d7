//! Exact Galerkin stiffness and mass matrices of the Dirichlet Laplacian on
//! S_Lambda in the hierarchical basis, the block-constant scaling diagonal,
//! and the three norms (L2, H01, HB).
//!
//! All 1D integrals have closed forms: hierarchical hats on different levels
//! are H1-orthogonal, and a coarser hat is linear on the support of a finer
//! one, which collapses the mass integral to a point value.

use std::io::Write;

use crate::error::{Error, Result};
use crate::space::SparseGridSpace;
use crate::transform::HbCoeffs;

/// Univariate hierarchical hat identifier.
pub type UniHat = (u32, u64); // (level, offset)

/// Exact integral of phi_a * phi_b over [0,1].
pub fn mass_1d(a: UniHat, b: UniHat) -> f64 {
    if a.0 == b.0 {
        if a.1 == b.1 {
            // int phi^2 = (2/3) h
            return (2.0 / 3.0) * 0.5f64.powi(a.0 as i32);
        }
        return 0.0; // disjoint supports within a level
    }
    let (coarse, fine) = if a.0 < b.0 { (a, b) } else { (b, a) };
    let shift = fine.0 - coarse.0;
    let node_fine = 2 * fine.1 + 1; // in units of 2^-fine.0
    let lo = 2 * coarse.1 << shift;
    let hi = (2 * coarse.1 + 2) << shift;
    if node_fine <= lo || node_fine >= hi {
        return 0.0;
    }
    // the coarse hat is linear on the fine support (its kink is a grid
    // point of even index at the fine level), so the integral is
    // phi_coarse(node_fine) * h_fine
    let val = 1.0 - (node_fine as f64 / (1u64 << shift) as f64 - (2 * coarse.1 + 1) as f64).abs();
    val * 0.5f64.powi(fine.0 as i32)
}

/// Exact integral of phi_a' * phi_b' over [0,1]: the 1D hierarchical basis
/// is H1-orthogonal across levels, so the matrix is diagonal.
pub fn stiffness_1d(a: UniHat, b: UniHat) -> f64 {
    if a == b {
        2.0f64.powi(a.0 as i32 + 1)
    } else {
        0.0
    }
}

/// Symmetric sparse matrix in CSR layout; both triangles are stored so that
/// the matvec is a plain row sweep.
#[derive(Clone, Debug)]
pub struct SymmetricSparseMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<u32>,
    pub val: Vec<f64>,
}

impl SymmetricSparseMatrix {
    pub fn nnz(&self) -> usize {
        self.val.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for r in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.val[k] * x[self.col[k] as usize];
            }
            y[r] = acc;
        }
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for r in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.val[k] * x[self.col[k] as usize];
            }
            total += x[r] * acc;
        }
        total
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.n * self.n];
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                dense[r * self.n + self.col[k] as usize] = self.val[k];
            }
        }
        dense
    }

    /// Coordinate text export: one `row col value` triple per line, 0-based,
    /// shortest round-trip decimals.
    pub fn write_coo<W: Write>(&self, mut out: W) -> Result<()> {
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                writeln!(out, "{} {} {}", r, self.col[k], self.val[k])?;
            }
        }
        Ok(())
    }
}

/// Stiffness G, mass M, and the scaling diagonal d_alpha =
/// 2^(2|beta|_inf) ||phi_alpha||_L2^2 of the hierarchical splitting.
pub struct GalerkinSystem {
    pub stiffness: SymmetricSparseMatrix,
    pub mass: SymmetricSparseMatrix,
    pub scaling: Vec<f64>,
}

pub const DEFAULT_NNZ_CAP: usize = 200_000_000;

impl GalerkinSystem {
    pub fn dim(&self) -> usize {
        self.scaling.len()
    }

    /// y = D^(-1/2) G D^(-1/2) x, the preconditioned operator whose spectrum
    /// carries the splitting's stability constants.
    pub fn preconditioned_apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut scaled = vec![0.0; n];
        for i in 0..n {
            scaled[i] = x[i] / self.scaling[i].sqrt();
        }
        let mut y = vec![0.0; n];
        self.stiffness.matvec(&scaled, &mut y);
        for i in 0..n {
            y[i] /= self.scaling[i].sqrt();
        }
        y
    }

    /// Dense row-major D^(-1/2) G D^(-1/2).
    pub fn preconditioned_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let g = &self.stiffness;
        let mut dense = vec![0.0; n * n];
        for r in 0..n {
            for k in g.row_ptr[r]..g.row_ptr[r + 1] {
                let c = g.col[k] as usize;
                dense[r * n + c] = g.val[k] / (self.scaling[r] * self.scaling[c]).sqrt();
            }
        }
        dense
    }

    /// (l2^2, h1^2, hb^2) of the function with HB coefficients c.
    pub fn norms(&self, c: &HbCoeffs) -> Result<(f64, f64, f64)> {
        if c.0.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: c.0.len() });
        }
        let l2 = self.mass.quadratic_form(&c.0);
        let h1 = self.stiffness.quadratic_form(&c.0);
        let hb = c.0.iter().zip(&self.scaling).map(|(x, d)| d * x * x).sum();
        Ok((l2, h1, hb))
    }
}

/// The scaling diagonal d_alpha = 2^(2|beta|_inf) (2/3)^d 2^(-|beta|_1),
/// constant within each block.
pub fn scaling_diagonal(space: &SparseGridSpace) -> Vec<f64> {
    let d = space.spatial_dim() as i32;
    let mut out = vec![0.0; space.dim()];
    for (bi, beta) in space.blocks().iter().enumerate() {
        let w = 4.0f64.powi(beta.linf() as i32)
            * (2.0f64 / 3.0).powi(d)
            * 0.5f64.powi(beta.l1() as i32);
        for i in space.block_range(bi) {
            out[i] = w;
        }
    }
    out
}

/// Assembles G and M over the tensorized 1D integrals. Entries below 1e-15
/// absolute are dropped (true entries are dyadic rationals well above this).
pub fn assemble(space: &SparseGridSpace, nnz_cap: usize) -> Result<GalerkinSystem> {
    let n = space.dim();
    let d = space.spatial_dim();
    let hats: Vec<Vec<UniHat>> = space
        .functions()
        .iter()
        .map(|f| {
            f.block
                .levels()
                .iter()
                .zip(&f.offsets)
                .map(|(&l, &o)| (l, o))
                .collect()
        })
        .collect();

    let mut g_rows = Vec::with_capacity(n + 1);
    let mut g_col = Vec::new();
    let mut g_val = Vec::new();
    let mut m_rows = Vec::with_capacity(n + 1);
    let mut m_col = Vec::new();
    let mut m_val = Vec::new();
    g_rows.push(0);
    m_rows.push(0);

    let mut masses = vec![0.0; d];
    for r in 0..n {
        for c in 0..n {
            let mut zero = false;
            for j in 0..d {
                let m = mass_1d(hats[r][j], hats[c][j]);
                if m == 0.0 {
                    zero = true;
                    break;
                }
                masses[j] = m;
            }
            if zero {
                continue;
            }
            let m_entry: f64 = masses.iter().product();
            let mut g_entry = 0.0;
            for i in 0..d {
                let s = stiffness_1d(hats[r][i], hats[c][i]);
                if s != 0.0 {
                    g_entry += s * m_entry / masses[i];
                }
            }
            if m_entry.abs() > 1e-15 {
                m_col.push(c as u32);
                m_val.push(m_entry);
            }
            if g_entry.abs() > 1e-15 {
                g_col.push(c as u32);
                g_val.push(g_entry);
            }
        }
        g_rows.push(g_val.len());
        m_rows.push(m_val.len());
        if g_val.len() + m_val.len() > nnz_cap {
            return Err(Error::CapExceeded(format!(
                "assembly nonzeros exceed cap {} at row {} of {}",
                nnz_cap, r, n
            )));
        }
    }

    let stiffness = SymmetricSparseMatrix { n, row_ptr: g_rows, col: g_col, val: g_val };
    let mass = SymmetricSparseMatrix { n, row_ptr: m_rows, col: m_col, val: m_val };
    Ok(GalerkinSystem { stiffness, mass, scaling: scaling_diagonal(space) })
}
