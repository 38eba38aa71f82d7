//! The univariate and tensor-product Faber-Schauder basis: dyadic hat
//! functions organized in blocks with pairwise disjoint supports.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index_set::MultiIndex;

/// An exact dyadic coordinate num / 2^level in [0, 1], kept normalized
/// (num odd, or the endpoints 0/1 at level 0) so that set operations on
/// nodal points never compare floats.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Dyadic {
    pub num: u64,
    pub level: u32,
}

impl Dyadic {
    pub fn new(num: u64, level: u32) -> Self {
        let mut d = Dyadic { num, level };
        while d.level > 0 && d.num % 2 == 0 {
            d.num /= 2;
            d.level -= 1;
        }
        d
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / (1u64 << self.level) as f64
    }

    pub fn is_boundary(&self) -> bool {
        self.level == 0
    }

    /// The two hierarchical parents (neighbors on the next coarser grids)
    /// of an interior node at level >= 1.
    pub fn parents(&self) -> (Dyadic, Dyadic) {
        debug_assert!(self.level >= 1 && self.num % 2 == 1);
        (
            Dyadic::new(self.num - 1, self.level),
            Dyadic::new(self.num + 1, self.level),
        )
    }
}

/// One tensor-product hat phi_alpha, identified by its block beta and the
/// per-dimension offsets i_j with 0 <= i_j <= 2^(beta_j - 1) - 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BasisFunction {
    pub block: MultiIndex,
    pub offsets: Vec<u64>,
}

impl BasisFunction {
    pub fn dim(&self) -> usize {
        self.block.dim()
    }

    /// The nodal point ((2 i_j + 1) 2^(-beta_j))_j where the peak value 1
    /// is attained.
    pub fn nodal_point(&self) -> Vec<Dyadic> {
        self.block
            .levels()
            .iter()
            .zip(&self.offsets)
            .map(|(&level, &i)| Dyadic::new(2 * i + 1, level))
            .collect()
    }
}

/// Number of functions in block beta: 2^(|beta|_1 - d).
pub fn block_size(beta: &MultiIndex) -> usize {
    1usize << (beta.l1() as usize - beta.dim())
}

/// All basis functions of a block, offsets in lexicographic order.
pub fn enumerate_block(beta: &MultiIndex) -> Vec<BasisFunction> {
    let d = beta.dim();
    let counts: Vec<u64> = beta.levels().iter().map(|&b| 1u64 << (b - 1)).collect();
    let mut out = Vec::with_capacity(block_size(beta));
    let mut offsets = vec![0u64; d];
    loop {
        out.push(BasisFunction { block: beta.clone(), offsets: offsets.clone() });
        // lexicographic odometer, last dimension fastest
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if offsets[i] + 1 < counts[i] {
                offsets[i] += 1;
                break;
            }
            offsets[i] = 0;
        }
    }
}

/// Univariate hat at (level, offset): phi(2^level t - (2 offset + 1)).
pub fn hat_value(level: u32, offset: u64, t: f64) -> f64 {
    let arg = (1u64 << level) as f64 * t - (2 * offset + 1) as f64;
    (1.0 - arg.abs()).max(0.0)
}

/// Point evaluation of the tensor-product hat.
pub fn evaluate(f: &BasisFunction, x: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), f.dim());
    f.block
        .levels()
        .iter()
        .zip(&f.offsets)
        .zip(x)
        .map(|((&level, &offset), &t)| hat_value(level, offset, t))
        .product()
}

/// All interior grid points of the tensor-product partition T_beta,
/// cardinality prod_j (2^(beta_j) - 1).
pub fn nodal_points(beta: &MultiIndex) -> Vec<Vec<Dyadic>> {
    let d = beta.dim();
    let counts: Vec<u64> = beta.levels().iter().map(|&b| (1u64 << b) - 1).collect();
    let total: usize = counts.iter().map(|&c| c as usize).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![1u64; d];
    loop {
        out.push(
            idx.iter()
                .zip(beta.levels())
                .map(|(&n, &level)| Dyadic::new(n, level))
                .collect(),
        );
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < counts[i] {
                idx[i] += 1;
                break;
            }
            idx[i] = 1;
        }
    }
}

/// ||phi_alpha||_L2^2 = (2/3)^d 2^(-|beta|_1).
pub fn l2_norm_sq(f: &BasisFunction) -> f64 {
    let d = f.dim() as i32;
    (2.0f64 / 3.0).powi(d) * 0.5f64.powi(f.block.l1() as i32)
}

/// H_0^1 seminorm squared: (2^d / 3^(d-1)) 2^(-|beta|_1) sum_i 2^(2 beta_i).
pub fn h1_norm_sq(f: &BasisFunction) -> f64 {
    let d = f.dim() as i32;
    let sum: f64 = f.block.levels().iter().map(|&b| 4.0f64.powi(b as i32)).sum();
    2.0f64.powi(d) / 3.0f64.powi(d - 1) * 0.5f64.powi(f.block.l1() as i32) * sum
}

/// ||sum c_alpha phi_alpha||_L2^2 for a single block: the hats have
/// disjoint supports, so the norm is (2/3)^d 2^(-|beta|_1) sum c^2.
pub fn block_l2_norm_sq(beta: &MultiIndex, coeffs: &[f64]) -> Result<f64> {
    if coeffs.len() != block_size(beta) {
        return Err(Error::DimensionMismatch { expected: block_size(beta), got: coeffs.len() });
    }
    let d = beta.dim() as i32;
    let sum_sq: f64 = coeffs.iter().map(|c| c * c).sum();
    Ok((2.0f64 / 3.0).powi(d) * 0.5f64.powi(beta.l1() as i32) * sum_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::MultiIndex;

    fn mi(levels: &[u32]) -> MultiIndex {
        MultiIndex::new(levels.to_vec()).unwrap()
    }

    /// Exact quadrature oracle: 2-point Gauss per cell of the common dyadic
    /// refinement, exact for piecewise quadratics. Integrates f*g (or the
    /// product of derivatives) of two tensor hats by per-dimension factors.
    pub fn quad_1d(fa: (u32, u64), fb: (u32, u64), derivative: bool) -> f64 {
        let level = fa.0.max(fb.0);
        let n = 1u64 << level;
        let h = 1.0 / n as f64;
        let gauss = 1.0 / 3.0f64.sqrt();
        let mut total = 0.0;
        for cell in 0..n {
            let mid = (cell as f64 + 0.5) * h;
            for &s in &[-gauss, gauss] {
                let t = mid + 0.5 * h * s;
                let (va, vb) = if derivative {
                    (hat_slope(fa.0, fa.1, t), hat_slope(fb.0, fb.1, t))
                } else {
                    (hat_value(fa.0, fa.1, t), hat_value(fb.0, fb.1, t))
                };
                total += 0.5 * h * va * vb;
            }
        }
        total
    }

    fn hat_slope(level: u32, offset: u64, t: f64) -> f64 {
        let scale = (1u64 << level) as f64;
        let arg = scale * t - (2 * offset + 1) as f64;
        if arg.abs() >= 1.0 {
            0.0
        } else if arg < 0.0 {
            scale
        } else {
            -scale
        }
    }

    fn quad_l2_sq(f: &BasisFunction) -> f64 {
        f.block
            .levels()
            .iter()
            .zip(&f.offsets)
            .map(|(&l, &o)| quad_1d((l, o), (l, o), false))
            .product()
    }

    fn quad_h1_sq(f: &BasisFunction) -> f64 {
        let d = f.dim();
        let mass: Vec<f64> = (0..d)
            .map(|j| quad_1d((f.block.get(j), f.offsets[j]), (f.block.get(j), f.offsets[j]), false))
            .collect();
        let stiff: Vec<f64> = (0..d)
            .map(|j| quad_1d((f.block.get(j), f.offsets[j]), (f.block.get(j), f.offsets[j]), true))
            .collect();
        (0..d)
            .map(|i| stiff[i] * (0..d).filter(|&j| j != i).map(|j| mass[j]).product::<f64>())
            .sum()
    }

    #[test]
    fn block_enumeration() {
        assert_eq!(enumerate_block(&mi(&[1, 1])).len(), 1);
        let b = enumerate_block(&mi(&[2, 1]));
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].offsets, vec![0, 0]);
        assert_eq!(b[1].offsets, vec![1, 0]);
        assert_eq!(enumerate_block(&mi(&[3, 2])).len(), 8);
    }

    #[test]
    fn evaluation_examples() {
        let phi1 = BasisFunction { block: mi(&[1]), offsets: vec![0] };
        assert_eq!(evaluate(&phi1, &[0.5]), 1.0);
        let phi2 = BasisFunction { block: mi(&[2]), offsets: vec![0] };
        assert_eq!(evaluate(&phi2, &[0.25]), 1.0);
        assert_eq!(evaluate(&phi2, &[0.75]), 0.0);
        let f = BasisFunction { block: mi(&[1, 1]), offsets: vec![0, 0] };
        assert_eq!(evaluate(&f, &[0.25, 0.25]), 0.25);
    }

    #[test]
    fn nodal_point_examples() {
        let p = nodal_points(&mi(&[1]));
        assert_eq!(p, vec![vec![Dyadic::new(1, 1)]]);
        let p = nodal_points(&mi(&[2]));
        assert_eq!(p.len(), 3);
        assert_eq!(p[1], vec![Dyadic::new(1, 1)]); // 1/2 normalizes to level 1
        assert_eq!(nodal_points(&mi(&[2, 1])).len(), 3);
    }

    #[test]
    fn nodal_points_nested() {
        // beta' <= beta implies Sigma_beta' subset Sigma_beta
        let coarse: std::collections::HashSet<_> =
            nodal_points(&mi(&[2, 1])).into_iter().collect();
        let fine: std::collections::HashSet<_> = nodal_points(&mi(&[3, 2])).into_iter().collect();
        assert!(coarse.is_subset(&fine));
    }

    #[test]
    fn norm_examples() {
        let f = BasisFunction { block: mi(&[1]), offsets: vec![0] };
        assert!((l2_norm_sq(&f) - 1.0 / 3.0).abs() < 1e-15);
        assert!((h1_norm_sq(&f) - 4.0).abs() < 1e-15);
        let f = BasisFunction { block: mi(&[1, 1]), offsets: vec![0, 0] };
        assert!((l2_norm_sq(&f) - 1.0 / 9.0).abs() < 1e-15);
        assert!((h1_norm_sq(&f) - 8.0 / 3.0).abs() < 1e-14);
        let f = BasisFunction { block: mi(&[2, 1]), offsets: vec![0, 0] };
        assert!((l2_norm_sq(&f) - 1.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn norms_match_quadrature() {
        for beta in [mi(&[1]), mi(&[3]), mi(&[1, 1]), mi(&[2, 1]), mi(&[3, 2]), mi(&[2, 2, 2])] {
            for f in enumerate_block(&beta) {
                let l2 = l2_norm_sq(&f);
                let h1 = h1_norm_sq(&f);
                assert!((l2 - quad_l2_sq(&f)).abs() <= 1e-12 * l2, "{beta:?}");
                assert!((h1 - quad_h1_sq(&f)).abs() <= 1e-12 * h1, "{beta:?}");
            }
        }
    }

    #[test]
    fn block_l2_examples() {
        assert!((block_l2_norm_sq(&mi(&[1, 1]), &[1.0]).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert!((block_l2_norm_sq(&mi(&[2]), &[1.0, 1.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(block_l2_norm_sq(&mi(&[3]), &[0.0; 4]).unwrap(), 0.0);
        assert!(block_l2_norm_sq(&mi(&[3]), &[0.0; 3]).is_err());
    }

    #[test]
    fn disjoint_supports_within_block() {
        let fs = enumerate_block(&mi(&[3, 2]));
        let mut rng = 0x9e3779b97f4a7c15u64;
        for _ in 0..200 {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let x = [
                (rng >> 11) as f64 / (1u64 << 53) as f64,
                (rng >> 13) as f64 / (1u64 << 51) as f64 % 1.0,
            ];
            let nonzero = fs.iter().filter(|f| evaluate(f, &x) > 0.0).count();
            assert!(nonzero <= 1);
        }
    }

    #[test]
    fn kronecker_delta_at_nodal_points() {
        // evaluate(f, node of f) = 1; zero at every node of any coarser block
        let f = BasisFunction { block: mi(&[3, 2]), offsets: vec![2, 1] };
        let node: Vec<f64> = f.nodal_point().iter().map(|d| d.value()).collect();
        assert_eq!(evaluate(&f, &node), 1.0);
        for coarse in [mi(&[3, 2]), mi(&[2, 2]), mi(&[3, 1]), mi(&[1, 1])] {
            for p in nodal_points(&coarse) {
                let x: Vec<f64> = p.iter().map(|d| d.value()).collect();
                if p != f.nodal_point() {
                    assert_eq!(evaluate(&f, &x), 0.0, "{p:?}");
                }
            }
        }
    }
}
