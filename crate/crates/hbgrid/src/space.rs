//! The enumerated hierarchical basis of a generalized sparse grid space
//! S_Lambda, with the bijection between basis functions and grid points.

use std::collections::HashMap;

use crate::basis::{block_size, enumerate_block, BasisFunction, Dyadic};
use crate::error::{Error, Result};
use crate::index_set::{is_monotone, MonotoneIndexSet, MultiIndex};

/// S_Lambda with a fixed deterministic basis enumeration: blocks ordered by
/// (|beta|_1, lexicographic beta), offsets lexicographic within a block.
/// Layout is block-major, so per-block scaling and norms touch contiguous
/// coefficient ranges.
pub struct SparseGridSpace {
    set: MonotoneIndexSet,
    blocks: Vec<MultiIndex>,
    block_starts: Vec<usize>,
    functions: Vec<BasisFunction>,
    nodes: Vec<Vec<Dyadic>>,
    point_index: HashMap<Vec<Dyadic>, usize>,
    block_index: HashMap<MultiIndex, usize>,
}

impl SparseGridSpace {
    pub fn new(set: MonotoneIndexSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        debug_assert!(is_monotone(&set.members())?);
        let blocks = set.blocks_ordered();
        let mut block_starts = Vec::with_capacity(blocks.len() + 1);
        let mut functions = Vec::new();
        let mut block_index = HashMap::new();
        for (bi, beta) in blocks.iter().enumerate() {
            block_starts.push(functions.len());
            block_index.insert(beta.clone(), bi);
            functions.extend(enumerate_block(beta));
        }
        block_starts.push(functions.len());
        let nodes: Vec<Vec<Dyadic>> = functions.iter().map(|f| f.nodal_point()).collect();
        let mut point_index = HashMap::with_capacity(nodes.len());
        for (i, p) in nodes.iter().enumerate() {
            let prev = point_index.insert(p.clone(), i);
            debug_assert!(prev.is_none(), "grid points of distinct blocks must be distinct");
        }
        Ok(SparseGridSpace { set, blocks, block_starts, functions, nodes, point_index, block_index })
    }

    pub fn index_set(&self) -> &MonotoneIndexSet {
        &self.set
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    pub fn spatial_dim(&self) -> usize {
        self.set.dim()
    }

    pub fn blocks(&self) -> &[MultiIndex] {
        &self.blocks
    }

    /// Coefficient range of block `bi` in the enumeration.
    pub fn block_range(&self, bi: usize) -> std::ops::Range<usize> {
        self.block_starts[bi]..self.block_starts[bi + 1]
    }

    pub fn block_position(&self, beta: &MultiIndex) -> Option<usize> {
        self.block_index.get(beta).copied()
    }

    pub fn functions(&self) -> &[BasisFunction] {
        &self.functions
    }

    /// Grid point (exact dyadic coordinates) of basis function `i`.
    pub fn node(&self, i: usize) -> &[Dyadic] {
        &self.nodes[i]
    }

    /// Index of the basis function whose nodal point is `p`, if present.
    pub fn point_position(&self, p: &[Dyadic]) -> Option<usize> {
        self.point_index.get(p).copied()
    }

    /// Position of (block beta, offsets) in the enumeration.
    pub fn position(&self, beta: &MultiIndex, offsets: &[u64]) -> Option<usize> {
        let bi = self.block_position(beta)?;
        // offsets are enumerated lexicographically, last dimension fastest
        let mut idx = 0usize;
        for (j, (&level, &off)) in beta.levels().iter().zip(offsets).enumerate() {
            let count = 1u64 << (level - 1);
            if off >= count {
                return None;
            }
            let _ = j;
            idx = idx * count as usize + off as usize;
        }
        Some(self.block_starts[bi] + idx)
    }
}

/// dim S_Lambda = sum over blocks of 2^(|beta|_1 - d), without building
/// the space.
pub fn space_dimension(set: &MonotoneIndexSet) -> usize {
    set.iter().map(block_size).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::{make_full_grid, make_standard_sparse, MultiIndex};

    fn mi(levels: &[u32]) -> MultiIndex {
        MultiIndex::new(levels.to_vec()).unwrap()
    }

    #[test]
    fn dimension_counts() {
        let s3 = SparseGridSpace::new(make_standard_sparse(3, 2).unwrap()).unwrap();
        // blocks: (1,1)=1, (1,2)=2, (2,1)=2, (2,2)=4, (1,3)=4, (3,1)=4
        assert_eq!(s3.dim(), 17);
        assert_eq!(space_dimension(s3.index_set()), 17);
        let v2 = SparseGridSpace::new(make_full_grid(&mi(&[2, 2]))).unwrap();
        assert_eq!(v2.dim(), 9); // (2^2 - 1)^2
    }

    #[test]
    fn deterministic_block_order() {
        let s3 = SparseGridSpace::new(make_standard_sparse(3, 2).unwrap()).unwrap();
        let order: Vec<_> = s3.blocks().iter().map(|b| b.levels().to_vec()).collect();
        assert_eq!(
            order,
            vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![1, 3], vec![2, 2], vec![3, 1]]
        );
    }

    #[test]
    fn positions_round_trip() {
        let s3 = SparseGridSpace::new(make_standard_sparse(3, 2).unwrap()).unwrap();
        for (i, f) in s3.functions().iter().enumerate() {
            assert_eq!(s3.position(&f.block, &f.offsets), Some(i));
            assert_eq!(s3.point_position(s3.node(i)), Some(i));
        }
    }
}
