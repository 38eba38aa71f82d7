//! Monotone (downward-closed) multi-index sets and the combinatorial
//! quantities controlling the hierarchical-basis condition number.

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};

/// A d-tuple of positive integer levels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(levels: Vec<u32>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument("multi-index must have d >= 1".into()));
        }
        if levels.iter().any(|&b| b < 1) {
            return Err(Error::InvalidArgument(
                "multi-index components must be >= 1".into(),
            ));
        }
        Ok(MultiIndex(levels))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// |beta|_1
    pub fn l1(&self) -> u64 {
        self.0.iter().map(|&b| b as u64).sum()
    }

    /// |beta|_inf
    pub fn linf(&self) -> u32 {
        *self.0.iter().max().unwrap()
    }

    /// Componentwise partial order.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Rational number used for the energy-optimization parameter `a < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidArgument("denominator must be positive".into()));
        }
        Ok(Ratio { num, den })
    }

    pub fn from_int(n: i64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Parses "p/q" or a plain integer.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let num = p.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?;
            let den = q.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?;
            Ratio::new(num, den)
        } else {
            let n = s.parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?;
            Ok(Ratio::from_int(n))
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A finite downward-closed subset of N^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneIndexSet {
    dim: usize,
    members: BTreeSet<MultiIndex>,
}

impl MonotoneIndexSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, beta: &MultiIndex) -> bool {
        self.members.contains(beta)
    }

    pub fn iter(&self) -> impl Iterator<Item = &MultiIndex> {
        self.members.iter()
    }

    pub fn members(&self) -> Vec<MultiIndex> {
        self.members.iter().cloned().collect()
    }

    /// Members ordered by (|beta|_1, lexicographic), the block enumeration
    /// order used for matrix and vector layouts.
    pub fn blocks_ordered(&self) -> Vec<MultiIndex> {
        let mut v: Vec<MultiIndex> = self.members.iter().cloned().collect();
        v.sort_by_key(|b| (b.l1(), b.clone()));
        v
    }

    /// k_Lambda = max |beta|_inf.
    pub fn k_lambda(&self) -> u32 {
        self.members.iter().map(|b| b.linf()).max().unwrap_or(0)
    }
}

/// All beta' <= beta: the index set of the anisotropic full grid space.
pub fn make_full_grid(beta: &MultiIndex) -> MonotoneIndexSet {
    let mut members = BTreeSet::new();
    let mut current = vec![1u32; beta.dim()];
    loop {
        members.insert(MultiIndex(current.clone()));
        // odometer over the box [1, beta_1] x ... x [1, beta_d]
        let mut i = 0;
        loop {
            if i == current.len() {
                return MonotoneIndexSet { dim: beta.dim(), members };
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

/// Standard sparse grid index set: |beta|_1 <= k + d - 1.
pub fn make_standard_sparse(k: u32, d: usize) -> Result<MonotoneIndexSet> {
    if k < 1 || d < 1 {
        return Err(Error::InvalidArgument("need k >= 1 and d >= 1".into()));
    }
    make_energy_optimized(k, d, Ratio::from_int(0))
}

/// Energy-optimized index set: |beta|_1 - a |beta|_inf <= (1-a)k + d - 1,
/// for rational a < 1. Reduces to the standard sparse grid for a = 0.
pub fn make_energy_optimized(k: u32, d: usize, a: Ratio) -> Result<MonotoneIndexSet> {
    if k < 1 || d < 1 {
        return Err(Error::InvalidArgument("need k >= 1 and d >= 1".into()));
    }
    if a.num >= a.den {
        return Err(Error::InvalidArgument(format!(
            "energy parameter a = {} must satisfy a < 1",
            a
        )));
    }
    let (p, q) = (a.num as i128, a.den as i128);
    // membership test cleared of denominators:
    //   q|beta|_1 - p|beta|_inf <= (q - p)k + q(d - 1)
    let rhs = (q - p) * k as i128 + q * (d as i128 - 1);
    let member = |beta: &[u32]| -> bool {
        let l1: i128 = beta.iter().map(|&b| b as i128).sum();
        let linf = *beta.iter().max().unwrap() as i128;
        q * l1 - p * linf <= rhs
    };
    // grow from (1,...,1); membership is monotone in each component
    let mut members = BTreeSet::new();
    let mut stack = vec![vec![1u32; d]];
    while let Some(beta) = stack.pop() {
        if !member(&beta) || members.contains(&MultiIndex(beta.clone())) {
            continue;
        }
        for i in 0..d {
            let mut up = beta.clone();
            up[i] += 1;
            stack.push(up);
        }
        members.insert(MultiIndex(beta));
    }
    Ok(MonotoneIndexSet { dim: d, members })
}

/// Smallest downward-closed superset of the given indices.
pub fn monotone_closure(indices: &[MultiIndex]) -> Result<MonotoneIndexSet> {
    let dim = check_same_dim(indices)?;
    let mut members = BTreeSet::new();
    let mut stack: Vec<MultiIndex> = indices.to_vec();
    while let Some(beta) = stack.pop() {
        if members.contains(&beta) {
            continue;
        }
        for i in 0..dim {
            if beta.get(i) > 1 {
                let mut down = beta.levels().to_vec();
                down[i] -= 1;
                stack.push(MultiIndex(down));
            }
        }
        members.insert(beta);
    }
    Ok(MonotoneIndexSet { dim, members })
}

/// True iff the set is downward closed.
pub fn is_monotone(indices: &[MultiIndex]) -> Result<bool> {
    let _ = check_same_dim(indices)?;
    let set: BTreeSet<&MultiIndex> = indices.iter().collect();
    for beta in indices {
        for i in 0..beta.dim() {
            if beta.get(i) > 1 {
                let mut down = beta.levels().to_vec();
                down[i] -= 1;
                if !set.contains(&MultiIndex(down)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn check_same_dim(indices: &[MultiIndex]) -> Result<usize> {
    let dim = indices
        .first()
        .ok_or(Error::EmptySet)?
        .dim();
    for b in indices {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: b.dim() });
        }
    }
    Ok(dim)
}

/// Partition of a set into the slices Lambda_k = { beta : |beta|_inf = k }.
#[derive(Clone, Debug)]
pub struct LevelPartition {
    pub k_max: u32,
    /// slices[k-1] = Lambda_k, k = 1..=k_max
    pub slices: Vec<Vec<MultiIndex>>,
}

impl LevelPartition {
    pub fn slice(&self, k: u32) -> &[MultiIndex] {
        &self.slices[(k - 1) as usize]
    }
}

pub fn level_partition(set: &MonotoneIndexSet) -> Result<LevelPartition> {
    level_partition_of(&set.members())
}

/// Level partition of an arbitrary finite index collection (the slices of a
/// non-monotone set are needed for the gap example's literal quantities).
pub fn level_partition_of(indices: &[MultiIndex]) -> Result<LevelPartition> {
    let _ = check_same_dim(indices)?;
    let k_max = indices.iter().map(|b| b.linf()).max().unwrap();
    let mut slices = vec![Vec::new(); k_max as usize];
    for beta in indices {
        slices[(beta.linf() - 1) as usize].push(beta.clone());
    }
    Ok(LevelPartition { k_max, slices })
}

/// All elements of `slice` with no strictly larger element in `slice`.
pub fn maximal_elements(slice: &[MultiIndex]) -> Vec<MultiIndex> {
    slice
        .iter()
        .filter(|b| !slice.iter().any(|other| **b != *other && MultiIndex::le(b, other)))
        .cloned()
        .collect()
}

/// n_Lambda, n~_Lambda, n~'_Lambda, k_Lambda and the maximal slices, all in
/// exact integer arithmetic.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub n_lambda: usize,
    #[serde(serialize_with = "crate::report::serialize_biguint")]
    pub n_tilde: BigUint,
    #[serde(serialize_with = "crate::report::serialize_biguint")]
    pub n_tilde_prime: BigUint,
    pub k_lambda: u32,
    pub maximal_sets: Vec<(u32, Vec<MultiIndex>)>,
}

pub fn bounds_quantities(set: &MonotoneIndexSet) -> Result<BoundsReport> {
    bounds_quantities_of(&set.members())
}

/// Same quantities for an arbitrary finite index collection.
pub fn bounds_quantities_of(indices: &[MultiIndex]) -> Result<BoundsReport> {
    let partition = level_partition_of(indices)?;
    let n_lambda = partition.slices.iter().map(|s| s.len()).max().unwrap();
    let mut n_tilde = BigUint::from(0u32);
    let mut maximal_sets = Vec::new();
    for k in 1..=partition.k_max {
        let maximal = maximal_elements(partition.slice(k));
        for beta in &maximal {
            n_tilde += BigUint::from(1u32) << (beta.l1() - beta.linf() as u64) as usize;
        }
        if !maximal.is_empty() {
            maximal_sets.push((k, maximal));
        }
    }
    let n_tilde_prime = indices
        .iter()
        .map(|b| BigUint::from(1u32) << (b.l1() - b.linf() as u64) as usize)
        .max()
        .unwrap();
    Ok(BoundsReport {
        n_lambda,
        n_tilde,
        n_tilde_prime,
        k_lambda: partition.k_max,
        maximal_sets,
    })
}

/// Largest r with the isotropic full grid V_r contained in S_k^a:
/// r0 = floor(((1-a)k + d - 1)/(d - a)).
pub fn r0(k: u32, d: usize, a: Ratio) -> Result<u32> {
    if k < 1 || d < 2 {
        return Err(Error::InvalidArgument("need k >= 1 and d >= 2".into()));
    }
    if a.num >= a.den {
        return Err(Error::InvalidArgument("need a < 1".into()));
    }
    let (p, q) = (a.num as i128, a.den as i128);
    let num = (q - p) * k as i128 + q * (d as i128 - 1);
    let den = q * d as i128 - p;
    // both positive for a < 1, so truncating division is the floor
    Ok((num / den) as u32)
}

/// The worst-case-gap family: monotone closure of
/// {(2k, beta') : beta' in N^(d-1), |beta'|_1 < k + d - 1}.
/// Returns the closure together with the literal (non-monotone) index list.
pub fn gap_example(k: u32, d: usize) -> Result<(MonotoneIndexSet, Vec<MultiIndex>)> {
    if k < 1 || d < 2 {
        return Err(Error::InvalidArgument("need k >= 1 and d >= 2".into()));
    }
    let mut literal = Vec::new();
    // enumerate beta' in N^(d-1) with |beta'|_1 < k + d - 1
    let bound = (k + d as u32 - 1) as u64;
    let mut current = vec![1u32; d - 1];
    'outer: loop {
        let l1: u64 = current.iter().map(|&b| b as u64).sum();
        if l1 < bound {
            let mut full = Vec::with_capacity(d);
            full.push(2 * k);
            full.extend_from_slice(&current);
            literal.push(MultiIndex(full));
        }
        let mut i = 0;
        loop {
            if i == current.len() {
                break 'outer;
            }
            if (current[i] as u64) < bound {
                current[i] += 1;
                break;
            }
            current[i] = 1;
            i += 1;
        }
    }
    let closure = monotone_closure(&literal)?;
    Ok((closure, literal))
}

/// Index-set file format: one multi-index per line, d space-separated
/// positive integers, '#' starts a comment line. Returns the parsed indices
/// and whether they already formed a monotone set.
pub fn read_index_file<R: BufRead>(reader: R) -> Result<(Vec<MultiIndex>, bool)> {
    let mut indices = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let levels: Vec<u32> = trimmed
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|e| Error::Parse(format!("line {}: {}", lineno + 1, e)))
            })
            .collect::<Result<_>>()?;
        let idx = MultiIndex::new(levels)?;
        if let Some(first) = indices.first() {
            let first: &MultiIndex = first;
            if idx.dim() != first.dim() {
                return Err(Error::DimensionMismatch { expected: first.dim(), got: idx.dim() });
            }
        }
        indices.push(idx);
    }
    if indices.is_empty() {
        return Err(Error::EmptySet);
    }
    let monotone = is_monotone(&indices)?;
    Ok((indices, monotone))
}
