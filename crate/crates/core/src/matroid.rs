//! Simple rank-3 matroids as 2-partitions of the atom set.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::block::{self, Block, MAX_ATOMS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("atom {atom} outside 1..={n}")]
    AtomOutOfRange { atom: usize, n: usize },
    #[error("atom count {0} unsupported (need 3..=32)")]
    BadAtomCount(usize),
    #[error("pair {{{0},{1}}} lies in two blocks")]
    PairCoveredTwice(usize, usize),
    #[error("pair {{{0},{1}}} lies in no block")]
    PairUncovered(usize, usize),
    #[error("block {0:?} is not proper")]
    ImproperBlock(Vec<usize>),
    #[error("multiplicity vector does not cover C({n},2) pairs")]
    CoverageMismatch { n: usize },
    #[error("deletion needs at least 4 atoms")]
    DeletionTooSmall,
}

/// A validated 2-partition in normal form. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoPartition {
    n: usize,
    blocks: Vec<Block>,
}

/// Validates and normalizes a block list.
pub fn make_matroid<B, I>(n: usize, raw_blocks: B) -> Result<TwoPartition, MatroidError>
where
    B: IntoIterator<Item = I>,
    I: IntoIterator<Item = usize>,
{
    if !(3..=MAX_ATOMS).contains(&n) {
        return Err(MatroidError::BadAtomCount(n));
    }
    let mut blocks = Vec::new();
    for raw in raw_blocks {
        let mut m = 0u32;
        for a in raw {
            if a == 0 || a > n {
                return Err(MatroidError::AtomOutOfRange { atom: a, n });
            }
            m |= 1 << (a - 1);
        }
        blocks.push(Block(m));
    }
    TwoPartition::from_blocks(n, blocks)
}

impl TwoPartition {
    /// Validating constructor over bitmask blocks.
    pub fn from_blocks(n: usize, mut blocks: Vec<Block>) -> Result<TwoPartition, MatroidError> {
        if !(3..=MAX_ATOMS).contains(&n) {
            return Err(MatroidError::BadAtomCount(n));
        }
        let full = full_set(n);
        block::normalize(&mut blocks);
        for b in &blocks {
            if !b.is_subset(full) {
                let atom = b.atoms().find(|&a| a > n).unwrap();
                return Err(MatroidError::AtomOutOfRange { atom, n });
            }
            if b.len() < 2 || b.len() >= n {
                return Err(MatroidError::ImproperBlock(b.to_vec()));
            }
        }
        let mut cover = vec![0u32; n];
        for b in &blocks {
            for a in b.atoms() {
                let clash = cover[a - 1] & b.0 & !(1 << (a - 1));
                if clash != 0 {
                    let c = clash.trailing_zeros() as usize + 1;
                    return Err(MatroidError::PairCoveredTwice(a.min(c), a.max(c)));
                }
            }
            for a in b.atoms() {
                cover[a - 1] |= b.0 & !(1 << (a - 1));
            }
        }
        for a in 1..=n {
            let missing = full.0 & !cover[a - 1] & !full_set(a).0;
            if missing != 0 {
                return Err(MatroidError::PairUncovered(a, missing.trailing_zeros() as usize + 1));
            }
        }
        debug_assert_eq!(
            blocks.iter().map(|b| choose2(b.len())).sum::<usize>(),
            choose2(n)
        );
        Ok(TwoPartition { n, blocks })
    }

    /// Skips validation; callers guarantee a normalized 2-partition.
    pub(crate) fn from_normalized_unchecked(n: usize, blocks: Vec<Block>) -> TwoPartition {
        debug_assert!(TwoPartition::from_blocks(n, blocks.clone()).is_ok());
        TwoPartition { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_lists(&self) -> Vec<Vec<usize>> {
        block::to_lists(&self.blocks)
    }

    pub fn multiplicity_vector(&self) -> MultiplicityVector {
        let mut m = BTreeMap::new();
        for b in &self.blocks {
            *m.entry(b.len()).or_insert(0) += 1;
        }
        MultiplicityVector { n: self.n, m }
    }

    /// The block through two distinct atoms.
    pub fn block_through(&self, a: usize, b: usize) -> Block {
        let pair = Block::from_atoms([a, b]);
        *self
            .blocks
            .iter()
            .find(|f| pair.is_subset(**f))
            .expect("every pair lies in a block")
    }
}

impl fmt::Debug for TwoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoPartition(n={}, {:?})", self.n, self.blocks)
    }
}

pub fn multiplicity_vector(m: &TwoPartition) -> MultiplicityVector {
    m.multiplicity_vector()
}

pub fn full_set(n: usize) -> Block {
    Block(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
}

pub fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Census of block sizes. Absent sizes have multiplicity 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityVector {
    n: usize,
    m: BTreeMap<usize, usize>,
}

impl MultiplicityVector {
    /// Checks 2 ≤ k ≤ n−1 and the pair-coverage identity. Zero entries are dropped.
    pub fn new(n: usize, m: BTreeMap<usize, usize>) -> Result<Self, MatroidError> {
        if !(3..=MAX_ATOMS).contains(&n) {
            return Err(MatroidError::BadAtomCount(n));
        }
        let m: BTreeMap<usize, usize> = m.into_iter().filter(|&(_, c)| c > 0).collect();
        if m.keys().any(|&k| k < 2 || k >= n) {
            return Err(MatroidError::CoverageMismatch { n });
        }
        let pairs: usize = m.iter().map(|(&k, &c)| c * choose2(k)).sum();
        if pairs != choose2(n) {
            return Err(MatroidError::CoverageMismatch { n });
        }
        Ok(MultiplicityVector { n, m })
    }

    /// Dense form starting at size 2: `[m2, m3, ...]`.
    pub fn from_dense(n: usize, dense: &[usize]) -> Result<Self, MatroidError> {
        let m = dense
            .iter()
            .enumerate()
            .map(|(i, &c)| (i + 2, c))
            .collect();
        MultiplicityVector::new(n, m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize) -> usize {
        self.m.get(&k).copied().unwrap_or(0)
    }

    /// Nonzero entries, ascending in k.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.m.iter().map(|(&k, &c)| (k, c))
    }

    pub fn block_count(&self) -> usize {
        self.m.values().sum()
    }

    pub fn largest_size(&self) -> usize {
        self.m.keys().next_back().copied().unwrap_or(1)
    }

    /// Largest size below `k` with a nonzero multiplicity, or 1.
    pub fn next_level_below(&self, k: usize) -> usize {
        self.m.range(..k).next_back().map(|(&k, _)| k).unwrap_or(1)
    }

    /// Dense vector `[m2, ..., m_top]` ending at the largest nonzero size.
    pub fn to_dense(&self) -> Vec<usize> {
        (2..=self.largest_size().max(2)).map(|k| self.get(k)).collect()
    }

    /// Σ m_k (k−1).
    pub fn b2(&self) -> i64 {
        self.m.iter().map(|(&k, &c)| (c * (k - 1)) as i64).sum()
    }
}

impl fmt::Debug for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mv(n={}; {:?})", self.n, self.m)
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_dense().iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Rank of an atom set.
pub fn rank(m: &TwoPartition, s: Block) -> usize {
    match s.len() {
        0 | 1 => s.len(),
        _ if m.blocks.iter().any(|f| s.is_subset(*f)) => 2,
        _ => 3,
    }
}

/// The result of deleting an atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deletion {
    Matroid(TwoPartition),
    /// All remaining atoms are collinear.
    Rank2,
}

/// Removes atom `h` and relabels the atoms above it down by one.
pub fn deletion(m: &TwoPartition, h: usize) -> Result<Deletion, MatroidError> {
    let n = m.n;
    if n < 4 {
        return Err(MatroidError::DeletionTooSmall);
    }
    if h == 0 || h > n {
        return Err(MatroidError::AtomOutOfRange { atom: h, n });
    }
    let low = (1u32 << (h - 1)) - 1;
    let mut blocks = Vec::with_capacity(m.blocks.len());
    for f in &m.blocks {
        let g = f.without(h).0;
        if g.count_ones() >= 2 {
            blocks.push(Block((g & low) | ((g >> 1) & !low)));
        }
    }
    if blocks.len() == 1 {
        return Ok(Deletion::Rank2);
    }
    block::normalize(&mut blocks);
    Ok(Deletion::Matroid(TwoPartition::from_normalized_unchecked(n - 1, blocks)))
}

/// Reduced contraction at an atom: it is determined by the number of blocks
/// through the atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContractionSummary {
    pub d: usize,
}

impl ContractionSummary {
    /// χ of the contraction divided by (t−1) vanishes at this value.
    pub fn root(&self) -> i64 {
        self.d as i64 - 1
    }
}

pub fn contraction_summary(m: &TwoPartition, h: usize) -> ContractionSummary {
    ContractionSummary {
        d: m.blocks.iter().filter(|f| f.contains(h)).count(),
    }
}

/// Number of atoms not yet sharing a block with `e` in the partial list.
pub fn deficiency(a: &[Block], e: usize, n: usize) -> usize {
    let mut seen = 0u32;
    for f in a {
        if f.contains(e) {
            seen |= f.0;
        }
    }
    let co = Block(seen).without(e).len();
    n - 1 - co
}
