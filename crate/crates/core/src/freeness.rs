//! Supersolvability, inductive and divisional freeness, balancedness.

use dashmap::DashMap;

use crate::block::Block;
use crate::matroid::{contraction_summary, deletion, Deletion, TwoPartition};
use crate::permgroup::canonical_form;
use crate::poly::characteristic_data;

/// A block meeting every other block, if any.
pub fn supersolvable_witness(m: &TwoPartition) -> Option<Block> {
    let w = m
        .blocks()
        .iter()
        .copied()
        .find(|&f| m.blocks().iter().all(|&g| g == f || !g.meet(f).is_empty()))?;
    if cfg!(debug_assertions) {
        let k = w.len() as i64;
        let n = m.n() as i64;
        let mut want = [k - 1, n - k];
        want.sort_unstable();
        let split = characteristic_data(&m.multiplicity_vector()).split;
        debug_assert_eq!(split, Some((want[0], want[1])), "modular block forces the roots");
    }
    Some(w)
}

pub fn is_supersolvable(m: &TwoPartition) -> bool {
    supersolvable_witness(m).is_some()
}

/// Atoms H whose contraction polynomial divides χ.
pub fn divisional_atoms(m: &TwoPartition) -> Vec<usize> {
    let cd = characteristic_data(&m.multiplicity_vector());
    (1..=m.n())
        .filter(|&h| cd.is_root(contraction_summary(m, h).root()))
        .collect()
}

pub fn is_divisionally_free(m: &TwoPartition) -> bool {
    m.n() == 3 || !divisional_atoms(m).is_empty()
}

/// Memo of inductive freeness keyed by canonical block lists. Safe to share
/// between threads; racing inserts store the same value.
#[derive(Default)]
pub struct IfCache {
    map: DashMap<(usize, Vec<Block>), bool>,
    strict: bool,
}

impl IfCache {
    pub fn new() -> Self {
        IfCache::default()
    }

    /// Rank-2 deletions do not count as inductively free.
    pub fn strict() -> Self {
        IfCache {
            map: DashMap::new(),
            strict: true,
        }
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Seeds the memo with a known answer, e.g. from a stored record. The
    /// blocks must be canonical.
    pub fn insert_canonical(&self, n: usize, blocks: Vec<Block>, value: bool) {
        self.map.insert((n, blocks), value);
    }

    pub fn get_canonical(&self, n: usize, blocks: &[Block]) -> Option<bool> {
        self.map.get(&(n, blocks.to_vec())).map(|v| *v)
    }
}

pub fn is_inductively_free(m: &TwoPartition, cache: &IfCache) -> bool {
    if m.n() == 3 {
        return true;
    }
    let c = canonical_form(m);
    memoized(&c, cache)
}

fn memoized(canonical: &TwoPartition, cache: &IfCache) -> bool {
    let key = (canonical.n(), canonical.blocks().to_vec());
    if let Some(v) = cache.map.get(&key) {
        return *v;
    }
    let v = compute_if(canonical, cache);
    cache.map.insert(key, v);
    v
}

fn compute_if(m: &TwoPartition, cache: &IfCache) -> bool {
    if m.n() == 3 {
        return true;
    }
    let cd = characteristic_data(&m.multiplicity_vector());
    if cd.split.is_none() {
        return false;
    }
    for h in 1..=m.n() {
        if !cd.is_root(contraction_summary(m, h).root()) {
            continue;
        }
        match deletion(m, h).expect("n ≥ 4") {
            Deletion::Rank2 => {
                if !cache.strict {
                    return true;
                }
            }
            Deletion::Matroid(d) => {
                if d.n() == 3 || memoized(&canonical_form(&d), cache) {
                    return true;
                }
            }
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("characteristic polynomial does not split over the integers")]
pub struct NotIntegrallySplitting;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Balancedness {
    pub atom_balanced: bool,
    pub coatom_balanced: bool,
    pub strongly_balanced: bool,
}

/// Compares block degrees and block sizes with the smaller root a.
pub fn balancedness(m: &TwoPartition) -> Result<Balancedness, NotIntegrallySplitting> {
    let (a, _) = characteristic_data(&m.multiplicity_vector())
        .split
        .ok_or(NotIntegrallySplitting)?;
    let max_d = (1..=m.n()).map(|h| contraction_summary(m, h).d).max().unwrap_or(0) as i64;
    let max_block = m.blocks().iter().map(|b| b.len()).max().unwrap_or(0) as i64;
    let atom_balanced = max_d <= a;
    let coatom_balanced = max_block < a;
    Ok(Balancedness {
        atom_balanced,
        coatom_balanced,
        strongly_balanced: atom_balanced && coatom_balanced,
    })
}
