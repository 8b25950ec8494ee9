//! The stored form of one matroid.

use rank3::block::{from_lists, to_lists};
use rank3::permgroup::{automorphism_order, canonical_form};
use rank3::represent::FieldMatrix;
use rank3::{characteristic_data, tutte, TwoPartition};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Index key: atom count and canonical block lists.
pub type Key = (usize, Vec<Vec<usize>>);

/// Fields serialize in declaration order, which is the on-disk order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatroidRecord {
    pub schema_version: u32,
    pub n: usize,
    /// Canonical blocks, size-2 blocks included.
    pub blocks: Vec<Vec<usize>>,
    /// `[m2, m3, ..., m_top]`.
    pub mv: Vec<usize>,
    pub b2: i64,
    /// Roots (a, b) with a ≤ b of the quadratic factor, when integral.
    pub chi_roots: Option<[i64; 2]>,
    /// `[i, j, c]` for each term c·xⁱyʲ, ascending in (i, j).
    pub tutte: Vec<[u64; 3]>,
    pub aut_order: u128,
    pub flags: Option<Flags>,
    pub representability: Option<Representability>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    pub supersolvable: bool,
    pub divisionally_free: bool,
    pub inductively_free: bool,
    /// True when rank-2 deletions did not count as inductively free.
    pub strict_inductive: bool,
    /// Null when χ does not split over the integers.
    pub atom_balanced: Option<bool>,
    pub coatom_balanced: Option<bool>,
    pub strongly_balanced: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Representability {
    /// Field orders searched, in search order.
    pub battery: Vec<usize>,
    /// Orders over which a representation was found; the search over every
    /// other battery field was exhausted.
    pub found: Vec<usize>,
    /// A representation over the first field in `found`.
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub field: usize,
    /// One column per atom, entries as field element codes.
    pub columns: Vec<[u8; 3]>,
}

impl Witness {
    pub fn matrix(&self) -> FieldMatrix {
        FieldMatrix {
            columns: self.columns.clone(),
        }
    }
}

impl MatroidRecord {
    /// Unclassified record of the canonical form of `m`.
    pub fn new(m: &TwoPartition) -> MatroidRecord {
        let c = canonical_form(m);
        let mv = c.multiplicity_vector();
        let cd = characteristic_data(&mv);
        MatroidRecord {
            schema_version: SCHEMA_VERSION,
            n: c.n(),
            blocks: to_lists(c.blocks()),
            mv: mv.to_dense(),
            b2: mv.b2(),
            chi_roots: cd.split.map(|(a, b)| [a.min(b), a.max(b)]),
            tutte: tutte(&c).terms().map(|(i, j, k)| [i as u64, j as u64, k]).collect(),
            aut_order: u128::try_from(&automorphism_order(&c)).expect("n ≤ 32"),
            flags: None,
            representability: None,
        }
    }

    pub fn key(&self) -> Key {
        (self.n, self.blocks.clone())
    }

    pub fn matroid(&self) -> TwoPartition {
        TwoPartition::from_blocks(self.n, from_lists(&self.blocks)).expect("validated on construction or read")
    }

    pub fn int_split(&self) -> bool {
        self.chi_roots.is_some()
    }

    /// Multiplicity of block size k.
    pub fn m(&self, k: usize) -> usize {
        k.checked_sub(2).and_then(|i| self.mv.get(i)).copied().unwrap_or(0)
    }

    pub fn representable(&self) -> Option<bool> {
        self.representability.as_ref().map(|r| !r.found.is_empty())
    }

    pub fn is_classified(&self) -> bool {
        self.flags.is_some() && self.representability.is_some()
    }

    /// Checks everything a reader can check: schema, valid blocks in normal
    /// form, derived fields and canonicity.
    pub fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema_version {}", self.schema_version));
        }
        if self.blocks.iter().flatten().any(|&a| a == 0 || a > self.n) {
            return Err(format!("atom outside 1..={}", self.n));
        }
        if self.blocks.iter().any(|b| b.windows(2).any(|w| w[0] >= w[1])) {
            return Err("block is not strictly increasing".into());
        }
        let m = TwoPartition::from_blocks(self.n, from_lists(&self.blocks)).map_err(|e| e.to_string())?;
        if m.block_lists() != self.blocks {
            return Err("blocks are not in normal form".into());
        }
        let fresh = MatroidRecord::new(&m);
        if fresh.blocks != self.blocks {
            return Err("blocks are not the canonical form".into());
        }
        if (&fresh.mv, fresh.b2, fresh.chi_roots, &fresh.tutte, fresh.aut_order)
            != (&self.mv, self.b2, self.chi_roots, &self.tutte, self.aut_order)
        {
            return Err("derived invariants do not match the blocks".into());
        }
        if let Some(f) = &self.flags {
            let balanced = [f.atom_balanced, f.coatom_balanced, f.strongly_balanced];
            if balanced.iter().any(|b| b.is_some() != self.int_split()) {
                return Err("balancedness must be present exactly when chi splits".into());
            }
        }
        if let Some(r) = &self.representability {
            if r.found.iter().any(|q| !r.battery.contains(q)) {
                return Err("found field outside the battery".into());
            }
            if r.witness.as_ref().map(|w| w.field) != r.found.first().copied() {
                return Err("witness must be over the first found field".into());
            }
        }
        Ok(())
    }
}
