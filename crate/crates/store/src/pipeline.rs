//! Whole-store analyses and generation into records.

use std::collections::HashMap;
use std::io::Write;

use rank3::generation::{enumerate_multiplicity_vectors, generate_raw, GenOptions, GenTree};
use rank3::MultiplicityVector;
use treeiter::{EvalOptions, LeafIterator};

use crate::io::{RecordWriter, StoreError};
use crate::record::MatroidRecord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeraoReport {
    pub n: usize,
    pub int_split: usize,
    pub representable: usize,
    pub not_inductively_free: usize,
    pub strongly_balanced: usize,
    /// Records passing every stage.
    pub survivors: Vec<MatroidRecord>,
}

impl TeraoReport {
    pub fn stages(&self) -> [usize; 4] {
        [
            self.int_split,
            self.representable,
            self.not_inductively_free,
            self.strongly_balanced,
        ]
    }
}

/// Filters the integrally splitting records of size n down to representable,
/// not inductively free and strongly balanced ones. Every integrally
/// splitting record of size n must be classified.
pub fn terao_pipeline(records: &[MatroidRecord], n: usize) -> Result<TeraoReport, StoreError> {
    let split: Vec<&MatroidRecord> = records.iter().filter(|r| r.n == n && r.int_split()).collect();
    if split.is_empty() {
        return Err(StoreError::IncompleteClassification(format!(
            "no integrally splitting records with n={n}"
        )));
    }
    let unclassified = split.iter().filter(|r| !r.is_classified()).count();
    if unclassified > 0 {
        return Err(StoreError::IncompleteClassification(format!(
            "{unclassified} of {} records with n={n} lack flags or representability",
            split.len()
        )));
    }
    let rep: Vec<&MatroidRecord> = split.iter().copied().filter(|r| r.representable() == Some(true)).collect();
    let not_if: Vec<&MatroidRecord> = rep
        .iter()
        .copied()
        .filter(|r| !r.flags.as_ref().unwrap().inductively_free)
        .collect();
    let survivors: Vec<MatroidRecord> = not_if
        .iter()
        .filter(|r| r.flags.as_ref().unwrap().strongly_balanced == Some(true))
        .map(|&r| r.clone())
        .collect();
    Ok(TeraoReport {
        n,
        int_split: split.len(),
        representable: rep.len(),
        not_inductively_free: not_if.len(),
        strongly_balanced: survivors.len(),
        survivors,
    })
}

/// Integrally splitting records of size n whose multiplicity vector no other
/// stored record of size n shares. Uniqueness is relative to the store, not
/// to all matroids.
pub fn tutte_unique_within(records: &[MatroidRecord], n: usize) -> Result<usize, StoreError> {
    let mut by_mv: HashMap<&[usize], usize> = HashMap::new();
    for r in records.iter().filter(|r| r.n == n) {
        *by_mv.entry(&r.mv).or_default() += 1;
    }
    if by_mv.is_empty() {
        return Err(StoreError::IncompleteClassification(format!("no records with n={n}")));
    }
    Ok(records
        .iter()
        .filter(|r| r.n == n && r.int_split() && by_mv[r.mv.as_slice()] == 1)
        .count())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoreStats {
    pub n: usize,
    pub total: usize,
    pub int_split: usize,
    pub classified: usize,
    pub supersolvable: usize,
    pub inductively_free: usize,
    pub divisionally_free: usize,
    pub representable: usize,
}

/// Per-size counts, ascending in n.
pub fn stats(records: &[MatroidRecord]) -> Vec<StoreStats> {
    let mut by_n: std::collections::BTreeMap<usize, StoreStats> = Default::default();
    for r in records {
        let s = by_n.entry(r.n).or_insert(StoreStats {
            n: r.n,
            total: 0,
            int_split: 0,
            classified: 0,
            supersolvable: 0,
            inductively_free: 0,
            divisionally_free: 0,
            representable: 0,
        });
        s.total += 1;
        s.int_split += usize::from(r.int_split());
        s.classified += usize::from(r.is_classified());
        if let Some(f) = &r.flags {
            s.supersolvable += usize::from(f.supersolvable);
            s.inductively_free += usize::from(f.inductively_free);
            s.divisionally_free += usize::from(f.divisionally_free);
        }
        s.representable += usize::from(r.representable() == Some(true));
    }
    by_n.into_values().collect()
}

/// What to generate.
#[derive(Debug, Clone)]
pub enum GenTarget {
    /// Every multiplicity vector of size n, optionally only integrally
    /// splitting ones.
    Size { n: usize, int_split: bool },
    Vector(MultiplicityVector),
}

impl GenTarget {
    pub fn vectors(&self) -> Vec<MultiplicityVector> {
        match self {
            GenTarget::Size { n, int_split } => enumerate_multiplicity_vectors(*n, *int_split),
            GenTarget::Vector(mv) => vec![mv.clone()],
        }
    }
}

/// Generates and streams unclassified records into `writer`, the only
/// writer. Sequential runs emit in a fixed order; parallel runs emit the
/// same set in arrival order. Returns the number of records written.
pub fn generate_into<W: Write>(
    target: &GenTarget,
    opts: &GenOptions,
    writer: &mut RecordWriter<W>,
) -> Result<usize, StoreError> {
    let tree = GenTree::for_mvs(&target.vectors(), opts.prune);
    let before = writer.len();
    if opts.workers == 0 {
        for m in generate_raw(tree, opts) {
            writer.push(&MatroidRecord::new(&m))?;
        }
    } else {
        let eval = EvalOptions {
            drain_leaf_runs: opts.drain_leaf_runs,
            ..EvalOptions::workers(opts.workers)
        };
        let leaves: LeafIterator<GenTree> = LeafIterator::new(tree, eval, opts.fifo_capacity);
        for m in leaves {
            writer.push(&MatroidRecord::new(&m))?;
        }
    }
    Ok(writer.len() - before)
}

/// Generated matroids as unclassified records, sorted by key.
pub fn generate_records(target: &GenTarget, opts: &GenOptions) -> Vec<MatroidRecord> {
    let tree = GenTree::for_mvs(&target.vectors(), opts.prune);
    let mut out: Vec<MatroidRecord> = generate_raw(tree, opts).iter().map(MatroidRecord::new).collect();
    out.sort_by(|a, b| a.key().cmp(&b.key()));
    out
}

