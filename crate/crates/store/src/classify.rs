//! Flags and representability for records.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rank3::block::from_lists;
use rank3::represent::{default_battery, representability_summary, FieldSpec, Outcome};
use rank3::{
    balancedness, is_divisionally_free, is_inductively_free, is_supersolvable, IfCache, TwoPartition,
};

use crate::record::{Flags, MatroidRecord, Representability, Witness};

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub battery: Vec<FieldSpec>,
    /// Rank-2 deletions do not count as inductively free.
    pub strict_inductive: bool,
    /// 0 and 1 both classify on the calling thread.
    pub workers: usize,
    /// Recompute records that already carry flags.
    pub force: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            battery: default_battery(),
            strict_inductive: false,
            workers: 1,
            force: false,
        }
    }
}

impl ClassifyOptions {
    pub fn cache(&self) -> IfCache {
        if self.strict_inductive {
            IfCache::strict()
        } else {
            IfCache::new()
        }
    }
}

pub fn flags(m: &TwoPartition, cache: &IfCache) -> Flags {
    let bal = balancedness(m).ok();
    Flags {
        supersolvable: is_supersolvable(m),
        divisionally_free: is_divisionally_free(m),
        inductively_free: is_inductively_free(m, cache),
        strict_inductive: cache.is_strict(),
        atom_balanced: bal.map(|b| b.atom_balanced),
        coatom_balanced: bal.map(|b| b.coatom_balanced),
        strongly_balanced: bal.map(|b| b.strongly_balanced),
    }
}

pub fn representability(m: &TwoPartition, battery: &[FieldSpec]) -> Representability {
    let summary = representability_summary(m, battery);
    let mut found = Vec::new();
    let mut witness = None;
    for r in summary.results {
        if let Outcome::Found(a) = r.outcome {
            found.push(r.field);
            witness.get_or_insert(Witness {
                field: r.field,
                columns: a.columns,
            });
        }
    }
    Representability {
        battery: battery.iter().map(|f| f.order()).collect(),
        found,
        witness,
    }
}

/// Fully classified record of `m`. Inductive freeness of smaller matroids is
/// taken from `cache` when present.
pub fn classify(m: &TwoPartition, opts: &ClassifyOptions, cache: &IfCache) -> MatroidRecord {
    let mut r = MatroidRecord::new(m);
    classify_record(&mut r, opts, cache);
    r
}

pub fn classify_record(r: &mut MatroidRecord, opts: &ClassifyOptions, cache: &IfCache) {
    let m = r.matroid();
    r.flags = Some(flags(&m, cache));
    r.representability = Some(representability(&m, &opts.battery));
}

fn needs_work(r: &MatroidRecord, opts: &ClassifyOptions) -> bool {
    opts.force
        || r.flags.as_ref().map_or(true, |f| f.strict_inductive != opts.strict_inductive)
        || r.representability.as_ref().map_or(true, |p| {
            p.battery != opts.battery.iter().map(|f| f.order()).collect::<Vec<_>>()
        })
}

/// Classifies every record that lacks flags in the requested mode, or a
/// representability result for the requested battery. Records go by
/// ascending n, so the inductive-freeness memo holds every stored smaller
/// matroid before it is needed. Returns the number of records classified.
pub fn classify_all(records: &mut [MatroidRecord], opts: &ClassifyOptions) -> usize {
    let cache = opts.cache();
    for r in records.iter() {
        if let Some(f) = &r.flags {
            if f.strict_inductive == opts.strict_inductive {
                cache.insert_canonical(r.n, from_lists(&r.blocks), f.inductively_free);
            }
        }
    }
    let mut order: Vec<usize> = (0..records.len()).filter(|&i| needs_work(&records[i], opts)).collect();
    order.sort_by_key(|&i| records[i].n);
    let total = order.len();
    let mut start = 0;
    while start < order.len() {
        let n = records[order[start]].n;
        let end = start + order[start..].iter().take_while(|&&i| records[i].n == n).count();
        let batch: Vec<MatroidRecord> = order[start..end].iter().map(|&i| records[i].clone()).collect();
        for (&i, r) in order[start..end].iter().zip(classify_batch(batch, opts, &cache)) {
            records[i] = r;
        }
        log::info!("classified {} records with n={n}", end - start);
        start = end;
    }
    total
}

fn classify_batch(mut batch: Vec<MatroidRecord>, opts: &ClassifyOptions, cache: &IfCache) -> Vec<MatroidRecord> {
    let workers = opts.workers.max(1).min(batch.len().max(1));
    if workers == 1 {
        for r in &mut batch {
            classify_record(r, opts, cache);
        }
        return batch;
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<MatroidRecord>> = batch.into_iter().map(Mutex::new).collect();
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(slot) = slots.get(i) else { break };
                classify_record(&mut slot.lock().unwrap(), opts, cache);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap()).collect()
}
