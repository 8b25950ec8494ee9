//! Isomorph-free generation of 2-partitions, one block size per tree level.

mod mv;
mod prune;
mod state;

use std::collections::VecDeque;

use treeiter::{evaluate_sequential, EvalOptions, LeafIterator, RecursiveIterator, Step};

pub use mv::enumerate_multiplicity_vectors;
pub use prune::{atom_balance_bound, capacity_ok, deficiencies, parity_obstructed};
pub use state::{deficiency_parity_prune, iterator_from_state, GenerationIter, GenerationState, PruneOptions};

use crate::matroid::{MultiplicityVector, TwoPartition};
use crate::permgroup::canonical_form;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOptions {
    /// 0 evaluates sequentially on the calling thread.
    pub workers: usize,
    /// Leaf queue capacity for parallel runs; `None` is unbounded.
    pub fifo_capacity: Option<usize>,
    pub drain_leaf_runs: bool,
    pub prune: PruneOptions,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            workers: 0,
            fifo_capacity: None,
            drain_leaf_runs: false,
            prune: PruneOptions::default(),
        }
    }
}

impl GenOptions {
    pub fn sequential() -> Self {
        GenOptions::default()
    }

    pub fn parallel(workers: usize) -> Self {
        GenOptions {
            workers,
            ..GenOptions::default()
        }
    }

    pub fn with_prune(mut self, prune: PruneOptions) -> Self {
        self.prune = prune;
        self
    }
}

/// A generation tree, or a forest of them under a virtual root.
pub enum GenTree {
    Forest(VecDeque<GenerationState>, PruneOptions),
    Node(GenerationIter),
}

impl GenTree {
    pub fn for_mv(mv: &MultiplicityVector, prune: PruneOptions) -> GenTree {
        GenTree::Forest(VecDeque::from([GenerationState::initial(mv)]), prune)
    }

    pub fn for_mvs(mvs: &[MultiplicityVector], prune: PruneOptions) -> GenTree {
        GenTree::Forest(mvs.iter().map(GenerationState::initial).collect(), prune)
    }
}

impl RecursiveIterator for GenTree {
    type Leaf = TwoPartition;

    fn next_step(&mut self) -> Step<Self, TwoPartition> {
        match self {
            GenTree::Forest(pending, prune) => {
                while let Some(s) = pending.pop_front() {
                    if prune.parity && deficiency_parity_prune(&s) {
                        continue;
                    }
                    return Step::Child(GenTree::Node(iterator_from_state(s, *prune)));
                }
                Step::Done
            }
            GenTree::Node(it) => match it.next_step() {
                Step::Child(c) => Step::Child(GenTree::Node(c)),
                Step::Leaf(l) => Step::Leaf(l),
                Step::Done => Step::Done,
            },
        }
    }
}

/// Leaves in emission order, without canonicalization.
pub fn generate_raw(tree: GenTree, opts: &GenOptions) -> Vec<TwoPartition> {
    if opts.workers == 0 {
        return evaluate_sequential(tree);
    }
    let eval = EvalOptions {
        drain_leaf_runs: opts.drain_leaf_runs,
        ..EvalOptions::workers(opts.workers)
    };
    LeafIterator::new(tree, eval, opts.fifo_capacity).finish()
}

/// Converts generated leaves to their global minimal images, sorted.
pub fn canonicalize_all(raw: Vec<TwoPartition>) -> Vec<TwoPartition> {
    let mut out: Vec<TwoPartition> = raw
        .into_iter()
        .map(|m| {
            let c = canonical_form(&m);
            debug_assert_eq!(c, m, "leaves are emitted in minimal form");
            c
        })
        .collect();
    out.sort();
    out
}

/// All nonisomorphic 2-partitions with multiplicity vector `mv`, canonical
/// and sorted.
pub fn generate_all(mv: &MultiplicityVector, opts: &GenOptions) -> Vec<TwoPartition> {
    canonicalize_all(generate_raw(GenTree::for_mv(mv, opts.prune), opts))
}

/// All nonisomorphic 2-partitions on n atoms, optionally only those with an
/// integrally splitting characteristic polynomial.
pub fn generate_for_n(n: usize, int_split: bool, opts: &GenOptions) -> Vec<TwoPartition> {
    let mvs = enumerate_multiplicity_vectors(n, int_split);
    canonicalize_all(generate_raw(GenTree::for_mvs(&mvs, opts.prune), opts))
}

