//! Recursive iterators ("tree-iterators") and their parallel evaluation.
//!
//! A [`RecursiveIterator`] is a pull-based producer: each call to
//! [`RecursiveIterator::next_step`] yields either a child iterator, a leaf, or
//! [`Step::Done`]. Fully evaluating the root visits a rooted tree whose leaves
//! are the produced values.
//!
//! [`parallel_evaluate`] runs a fixed pool of workers sharing a priority queue
//! of iterator handles (priority = depth, deeper first) and funnels the leaves
//! into a [`LeafFifo`]. [`LeafIterator`] wraps that into a blocking stream.

mod eval;
mod fifo;
mod queue;

pub use eval::{
    evaluate_sequential, parallel_evaluate, Evaluation, EvalOptions, LeafIterator, NextAfterDone,
};
pub use fifo::{FifoEntry, LeafFifo};
pub use queue::{PriorityQueue, Semaphore};

/// Result of popping a recursive iterator.
#[derive(Debug)]
pub enum Step<I, L> {
    /// A descendant iterator, to be evaluated one level deeper.
    Child(I),
    /// An element of the ambient set.
    Leaf(L),
    /// Exhausted. Every later call must also return `Done`.
    Done,
}

/// A single-consumer recursive iterator.
///
/// Implementors must keep returning [`Step::Done`] once exhausted. The handle
/// may be moved between threads between calls, never shared during one.
pub trait RecursiveIterator: Send + Sized {
    type Leaf: Send;

    fn next_step(&mut self) -> Step<Self, Self::Leaf>;
}
