use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};

use crate::fifo::{FifoEntry, LeafFifo};
use crate::queue::{PriorityQueue, Semaphore};
use crate::{RecursiveIterator, Step};

/// Depth-first full evaluation on the calling thread.
pub fn evaluate_sequential<I: RecursiveIterator>(root: I) -> Vec<I::Leaf> {
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(top) = stack.last_mut() {
        match top.next_step() {
            Step::Child(c) => stack.push(c),
            Step::Leaf(l) => out.push(l),
            Step::Done => {
                stack.pop();
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub workers: usize,
    /// Once a handle yields a leaf, keep popping it on the same worker until it
    /// stops yielding leaves instead of returning it to the queue.
    pub drain_leaf_runs: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            workers: 1,
            drain_leaf_runs: false,
        }
    }
}

impl EvalOptions {
    pub fn workers(workers: usize) -> Self {
        EvalOptions {
            workers,
            ..Default::default()
        }
    }
}

struct Shared<I: RecursiveIterator> {
    queue: PriorityQueue<I>,
    sem: Semaphore,
    /// Handles queued or being evaluated.
    jobs: AtomicUsize,
    workers: AtomicUsize,
    cancelled: AtomicBool,
    fifo: Arc<LeafFifo<I::Leaf>>,
    drain_leaf_runs: bool,
    steps: AtomicU64,
    diagnostics: AtomicU64,
}

impl<I: RecursiveIterator> Shared<I> {
    fn pop_step(&self, t: &mut I) -> Step<I, I::Leaf> {
        self.steps.fetch_add(1, Ordering::Relaxed);
        match catch_unwind(AssertUnwindSafe(|| t.next_step())) {
            Ok(s) => s,
            Err(_) => {
                log::error!("recursive iterator panicked in next_step; treating it as exhausted");
                self.diagnostics.fetch_add(1, Ordering::Relaxed);
                Step::Done
            }
        }
    }

    fn push_leaf(&self, leaf: I::Leaf) {
        if !self.fifo.push(leaf) {
            self.cancelled.store(true, Ordering::SeqCst);
        }
    }

    fn requeue_with_child(&self, t: I, p: usize, child: I) {
        // Count the child before it becomes visible to other workers.
        self.jobs.fetch_add(1, Ordering::SeqCst);
        self.queue.push(t, p);
        self.sem.signal();
        self.queue.push(child, p + 1);
        self.sem.signal();
    }

    fn finish_job(&self) {
        if self.jobs.fetch_sub(1, Ordering::SeqCst) == 1 {
            self.fifo.push_end();
            self.sem.signal_n(self.workers.load(Ordering::SeqCst));
        }
    }

    fn worker_loop(&self) {
        loop {
            self.sem.wait();
            if self.cancelled.load(Ordering::SeqCst) {
                return;
            }
            let Some((mut t, p)) = self.queue.pop() else {
                return;
            };
            match self.pop_step(&mut t) {
                Step::Leaf(leaf) => {
                    self.push_leaf(leaf);
                    if self.drain_leaf_runs {
                        self.drain(t, p);
                    } else {
                        self.queue.push(t, p);
                        self.sem.signal();
                    }
                }
                Step::Child(c) => self.requeue_with_child(t, p, c),
                Step::Done => self.finish_job(),
            }
        }
    }

    fn drain(&self, mut t: I, p: usize) {
        loop {
            match self.pop_step(&mut t) {
                Step::Leaf(leaf) => self.push_leaf(leaf),
                Step::Child(c) => return self.requeue_with_child(t, p, c),
                Step::Done => return self.finish_job(),
            }
        }
    }
}

/// A running parallel evaluation. Dropping it does not stop the workers; use
/// [`Evaluation::join`] to wait for them.
pub struct Evaluation<I: RecursiveIterator> {
    shared: Arc<Shared<I>>,
    handles: Vec<JoinHandle<()>>,
}

impl<I: RecursiveIterator + 'static> Evaluation<I> {
    /// Starts one more worker against the same queue, unless the evaluation
    /// has already finished.
    pub fn add_worker(&mut self) -> bool {
        if self.shared.jobs.load(Ordering::SeqCst) == 0 {
            return false;
        }
        self.shared.workers.fetch_add(1, Ordering::SeqCst);
        let shared = Arc::clone(&self.shared);
        self.handles
            .push(thread::spawn(move || shared.worker_loop()));
        true
    }
}

impl<I: RecursiveIterator> Evaluation<I> {
    pub fn join(&mut self) {
        for h in self.handles.drain(..) {
            h.join().expect("worker thread panicked");
        }
    }

    /// Asks all workers to stop after their current step.
    pub fn cancel(&self) {
        self.shared.cancelled.store(true, Ordering::SeqCst);
        self.shared
            .sem
            .signal_n(self.shared.workers.load(Ordering::SeqCst));
    }

    /// Current job counter.
    pub fn jobs(&self) -> usize {
        self.shared.jobs.load(Ordering::SeqCst)
    }

    pub fn queued(&self) -> usize {
        self.shared.queue.len()
    }

    /// Total number of `next_step` calls made so far.
    pub fn steps(&self) -> u64 {
        self.shared.steps.load(Ordering::Relaxed)
    }

    /// Number of handles that panicked and were treated as exhausted.
    pub fn diagnostics(&self) -> u64 {
        self.shared.diagnostics.load(Ordering::Relaxed)
    }
}

/// Starts `options.workers` workers evaluating `root` and returns at once.
/// The leaves, followed by a single [`FifoEntry::End`], end up in `fifo`.
pub fn parallel_evaluate<I>(root: I, options: EvalOptions, fifo: Arc<LeafFifo<I::Leaf>>) -> Evaluation<I>
where
    I: RecursiveIterator + 'static,
    I::Leaf: 'static,
{
    let workers = options.workers.max(1);
    let shared = Arc::new(Shared {
        queue: PriorityQueue::new(),
        sem: Semaphore::new(0),
        jobs: AtomicUsize::new(1),
        workers: AtomicUsize::new(workers),
        cancelled: AtomicBool::new(false),
        fifo,
        drain_leaf_runs: options.drain_leaf_runs,
        steps: AtomicU64::new(0),
        diagnostics: AtomicU64::new(0),
    });
    shared.queue.push(root, 0);
    let handles = (0..workers)
        .map(|_| {
            let shared = Arc::clone(&shared);
            thread::spawn(move || shared.worker_loop())
        })
        .collect();
    shared.sem.signal();
    Evaluation { shared, handles }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NextAfterDone;

impl std::fmt::Display for NextAfterDone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("next called on an exhausted leaf iterator")
    }
}

impl std::error::Error for NextAfterDone {}

/// Pull-style stream over the leaves of a recursive iterator, evaluated in
/// the background.
pub struct LeafIterator<I: RecursiveIterator> {
    fifo: Arc<LeafFifo<I::Leaf>>,
    eval: Evaluation<I>,
}

impl<I> LeafIterator<I>
where
    I: RecursiveIterator + 'static,
    I::Leaf: 'static,
{
    pub fn new(root: I, options: EvalOptions, capacity: Option<usize>) -> Self {
        let fifo = Arc::new(LeafFifo::new(capacity));
        let eval = parallel_evaluate(root, options, Arc::clone(&fifo));
        LeafIterator { fifo, eval }
    }
}

impl<I: RecursiveIterator> LeafIterator<I> {
    /// Blocks until the head of the FIFO is known; true iff it is the sentinel.
    pub fn is_done(&self) -> bool {
        self.fifo.head_is_end()
    }

    /// Blocks for the next leaf.
    pub fn next_leaf(&mut self) -> Result<I::Leaf, NextAfterDone> {
        match self.fifo.pop() {
            FifoEntry::Leaf(l) => Ok(l),
            FifoEntry::End => Err(NextAfterDone),
        }
    }

    pub fn evaluation(&self) -> &Evaluation<I> {
        &self.eval
    }

    /// Waits for the sentinel and the worker threads.
    pub fn finish(mut self) -> Vec<I::Leaf> {
        let mut rest = Vec::new();
        while let Ok(l) = self.next_leaf() {
            rest.push(l);
        }
        self.eval.join();
        rest
    }
}

impl<I: RecursiveIterator> Iterator for LeafIterator<I> {
    type Item = I::Leaf;

    fn next(&mut self) -> Option<I::Leaf> {
        self.next_leaf().ok()
    }
}

impl<I: RecursiveIterator> Drop for LeafIterator<I> {
    fn drop(&mut self) {
        if !self.eval.handles.is_empty() {
            self.fifo.close();
            self.eval.cancel();
            self.eval.join();
        }
    }
}
