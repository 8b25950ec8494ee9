use std::collections::VecDeque;
use std::sync::{Condvar, Mutex};

/// An entry of the leaf FIFO: a leaf, or the terminal sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FifoEntry<L> {
    Leaf(L),
    End,
}

struct State<L> {
    queue: VecDeque<FifoEntry<L>>,
    leaves: usize,
    ended: bool,
    closed: bool,
}

/// Bounded FIFO of leaves followed by a single sentinel.
///
/// Producers block in [`LeafFifo::push`] while the number of queued leaves
/// equals the capacity. The sentinel never counts against the capacity.
pub struct LeafFifo<L> {
    capacity: Option<usize>,
    state: Mutex<State<L>>,
    not_empty: Condvar,
    not_full: Condvar,
}

impl<L> LeafFifo<L> {
    /// `capacity = None` means unbounded. A capacity of zero is treated as one.
    pub fn new(capacity: Option<usize>) -> Self {
        LeafFifo {
            capacity: capacity.map(|c| c.max(1)),
            state: Mutex::new(State {
                queue: VecDeque::new(),
                leaves: 0,
                ended: false,
                closed: false,
            }),
            not_empty: Condvar::new(),
            not_full: Condvar::new(),
        }
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    /// Appends a leaf, blocking while full. Returns `false` if the consumer
    /// has closed the FIFO; the leaf is dropped in that case.
    pub fn push(&self, leaf: L) -> bool {
        let mut st = self.state.lock().unwrap();
        loop {
            if st.closed {
                return false;
            }
            assert!(!st.ended, "leaf pushed after the sentinel");
            match self.capacity {
                Some(cap) if st.leaves >= cap => st = self.not_full.wait(st).unwrap(),
                _ => break,
            }
        }
        st.queue.push_back(FifoEntry::Leaf(leaf));
        st.leaves += 1;
        self.not_empty.notify_one();
        true
    }

    /// Appends the sentinel. Later calls are ignored.
    pub fn push_end(&self) {
        let mut st = self.state.lock().unwrap();
        if st.ended {
            return;
        }
        st.ended = true;
        st.queue.push_back(FifoEntry::End);
        self.not_empty.notify_all();
    }

    /// Blocks until an entry is available and returns a reference-free peek:
    /// `true` iff the head is the sentinel.
    pub fn head_is_end(&self) -> bool {
        let mut st = self.state.lock().unwrap();
        loop {
            if let Some(front) = st.queue.front() {
                return matches!(front, FifoEntry::End);
            }
            st = self.not_empty.wait(st).unwrap();
        }
    }

    /// Blocks until an entry is available. The sentinel is never removed.
    pub fn pop(&self) -> FifoEntry<L> {
        let mut st = self.state.lock().unwrap();
        loop {
            match st.queue.front() {
                Some(FifoEntry::End) => return FifoEntry::End,
                Some(FifoEntry::Leaf(_)) => {
                    let e = st.queue.pop_front().unwrap();
                    st.leaves -= 1;
                    self.not_full.notify_one();
                    return e;
                }
                None => st = self.not_empty.wait(st).unwrap(),
            }
        }
    }

    /// Consumer-side shutdown: wakes blocked producers, which then drop leaves.
    pub fn close(&self) {
        let mut st = self.state.lock().unwrap();
        st.closed = true;
        self.not_full.notify_all();
        self.not_empty.notify_all();
    }

    /// Number of queued leaves (sentinel excluded).
    pub fn len(&self) -> usize {
        self.state.lock().unwrap().leaves
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
