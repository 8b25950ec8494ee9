use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::{Condvar, Mutex};

struct Entry<T> {
    priority: usize,
    seq: u64,
    item: T,
}

impl<T> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority && self.seq == other.seq
    }
}

impl<T> Eq for Entry<T> {}

impl<T> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Entry<T> {
    // Higher priority first; among equal priorities the most recent push wins.
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .cmp(&other.priority)
            .then(self.seq.cmp(&other.seq))
    }
}

struct Heap<T> {
    heap: BinaryHeap<Entry<T>>,
    seq: u64,
}

/// Shared max-priority queue with LIFO tie breaking.
pub struct PriorityQueue<T> {
    inner: Mutex<Heap<T>>,
}

impl<T> Default for PriorityQueue<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> PriorityQueue<T> {
    pub fn new() -> Self {
        PriorityQueue {
            inner: Mutex::new(Heap {
                heap: BinaryHeap::new(),
                seq: 0,
            }),
        }
    }

    pub fn push(&self, item: T, priority: usize) {
        let mut g = self.inner.lock().unwrap();
        g.seq += 1;
        let seq = g.seq;
        g.heap.push(Entry {
            priority,
            seq,
            item,
        });
    }

    pub fn pop(&self) -> Option<(T, usize)> {
        let mut g = self.inner.lock().unwrap();
        g.heap.pop().map(|e| (e.item, e.priority))
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Counting semaphore.
pub struct Semaphore {
    count: Mutex<usize>,
    cv: Condvar,
}

impl Semaphore {
    pub fn new(initial: usize) -> Self {
        Semaphore {
            count: Mutex::new(initial),
            cv: Condvar::new(),
        }
    }

    pub fn signal(&self) {
        self.signal_n(1);
    }

    pub fn signal_n(&self, n: usize) {
        let mut c = self.count.lock().unwrap();
        *c += n;
        if n == 1 {
            self.cv.notify_one();
        } else {
            self.cv.notify_all();
        }
    }

    pub fn wait(&self) {
        let mut c = self.count.lock().unwrap();
        while *c == 0 {
            c = self.cv.wait(c).unwrap();
        }
        *c -= 1;
    }

    pub fn value(&self) -> usize {
        *self.count.lock().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deeper_first_then_lifo() {
        let q = PriorityQueue::new();
        q.push("a", 0);
        q.push("b", 1);
        q.push("c", 1);
        q.push("d", 0);
        assert_eq!(q.pop(), Some(("c", 1)));
        assert_eq!(q.pop(), Some(("b", 1)));
        assert_eq!(q.pop(), Some(("d", 0)));
        assert_eq!(q.pop(), Some(("a", 0)));
        assert_eq!(q.pop(), None);
    }

    #[test]
    fn semaphore_counts() {
        let s = Semaphore::new(0);
        s.signal_n(3);
        s.wait();
        s.wait();
        assert_eq!(s.value(), 1);
    }
}
