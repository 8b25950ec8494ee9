use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treeiter::{
    evaluate_sequential, parallel_evaluate, EvalOptions, FifoEntry, LeafFifo, LeafIterator,
    NextAfterDone, RecursiveIterator, Step,
};

/// Matched parentheses: depth i holds words with i+1 pairs; the parent of a
/// word removes its leftmost "()".
struct Parens {
    word: String,
    depth: usize,
    target_depth: usize,
    children: Vec<String>,
}

fn remove_leftmost_pair(w: &str) -> String {
    let i = w.find("()").expect("word contains a pair");
    format!("{}{}", &w[..i], &w[i + 2..])
}

impl Parens {
    fn new(word: &str, depth: usize, target_depth: usize) -> Self {
        let mut kids = BTreeSet::new();
        for p in 0..=word.len() {
            let cand = format!("{}(){}", &word[..p], &word[p..]);
            if remove_leftmost_pair(&cand) == word {
                kids.insert(cand);
            }
        }
        Parens {
            word: word.to_string(),
            depth,
            target_depth,
            children: kids.into_iter().rev().collect(),
        }
    }
}

impl RecursiveIterator for Parens {
    type Leaf = String;

    fn next_step(&mut self) -> Step<Self, String> {
        if self.depth >= self.target_depth {
            // The root of a depth-0 tree is itself the only leaf.
            if self.children.is_empty() {
                return Step::Done;
            }
            self.children.clear();
            return Step::Leaf(self.word.clone());
        }
        match self.children.pop() {
            None => Step::Done,
            Some(c) if self.depth + 1 == self.target_depth => Step::Leaf(c),
            Some(c) => Step::Child(Parens::new(&c, self.depth + 1, self.target_depth)),
        }
    }
}

fn parens_root(pairs: usize) -> Parens {
    Parens::new("()", 0, pairs - 1)
}

/// Bracketings of a word, refined one parenthesis depth at a time.
#[derive(Clone, Debug)]
enum Expr {
    Atom(char),
    Pair(Box<Expr>, Box<Expr>),
    Open(Vec<char>),
}

impl Expr {
    fn render(&self, top: bool) -> String {
        match self {
            Expr::Atom(c) => c.to_string(),
            Expr::Pair(a, b) => {
                let inner = format!("{}{}", a.render(false), b.render(false));
                if top {
                    inner
                } else {
                    format!("({inner})")
                }
            }
            Expr::Open(cs) => format!("[{}]", cs.iter().collect::<String>()),
        }
    }

    fn part(cs: &[char]) -> Expr {
        match cs.len() {
            1 => Expr::Atom(cs[0]),
            2 => Expr::Pair(Box::new(Expr::Atom(cs[0])), Box::new(Expr::Atom(cs[1]))),
            _ => Expr::Open(cs.to_vec()),
        }
    }

    fn is_resolved(&self) -> bool {
        match self {
            Expr::Atom(_) => true,
            Expr::Pair(a, b) => a.is_resolved() && b.is_resolved(),
            Expr::Open(_) => false,
        }
    }

    /// All refinements splitting every open group once.
    fn refinements(&self) -> Vec<Expr> {
        match self {
            Expr::Atom(_) => vec![self.clone()],
            Expr::Open(cs) => (1..cs.len())
                .map(|k| Expr::Pair(Box::new(Expr::part(&cs[..k])), Box::new(Expr::part(&cs[k..]))))
                .collect(),
            Expr::Pair(a, b) => {
                let mut out = Vec::new();
                for x in a.refinements() {
                    for y in b.refinements() {
                        out.push(Expr::Pair(Box::new(x.clone()), Box::new(y)));
                    }
                }
                out
            }
        }
    }
}

struct Magma {
    pending: Vec<Expr>,
}

impl Magma {
    fn root(letters: usize) -> Self {
        let word: Vec<char> = ('a'..='z').take(letters).collect();
        Magma {
            pending: Expr::Open(word).refinements().into_iter().rev().collect(),
        }
    }
}

impl RecursiveIterator for Magma {
    type Leaf = String;

    fn next_step(&mut self) -> Step<Self, String> {
        match self.pending.pop() {
            None => Step::Done,
            Some(e) if e.is_resolved() => Step::Leaf(e.render(true)),
            Some(e) => Step::Child(Magma {
                pending: e.refinements().into_iter().rev().collect(),
            }),
        }
    }
}

/// Explicit random tree with unique leaf ids.
#[derive(Clone, Debug)]
enum Node {
    Leaf(u64),
    Inner(Vec<Node>),
}

struct TreeIter {
    rest: Vec<Node>,
}

impl RecursiveIterator for TreeIter {
    type Leaf = u64;

    fn next_step(&mut self) -> Step<Self, u64> {
        match self.rest.pop() {
            None => Step::Done,
            Some(Node::Leaf(x)) => Step::Leaf(x),
            Some(Node::Inner(mut kids)) => {
                kids.reverse();
                Step::Child(TreeIter { rest: kids })
            }
        }
    }
}

fn random_tree(rng: &mut ChaCha8Rng, depth: usize, next_id: &mut u64) -> Vec<Node> {
    let width = rng.gen_range(0..4);
    (0..width)
        .map(|_| {
            if depth == 0 || rng.gen_bool(0.4) {
                *next_id += 1;
                Node::Leaf(*next_id)
            } else {
                Node::Inner(random_tree(rng, depth - 1, next_id))
            }
        })
        .collect()
}

fn tree_root(kids: Vec<Node>) -> TreeIter {
    let mut rest = kids;
    rest.reverse();
    TreeIter { rest }
}

fn collect_parallel<I>(root: I, workers: usize, capacity: Option<usize>) -> Vec<I::Leaf>
where
    I: RecursiveIterator + 'static,
    I::Leaf: 'static,
{
    LeafIterator::new(root, EvalOptions::workers(workers), capacity).finish()
}

#[test]
fn matched_parentheses_catalan() {
    let catalan = [1usize, 1, 2, 5, 14, 42, 132];
    for pairs in 2..=6 {
        let leaves = evaluate_sequential(parens_root(pairs));
        assert_eq!(leaves.len(), catalan[pairs], "pairs = {pairs}");
        let set: HashSet<_> = leaves.iter().collect();
        assert_eq!(set.len(), leaves.len());
    }
    let leaves = collect_parallel(parens_root(5), 1, None);
    assert_eq!(leaves.len(), 42);
}

#[test]
fn magma_bracketings() {
    let mut l = LeafIterator::new(Magma::root(4), EvalOptions::workers(1), None);
    let mut got = Vec::new();
    while !l.is_done() {
        got.push(l.next_leaf().unwrap());
    }
    assert_eq!(l.next_leaf(), Err(NextAfterDone));
    got.sort();
    let mut want: Vec<String> = ["((ab)c)d", "(a(bc))d", "(ab)(cd)", "a((bc)d)", "a(b(cd))"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    want.sort();
    assert_eq!(got, want);
    assert_eq!(evaluate_sequential(Magma::root(6)).len(), 42);
}

#[test]
fn exhausted_root_yields_only_sentinel() {
    let fifo = Arc::new(LeafFifo::new(Some(4)));
    let mut ev = parallel_evaluate(tree_root(vec![]), EvalOptions::workers(3), Arc::clone(&fifo));
    ev.join();
    assert_eq!(fifo.pop(), FifoEntry::End);
    assert_eq!(ev.jobs(), 0);
    let l = LeafIterator::new(tree_root(vec![]), EvalOptions::workers(2), None);
    assert!(l.is_done());
}

#[test]
fn parallel_matches_sequential_on_catalan() {
    let want: BTreeSet<String> = evaluate_sequential(parens_root(7)).into_iter().collect();
    for workers in [1, 2, 4, 8] {
        let got = collect_parallel(parens_root(7), workers, Some(3));
        assert_eq!(got.len(), want.len());
        assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), want);
    }
}

#[test]
fn random_tree_stress() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let capacities = [Some(1), Some(16), None];
    let workers = [1, 2, 4, 8];
    for i in 0..10_000 {
        let mut id = 0;
        let kids = random_tree(&mut rng, 4, &mut id);
        let want = evaluate_sequential(tree_root(kids.clone()));
        let cap = capacities[i % 3];
        let w = workers[(i / 3) % 4];
        let drain = i % 7 == 0;
        let opts = EvalOptions {
            workers: w,
            drain_leaf_runs: drain,
        };
        let mut got = LeafIterator::new(tree_root(kids), opts, cap).finish();
        assert_eq!(got.len(), want.len(), "tree {i}");
        got.sort();
        let mut want = want;
        want.sort();
        assert_eq!(got, want, "tree {i}");
    }
}

#[test]
fn deeper_handles_are_preferred() {
    // Record the depth at which each step is taken with one worker: after a
    // child is produced, the next step must be taken on that child.
    struct Probe {
        depth: usize,
        left: usize,
        log: Arc<Mutex<Vec<usize>>>,
    }
    impl RecursiveIterator for Probe {
        type Leaf = ();
        fn next_step(&mut self) -> Step<Self, ()> {
            self.log.lock().unwrap().push(self.depth);
            if self.left == 0 || self.depth == 3 {
                return Step::Done;
            }
            self.left -= 1;
            Step::Child(Probe {
                depth: self.depth + 1,
                left: 2,
                log: Arc::clone(&self.log),
            })
        }
    }
    let log = Arc::new(Mutex::new(Vec::new()));
    let root = Probe {
        depth: 0,
        left: 2,
        log: Arc::clone(&log),
    };
    LeafIterator::new(root, EvalOptions::workers(1), None).finish();
    let log = log.lock().unwrap();
    for w in log.windows(2) {
        // A step at depth d that produced a child is followed by a step at d+1,
        // otherwise depth never increases by more than one.
        assert!(w[1] <= w[0] + 1);
    }
    assert_eq!(log[..4], [0, 1, 2, 3]);
}

#[test]
fn slow_consumer_with_capacity_one_loses_nothing() {
    let fifo_hits = Arc::new(AtomicUsize::new(0));
    let mut l = LeafIterator::new(parens_root(6), EvalOptions::workers(4), Some(1));
    let mut n = 0;
    while let Ok(_) = l.next_leaf() {
        n += 1;
        if n % 20 == 0 {
            thread::sleep(Duration::from_millis(1));
        }
        fifo_hits.fetch_add(1, Ordering::Relaxed);
    }
    assert_eq!(n, 132);
    assert!(l.is_done());
}

#[test]
fn panicking_handle_does_not_block_termination() {
    struct Bad(u32);
    impl RecursiveIterator for Bad {
        type Leaf = u32;
        fn next_step(&mut self) -> Step<Self, u32> {
            self.0 += 1;
            match self.0 {
                1 => Step::Leaf(7),
                2 => Step::Child(Bad(10)),
                3 => Step::Done,
                11 => panic!("malformed handle"),
                _ => Step::Done,
            }
        }
    }
    let l = LeafIterator::new(Bad(0), EvalOptions::workers(2), None);
    let got = l.finish();
    assert_eq!(got, vec![7]);
}

#[test]
fn late_worker_joins_same_queue() {
    let fifo = Arc::new(LeafFifo::new(None));
    let mut ev = parallel_evaluate(parens_root(8), EvalOptions::workers(1), Arc::clone(&fifo));
    ev.add_worker();
    let mut n = 0;
    while let FifoEntry::Leaf(_) = fifo.pop() {
        n += 1;
    }
    ev.join();
    assert_eq!(n, 1430);
    assert_eq!(ev.jobs(), 0);
    assert_eq!(ev.queued(), 0);
}

#[test]
fn dropping_leaf_iterator_early_stops_workers() {
    let mut l = LeafIterator::new(parens_root(9), EvalOptions::workers(3), Some(2));
    for _ in 0..5 {
        l.next_leaf().unwrap();
    }
    drop(l);
}
