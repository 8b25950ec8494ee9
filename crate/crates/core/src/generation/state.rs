use std::collections::HashSet;
use std::sync::Arc;

use treeiter::{RecursiveIterator, Step};

use super::prune::{atom_balance_bound, capacity_ok, parity_obstructed};
use crate::block::Block;
use crate::matroid::{MatroidError, MultiplicityVector, TwoPartition};
use crate::permgroup::{blocklist_stabilizer, is_minimal_in_orbit, PermGroup};

/// Pruning switches. Every switch only removes dead ends or non-minimal
/// candidates, so the output does not depend on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruneOptions {
    pub parity: bool,
    pub atom_balance: bool,
    pub capacity: bool,
    pub twins: bool,
}

impl Default for PruneOptions {
    fn default() -> Self {
        PruneOptions {
            parity: true,
            atom_balance: true,
            capacity: true,
            twins: true,
        }
    }
}

impl PruneOptions {
    pub fn none() -> Self {
        PruneOptions {
            parity: false,
            atom_balance: false,
            capacity: false,
            twins: false,
        }
    }
}

/// An admissible partial 2-partition of some level: all blocks larger than
/// `level` are placed, none of size ≤ `level`.
#[derive(Clone, Debug)]
pub struct GenerationState {
    pub n: usize,
    pub mv: Arc<MultiplicityVector>,
    pub level: usize,
    pub blocks: Vec<Block>,
    /// Per atom (0-based), the atoms it already shares a block with.
    cover: Vec<u32>,
    /// Per atom, the number of placed blocks of size ≥ 3 through it.
    dep_count: Vec<u8>,
}

impl GenerationState {
    pub fn initial(mv: &MultiplicityVector) -> Self {
        let n = mv.n();
        GenerationState {
            n,
            mv: Arc::new(mv.clone()),
            level: mv.largest_size(),
            blocks: Vec::new(),
            cover: vec![0; n],
            dep_count: vec![0; n],
        }
    }

    /// Builds a state from explicit blocks, which must be exactly the blocks
    /// of size > `level` required by `mv` and pairwise share at most one atom.
    pub fn from_blocks(mv: &MultiplicityVector, level: usize, blocks: Vec<Block>) -> Result<Self, MatroidError> {
        let n = mv.n();
        let mut st = GenerationState {
            n,
            mv: Arc::new(mv.clone()),
            level,
            blocks: Vec::new(),
            cover: vec![0; n],
            dep_count: vec![0; n],
        };
        let blocks = crate::block::normalized(blocks);
        for b in &blocks {
            if b.len() < 2 || b.atoms().any(|a| a > n) {
                return Err(MatroidError::ImproperBlock(b.to_vec()));
            }
            for a in b.atoms() {
                let clash = st.cover[a - 1] & b.0;
                if clash != 0 {
                    let c = clash.trailing_zeros() as usize + 1;
                    return Err(MatroidError::PairCoveredTwice(a.min(c), a.max(c)));
                }
            }
            st.add(*b);
        }
        for (k, c) in mv.entries() {
            let have = blocks.iter().filter(|b| b.len() == k).count();
            if (k > level && have != c) || (k <= level && have != 0) {
                return Err(MatroidError::CoverageMismatch { n });
            }
        }
        st.blocks = blocks;
        Ok(st)
    }

    fn add(&mut self, b: Block) {
        for a in b.atoms() {
            self.cover[a - 1] |= b.0 & !(1 << (a - 1));
            if b.len() >= 3 {
                self.dep_count[a - 1] += 1;
            }
        }
    }

    pub fn cover(&self) -> &[u32] {
        &self.cover
    }

    pub fn dep_counts(&self) -> &[u8] {
        &self.dep_count
    }

    /// Deficiency of atom `e` (1-based).
    pub fn deficiency(&self, e: usize) -> usize {
        self.n - 1 - self.cover[e - 1].count_ones() as usize
    }

    fn child(&self, group: &[Block]) -> GenerationState {
        let mut st = self.clone();
        st.blocks.extend_from_slice(group);
        for &b in group {
            st.add(b);
        }
        st.level = self.mv.next_level_below(self.level);
        st
    }
}

/// Parity test on the levels still to be placed.
pub fn deficiency_parity_prune(state: &GenerationState) -> bool {
    parity_obstructed(state.n, &state.mv, state.level, &state.cover)
}

struct Frame {
    /// Candidates with the number of unfiltered candidates from each one on;
    /// later blocks of the group all come from that tail.
    cands: Vec<(Block, usize)>,
    next: usize,
    cover: Vec<u32>,
    dep: Vec<u8>,
}

struct LevelSearch {
    stab: Arc<PermGroup>,
    /// `twin_a[v]`: atoms u (0-based bits) with (u v) fixing the placed blocks.
    twin_a: Vec<u32>,
    chosen: Vec<Block>,
    frames: Vec<Frame>,
    app: HashSet<Vec<Block>>,
}

/// The recursive iterator of one state: each step yields the child for the
/// next minimal group of blocks at this level, or a complete 2-partition.
pub struct GenerationIter {
    state: GenerationState,
    opts: PruneOptions,
    search: Option<LevelSearch>,
    done: bool,
}

pub fn iterator_from_state(state: GenerationState, opts: PruneOptions) -> GenerationIter {
    GenerationIter {
        state,
        opts,
        search: None,
        done: false,
    }
}

fn transposition_fixes(blocks: &[Block], set: &HashSet<u32>, u: usize, v: usize) -> bool {
    let (bu, bv) = (1u32 << u, 1u32 << v);
    blocks.iter().all(|b| {
        (b.0 & bu == 0) == (b.0 & bv == 0) || set.contains(&(b.0 ^ bu ^ bv))
    })
}

fn twin_partners(n: usize, blocks: &[Block]) -> Vec<u32> {
    let set: HashSet<u32> = blocks.iter().map(|b| b.0).collect();
    let mut out = vec![0u32; n];
    for v in 0..n {
        for u in 0..v {
            if transposition_fixes(blocks, &set, u, v) {
                out[v] |= 1 << u;
                out[u] |= 1 << v;
            }
        }
    }
    out
}

/// Pushes every k-subset of `allowed` that is pairwise uncovered and
/// lexicographically greater than `lower`, in lexicographic order.
fn enumerate_blocks(n: usize, k: usize, allowed: u32, cover: &[u32], lower: &[usize], out: &mut Vec<Block>) {
    fn rec(
        n: usize,
        k: usize,
        from: usize,
        picked: u32,
        depth: usize,
        allowed: u32,
        cover: &[u32],
        lower: &[usize],
        tight: bool,
        out: &mut Vec<Block>,
    ) {
        if depth == k {
            if !tight {
                out.push(Block(picked));
            }
            return;
        }
        let lo = if tight { from.max(lower[depth]) } else { from };
        for a in lo..n {
            if n - a < k - depth {
                break;
            }
            if allowed >> a & 1 == 0 || cover[a] & picked != 0 {
                continue;
            }
            let still_tight = tight && a == lower[depth];
            rec(n, k, a + 1, picked | 1 << a, depth + 1, allowed, cover, lower, still_tight, out);
        }
    }
    let tight = !lower.is_empty();
    rec(n, k, 0, 0, 0, allowed, cover, lower, tight, out);
}

impl GenerationIter {
    pub fn state(&self) -> &GenerationState {
        &self.state
    }

    fn target(&self) -> usize {
        self.state.mv.get(self.state.level)
    }

    fn make_frame(&self, search: &LevelSearch, cover: Vec<u32>, dep: Vec<u8>, lower: Option<Block>) -> Option<Frame> {
        let n = self.state.n;
        let k = self.state.level;
        let r = self.target() - search.chosen.len();
        let bound = self.opts.atom_balance.then(|| atom_balance_bound(n));
        if self.opts.capacity && !capacity_ok(n, k, r, &cover, &dep, bound) {
            return None;
        }
        let mut allowed = 0u32;
        for e in 0..n {
            let d = n - 1 - cover[e].count_ones() as usize;
            if d + 1 < k {
                continue;
            }
            if let Some(b) = bound {
                if dep[e] >= b {
                    continue;
                }
            }
            allowed |= 1 << e;
        }
        let lower: Vec<usize> = lower.map(|b| b.atoms().map(|a| a - 1).collect()).unwrap_or_default();
        let mut all = Vec::new();
        enumerate_blocks(n, k, allowed, &cover, &lower, &mut all);
        if all.len() < r {
            return None;
        }
        let total = all.len();
        let mut cands: Vec<(Block, usize)> = all.into_iter().enumerate().map(|(i, b)| (b, total - i)).collect();
        if self.opts.twins {
            let set: HashSet<u32> = search.chosen.iter().map(|b| b.0).collect();
            let mut smaller = vec![0u32; n];
            for v in 0..n {
                let mut us = search.twin_a[v] & ((1u32 << v) - 1);
                while us != 0 {
                    let u = us.trailing_zeros() as usize;
                    us &= us - 1;
                    if transposition_fixes(&search.chosen, &set, u, v) {
                        smaller[v] |= 1 << u;
                    }
                }
            }
            // A block holding v but not a smaller twin u of v maps under (u v)
            // to a smaller block, giving a smaller sibling group.
            cands.retain(|(b, _)| b.atoms().all(|a| smaller[a - 1] & !b.0 == 0));
        }
        if cands.first().map_or(true, |c| c.1 < r) {
            return None;
        }
        Some(Frame {
            cands,
            next: 0,
            cover,
            dep,
        })
    }

    fn start(&mut self) -> Option<LevelSearch> {
        let n = self.state.n;
        let stab = Arc::new(blocklist_stabilizer(n, &self.state.blocks));
        let mut search = LevelSearch {
            stab,
            twin_a: twin_partners(n, &self.state.blocks),
            chosen: Vec::new(),
            frames: Vec::new(),
            app: HashSet::new(),
        };
        let frame = self.make_frame(&search, self.state.cover.clone(), self.state.dep_count.clone(), None)?;
        search.frames.push(frame);
        Some(search)
    }

    /// The forced last level: the uncovered pairs.
    fn complete_with_pairs(&self) -> Option<TwoPartition> {
        let n = self.state.n;
        let mut blocks = self.state.blocks.clone();
        for a in 0..n {
            for b in a + 1..n {
                if self.state.cover[a] >> b & 1 == 0 {
                    blocks.push(Block(1 << a | 1 << b));
                }
            }
        }
        let pairs = blocks.len() - self.state.blocks.len();
        (pairs == self.state.mv.get(2)).then(|| TwoPartition::from_normalized_unchecked(n, blocks))
    }

    fn next_group(&mut self) -> Option<Vec<Block>> {
        let target = self.target();
        let mut search = self.search.take().expect("search started");
        let out = loop {
            let depth = search.chosen.len();
            let Some(top) = search.frames.last_mut() else {
                break None;
            };
            let need = target - depth;
            if top.cands.get(top.next).map_or(true, |c| c.1 < need) {
                search.frames.pop();
                search.chosen.pop();
                continue;
            }
            let b = top.cands[top.next].0;
            top.next += 1;
            let mut cover = top.cover.clone();
            let mut dep = top.dep.clone();
            search.chosen.push(b);
            if !is_minimal_in_orbit(&search.stab, &search.chosen) {
                search.chosen.pop();
                continue;
            }
            if search.chosen.len() == target {
                let group = search.chosen.clone();
                search.chosen.pop();
                if search.app.insert(group.clone()) {
                    break Some(group);
                }
                continue;
            }
            for a in b.atoms() {
                cover[a - 1] |= b.0 & !(1 << (a - 1));
                dep[a - 1] += 1;
            }
            match self.make_frame(&search, cover, dep, Some(b)) {
                Some(f) => search.frames.push(f),
                None => {
                    search.chosen.pop();
                }
            }
        };
        if out.is_none() {
            search.app.clear();
        }
        self.search = Some(search);
        out
    }
}

impl RecursiveIterator for GenerationIter {
    type Leaf = TwoPartition;

    fn next_step(&mut self) -> Step<Self, TwoPartition> {
        if self.done {
            return Step::Done;
        }
        if self.state.level == 2 {
            self.done = true;
            return match self.complete_with_pairs() {
                Some(m) => Step::Leaf(m),
                None => Step::Done,
            };
        }
        if self.search.is_none() {
            match self.start() {
                Some(s) => self.search = Some(s),
                None => {
                    self.done = true;
                    return Step::Done;
                }
            }
        }
        while let Some(group) = self.next_group() {
            let child = self.state.child(&group);
            if child.level == 1 {
                return Step::Leaf(TwoPartition::from_normalized_unchecked(child.n, child.blocks));
            }
            if self.opts.parity && deficiency_parity_prune(&child) {
                continue;
            }
            return Step::Child(iterator_from_state(child, self.opts));
        }
        self.done = true;
        self.search = None;
        Step::Done
    }
}
