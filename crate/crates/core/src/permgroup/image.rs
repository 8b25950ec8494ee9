//! Lexicographically minimal images of block lists.
//!
//! Block lists are compared as the concatenation of their blocks in normal
//! form (larger blocks first, lexicographic within a size). The search assigns
//! the preimages of labels 1, 2, … in turn. After j labels, every block splits
//! into known labels (≤ j) and unlabeled atoms, and the image's flat sequence
//! is determined up to the first block that is not fully labeled: that block
//! contributes its known labels, then a value > j. Candidates whose determined
//! prefix (padded with an "unknown" sentinel) is not minimal are dropped; the
//! survivors at full depth all realize the minimal image.

use std::collections::HashSet;

use rustc_hash::FxHashSet;

use super::chain::PermGroup;
use super::perm::Permutation;
use crate::block::{Block, MAX_ATOMS};

const UNKNOWN: u8 = u8::MAX;
const NO_POINT: u8 = u8::MAX;

struct Ctx<'a> {
    n: usize,
    group: &'a PermGroup,
    symmetric: bool,
    blocks: &'a [Block],
    sizes: Vec<u32>,
    /// Block indices containing each atom (0-based).
    inc: Vec<Vec<u16>>,
    /// For each atom, its smaller twins (0-based bits).
    smaller_twins: Vec<u32>,
    /// Atoms in some block (0-based bits).
    covered: u32,
}

#[derive(Clone, Copy)]
struct Cand {
    /// Offset of this candidate's per-block known labels in its layer.
    at: usize,
    /// Labeled atoms (0-based bits).
    labeled: u32,
    depth: u8,
    /// `pre[ℓ]` is the atom (0-based) carrying label ℓ+1.
    pre: [u8; MAX_ATOMS],
    /// Images of a group element agreeing with `pre` on the first base
    /// points. Unused for the symmetric group.
    coset: [u8; MAX_ATOMS],
}

/// Candidates of one depth. Per block, the labels already known (bit ℓ−1
/// for label ℓ), stored contiguously per candidate.
#[derive(Default)]
struct Layer {
    cands: Vec<Cand>,
    known: Vec<u32>,
}

#[derive(Default)]
struct Sorted {
    complete: Vec<(u64, u16)>,
    open: Vec<(u64, u16)>,
}

#[derive(Default)]
struct Scratch {
    sorted: Sorted,
    newly: Vec<(u64, u16)>,
    prefix: Vec<u8>,
    best: Vec<u8>,
    winners: Vec<(u32, u8, u8)>,
    key: Vec<u32>,
    pairs: Vec<(u32, u32)>,
    seen: FxHashSet<Vec<u32>>,
}

/// Sort key making ascending order agree with the normal form on the known
/// parts: size descending, then the set holding the smallest differing label.
fn sort_key(size: u32, known: u32) -> u64 {
    ((64 - size as u64) << 32) | (!known.reverse_bits()) as u64
}

fn push_labels(out: &mut Vec<u8>, mut mask: u32) {
    while mask != 0 {
        out.push(mask.trailing_zeros() as u8 + 1);
        mask &= mask - 1;
    }
}

impl<'a> Ctx<'a> {
    fn new(group: &'a PermGroup, blocks: &'a [Block]) -> Ctx<'a> {
        let n = group.degree();
        assert!(n <= MAX_ATOMS, "degree {n} exceeds {MAX_ATOMS}");
        let mut inc = vec![Vec::new(); n];
        let mut covered = 0u32;
        for (i, b) in blocks.iter().enumerate() {
            for a in b.atoms() {
                assert!(a <= n, "atom {a} outside the group's degree {n}");
                inc[a - 1].push(i as u16);
            }
            covered |= b.0;
        }
        let smaller_twins = twin_masks(group, blocks);
        Ctx {
            n,
            group,
            symmetric: group.is_symmetric(),
            blocks,
            sizes: blocks.iter().map(|b| b.len() as u32).collect(),
            inc,
            smaller_twins,
            covered,
        }
    }

    fn root(&self) -> Layer {
        let mut coset = [0u8; MAX_ATOMS];
        for (i, x) in coset.iter_mut().enumerate().take(self.n) {
            *x = i as u8;
        }
        Layer {
            cands: vec![Cand {
                at: 0,
                labeled: 0,
                depth: 0,
                pre: [0; MAX_ATOMS],
                coset,
            }],
            known: vec![0; self.blocks.len()],
        }
    }

    /// Splits the blocks of a candidate into complete and open ones, each
    /// sorted by key.
    fn sort_blocks(&self, known: &[u32], out: &mut Sorted) {
        out.complete.clear();
        out.open.clear();
        for (i, &k) in known.iter().enumerate() {
            let e = (sort_key(self.sizes[i], k), i as u16);
            if k.count_ones() == self.sizes[i] {
                out.complete.push(e);
            } else {
                out.open.push(e);
            }
        }
        out.complete.sort_unstable();
        out.open.sort_unstable();
    }

    /// Determined flat prefix after giving label `label` (1-based) to the
    /// unlabeled `atom`, written to `out`. Only blocks through `atom` change.
    fn prefix_with(
        &self,
        known: &[u32],
        sorted: &Sorted,
        atom: usize,
        label: usize,
        newly: &mut Vec<(u64, u16)>,
        out: &mut Vec<u8>,
    ) {
        let bit = 1u32 << (label - 1);
        let abit = 1u32 << atom;
        newly.clear();
        let mut first: Option<(u64, u32)> = None;
        for &i in &self.inc[atom] {
            let k = known[i as usize] | bit;
            let size = self.sizes[i as usize];
            let key = sort_key(size, k);
            if k.count_ones() == size {
                newly.push((key, i));
            } else if first.map_or(true, |f| key < f.0) {
                first = Some((key, k));
            }
        }
        if let Some(&(key, i)) = sorted.open.iter().find(|e| self.blocks[e.1 as usize].0 & abit == 0) {
            if first.map_or(true, |f| key < f.0) {
                first = Some((key, known[i as usize]));
            }
        }
        let limit = first.map_or(u64::MAX, |f| f.0);
        newly.sort_unstable();
        out.clear();
        let mut old = sorted.complete.iter().take_while(|e| e.0 < limit).peekable();
        let mut new = newly.iter().take_while(|e| e.0 < limit).peekable();
        loop {
            match (old.peek(), new.peek()) {
                (Some(x), Some(y)) if x.0 < y.0 => {
                    push_labels(out, known[x.1 as usize]);
                    old.next();
                }
                (_, Some(y)) => {
                    push_labels(out, known[y.1 as usize] | bit);
                    new.next();
                }
                (Some(x), None) => {
                    push_labels(out, known[x.1 as usize]);
                    old.next();
                }
                (None, None) => break,
            }
        }
        if let Some((_, k)) = first {
            push_labels(out, k);
            out.push(UNKNOWN);
        }
    }

    /// Appends the extension of `c` by `atom` (reached through base image
    /// `d` for general groups) to `next`.
    fn extend_into(&self, known: &[u32], c: &Cand, atom: usize, d: u8, next: &mut Layer) {
        let nb = self.blocks.len();
        let at = next.known.len();
        next.known.extend_from_slice(&known[c.at..c.at + nb]);
        let bit = 1u32 << c.depth;
        for &i in &self.inc[atom] {
            next.known[at + i as usize] |= bit;
        }
        let mut e = *c;
        e.at = at;
        e.labeled |= 1 << atom;
        e.pre[c.depth as usize] = atom as u8;
        e.depth += 1;
        if d != NO_POINT {
            let t = self.group.transversal(c.depth as usize, d as usize);
            for i in 0..self.n {
                e.coset[i] = c.coset[t.at(i)];
            }
        }
        next.cands.push(e);
    }

    /// Calls `f(atom, d)` for each allowed choice of the next label.
    fn for_choices(&self, c: &Cand, mut f: impl FnMut(usize, u8)) {
        if self.symmetric {
            let mut free = !c.labeled & self.full();
            while free != 0 {
                let u = free.trailing_zeros() as usize;
                free &= free - 1;
                if self.smaller_twins[u] & !c.labeled == 0 {
                    f(u, NO_POINT);
                }
            }
        } else {
            for &d in self.group.basic_orbit(c.depth as usize) {
                let u = c.coset[d] as usize;
                if self.smaller_twins[u] & !c.labeled == 0 {
                    f(u, d as u8);
                }
            }
        }
    }

    fn full(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    /// True once every block is fully labeled.
    fn settled(&self, c: &Cand) -> bool {
        self.covered & !c.labeled == 0
    }

    /// One search step: all minimal extensions of all candidates, with the
    /// minimal determined prefix left in `s.best`.
    fn step(&self, cur: &Layer, next: &mut Layer, s: &mut Scratch) {
        let nb = self.blocks.len();
        s.best.clear();
        s.winners.clear();
        let mut have = false;
        for (ci, c) in cur.cands.iter().enumerate() {
            let label = c.depth as usize + 1;
            let known = &cur.known[c.at..c.at + nb];
            self.sort_blocks(known, &mut s.sorted);
            self.for_choices(c, |u, d| {
                self.prefix_with(known, &s.sorted, u, label, &mut s.newly, &mut s.prefix);
                match have.then(|| s.prefix.cmp(&s.best)) {
                    Some(std::cmp::Ordering::Greater) => {}
                    Some(std::cmp::Ordering::Equal) => s.winners.push((ci as u32, u as u8, d)),
                    _ => {
                        have = true;
                        std::mem::swap(&mut s.best, &mut s.prefix);
                        s.winners.clear();
                        s.winners.push((ci as u32, u as u8, d));
                    }
                }
            });
        }
        debug_assert!(have, "a label always has a preimage");
        next.cands.clear();
        next.known.clear();
        s.seen.clear();
        for &(ci, u, d) in &s.winners {
            let c = &cur.cands[ci as usize];
            self.extend_into(&cur.known, c, u as usize, d, next);
            if self.symmetric {
                let e = next.cands.last().unwrap();
                let known = &next.known[e.at..e.at + nb];
                s.pairs.clear();
                s.pairs
                    .extend(known.iter().zip(self.blocks).map(|(&k, b)| (k, b.0 & !e.labeled)));
                s.pairs.sort_unstable();
                s.key.clear();
                s.key.push(e.labeled);
                for &(k, r) in &s.pairs {
                    s.key.push(k);
                    s.key.push(r);
                }
                if s.seen.contains(s.key.as_slice()) {
                    next.cands.pop();
                    next.known.truncate(next.known.len() - nb);
                } else {
                    s.seen.insert(s.key.clone());
                }
            }
        }
    }

    /// Label permutation (atom ↦ label) completing a survivor.
    fn labeling(&self, c: &Cand) -> Permutation {
        if !self.symmetric {
            let mut img = vec![0u8; self.n];
            for i in 0..self.n {
                img[c.coset[i] as usize] = i as u8;
            }
            return Permutation::from_raw(img);
        }
        let mut img = vec![0u8; self.n];
        let mut next = c.depth;
        for (l, &a) in c.pre[..c.depth as usize].iter().enumerate() {
            img[a as usize] = l as u8;
        }
        for (a, slot) in img.iter_mut().enumerate() {
            if c.labeled >> a & 1 == 0 {
                *slot = next;
                next += 1;
            }
        }
        Permutation::from_raw(img)
    }
}

/// For each atom, the mask of smaller atoms whose transposition with it lies
/// in the group and fixes the block list.
fn twin_masks(group: &PermGroup, blocks: &[Block]) -> Vec<u32> {
    let n = group.degree();
    let partners = group.transposition_partners();
    let set: HashSet<u32> = blocks.iter().map(|b| b.0).collect();
    let mut out = vec![0u32; n];
    for v in 0..n {
        let mut cands = partners[v] & ((1u32 << v) - 1);
        while cands != 0 {
            let u = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            let (bu, bv) = (1u32 << u, 1u32 << v);
            let fixes = blocks.iter().all(|b| {
                let has_u = b.0 & bu != 0;
                let has_v = b.0 & bv != 0;
                has_u == has_v || set.contains(&(b.0 ^ bu ^ bv))
            });
            if fixes {
                out[v] |= bu;
            }
        }
    }
    out
}

fn normalized_input(a: &[Block]) -> Vec<Block> {
    crate::block::normalized(a.to_vec())
}

/// The minimal image together with a group element mapping `a` onto it.
pub fn minimal_image_with_perm(g: &PermGroup, a: &[Block]) -> (Vec<Block>, Permutation) {
    let a = normalized_input(a);
    if g.is_trivial() {
        return (a, Permutation::identity(g.degree()));
    }
    let ctx = Ctx::new(g, &a);
    let mut s = Scratch::default();
    let mut cur = ctx.root();
    let mut next = Layer::default();
    for _ in 0..ctx.n {
        if ctx.settled(&cur.cands[0]) {
            break;
        }
        ctx.step(&cur, &mut next, &mut s);
        std::mem::swap(&mut cur, &mut next);
    }
    let p = ctx.labeling(&cur.cands[0]);
    let image = super::perm::apply(&p, &a);
    (image, p)
}

pub fn minimal_image(g: &PermGroup, a: &[Block]) -> Vec<Block> {
    minimal_image_with_perm(g, a).0
}

/// Same answer as comparing with [`minimal_image`], but stops at the first
/// label where some image beats `a`.
pub fn is_minimal_in_orbit(g: &PermGroup, a: &[Block]) -> bool {
    let a = normalized_input(a);
    if g.is_trivial() || a.is_empty() {
        return true;
    }
    let ctx = Ctx::new(g, &a);
    let mut s = Scratch::default();
    let mut cur = ctx.root();
    let mut next = Layer::default();
    let mut identity = ctx.root();
    let mut id_next = Layer::default();
    let mut mine = Vec::new();
    for j in 0..ctx.n {
        if ctx.settled(&identity.cands[0]) {
            return true;
        }
        ctx.sort_blocks(&identity.known, &mut s.sorted);
        ctx.prefix_with(&identity.known, &s.sorted, j, j + 1, &mut s.newly, &mut mine);
        ctx.step(&cur, &mut next, &mut s);
        if s.best < mine {
            return false;
        }
        id_next.cands.clear();
        id_next.known.clear();
        let d = if ctx.symmetric { NO_POINT } else { j as u8 };
        ctx.extend_into(&identity.known, &identity.cands[0], j, d, &mut id_next);
        std::mem::swap(&mut identity, &mut id_next);
        std::mem::swap(&mut cur, &mut next);
    }
    true
}
