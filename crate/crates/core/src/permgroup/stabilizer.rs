//! Setwise stabilizers of block lists in Sym(n).

use std::collections::BTreeMap;

use super::chain::{group_from_generators, PermGroup};
use super::perm::Permutation;
use crate::block::Block;

const NONE: u16 = u16::MAX;

struct Search {
    n: usize,
    blocks: Vec<Block>,
    /// Any two blocks share at most one atom.
    linear: bool,
    /// `pair[x][y]`: index of the block through atoms x and y (0-based), or
    /// NONE. Only used for linear lists.
    pair: Vec<Vec<u16>>,
    /// `pair_sig[x][y]`: count and total size of the blocks holding x and y.
    pair_sig: Vec<Vec<u32>>,
    sizes: Vec<u16>,
    colour: Vec<u32>,
    base: Vec<usize>,
}

/// Colours atoms by their incidence pattern, refined until stable.
fn refine_colours(n: usize, pair_sig: &[Vec<u32>], blocks: &[Block]) -> Vec<u32> {
    let mut colour: Vec<u32> = {
        let sigs: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                let mut v: Vec<usize> = blocks
                    .iter()
                    .filter(|b| b.contains(x + 1))
                    .map(|b| b.len())
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        renumber(&sigs)
    };
    let mut classes = count_classes(&colour);
    loop {
        let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
            .map(|x| {
                let mut v: Vec<(u32, u32)> = (0..n)
                    .filter(|&y| y != x)
                    .map(|y| (colour[y], pair_sig[x][y]))
                    .collect();
                v.sort_unstable();
                (colour[x], v)
            })
            .collect();
        let next = renumber(&sigs);
        let c = count_classes(&next);
        colour = next;
        if c == classes {
            return colour;
        }
        classes = c;
    }
}

fn renumber<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let mut ids = BTreeMap::new();
    for s in sigs {
        let next = ids.len() as u32;
        ids.entry(s.clone()).or_insert(next);
    }
    // Ids follow signature order, independent of atom order.
    let ranked: BTreeMap<T, u32> = ids.keys().cloned().enumerate().map(|(i, k)| (k, i as u32)).collect();
    sigs.iter().map(|s| ranked[s]).collect()
}

fn count_classes(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

struct Partial {
    map: Vec<usize>,
    inv: Vec<usize>,
    sigma: Vec<u16>,
    sigma_inv: Vec<u16>,
}

impl Search {
    fn new(n: usize, blocks: &[Block]) -> Search {
        let mut pair = vec![vec![NONE; n]; n];
        let mut pair_sig = vec![vec![0u32; n]; n];
        let mut linear = true;
        for (i, b) in blocks.iter().enumerate() {
            for x in b.atoms() {
                for y in b.atoms() {
                    if x != y {
                        linear &= pair[x - 1][y - 1] == NONE;
                        pair[x - 1][y - 1] = i as u16;
                        pair_sig[x - 1][y - 1] += 1 << 16 | b.len() as u32;
                    }
                }
            }
        }
        let sizes: Vec<u16> = blocks.iter().map(|b| b.len() as u16).collect();
        let colour = refine_colours(n, &pair_sig, blocks);
        // Small colour classes first: they constrain the search most.
        let mut class_size = BTreeMap::new();
        for &c in &colour {
            *class_size.entry(c).or_insert(0usize) += 1;
        }
        let mut base: Vec<usize> = (0..n).collect();
        base.sort_by_key(|&x| (class_size[&colour[x]], colour[x], x));
        Search {
            n,
            blocks: blocks.to_vec(),
            linear,
            pair,
            pair_sig,
            sizes,
            colour,
            base,
        }
    }

    /// Tries x ↦ y on top of the partial map; records new block
    /// correspondences in `trail`.
    fn assign(&self, p: &mut Partial, x: usize, y: usize, trail: &mut Vec<u16>) -> bool {
        if self.colour[x] != self.colour[y] || p.inv[y] != usize::MAX {
            return false;
        }
        for a in 0..self.n {
            let b = p.map[a];
            if b == usize::MAX {
                continue;
            }
            if self.pair_sig[x][a] != self.pair_sig[y][b] {
                return false;
            }
            if !self.linear {
                continue;
            }
            let f = self.pair[x][a];
            let g = self.pair[y][b];
            if (f == NONE) != (g == NONE) {
                return false;
            }
            if f == NONE {
                continue;
            }
            if self.sizes[f as usize] != self.sizes[g as usize] {
                return false;
            }
            let cur = p.sigma[f as usize];
            if cur == NONE {
                if p.sigma_inv[g as usize] != NONE {
                    return false;
                }
                p.sigma[f as usize] = g;
                p.sigma_inv[g as usize] = f;
                trail.push(f);
            } else if cur != g {
                return false;
            }
        }
        p.map[x] = y;
        p.inv[y] = x;
        true
    }

    fn undo(&self, p: &mut Partial, x: usize, trail: &mut Vec<u16>, mark: usize) {
        while trail.len() > mark {
            let f = trail.pop().unwrap() as usize;
            let g = p.sigma[f] as usize;
            p.sigma[f] = NONE;
            p.sigma_inv[g] = NONE;
        }
        let y = p.map[x];
        if y != usize::MAX {
            p.inv[y] = usize::MAX;
            p.map[x] = usize::MAX;
        }
    }

    /// Extends the partial map along the base from position `k`.
    fn complete(&self, p: &mut Partial, k: usize, trail: &mut Vec<u16>) -> bool {
        if k == self.n {
            return self.linear || {
                let g = Permutation::from_raw(p.map.iter().map(|&y| y as u8).collect());
                super::perm::apply(&g, &self.blocks) == self.blocks
            };
        }
        let x = self.base[k];
        for y in 0..self.n {
            if p.inv[y] != usize::MAX {
                continue;
            }
            let mark = trail.len();
            if self.assign(p, x, y, trail) && self.complete(p, k + 1, trail) {
                return true;
            }
            self.undo(p, x, trail, mark);
        }
        false
    }

    /// An automorphism fixing base[..i] and sending base[i] to `target`.
    fn find(&self, i: usize, target: usize, nblocks: usize) -> Option<Permutation> {
        let mut p = Partial {
            map: vec![usize::MAX; self.n],
            inv: vec![usize::MAX; self.n],
            sigma: vec![NONE; nblocks],
            sigma_inv: vec![NONE; nblocks],
        };
        let mut trail = Vec::new();
        for &b in &self.base[..i] {
            let ok = self.assign(&mut p, b, b, &mut trail);
            debug_assert!(ok);
        }
        if !self.assign(&mut p, self.base[i], target, &mut trail) {
            return None;
        }
        if !self.complete(&mut p, i + 1, &mut trail) {
            return None;
        }
        Some(Permutation::from_raw(p.map.iter().map(|&y| y as u8).collect()))
    }
}

fn orbit_of(n: usize, point: usize, gens: &[Permutation]) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[point] = true;
    let mut stack = vec![point];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.at(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Generators of the stabilizer, found level by level along the search base.
pub fn stabilizer_generators(n: usize, blocks: &[Block]) -> Vec<Permutation> {
    let blocks = crate::block::normalized(blocks.to_vec());
    let s = Search::new(n, &blocks);
    let mut gens: Vec<Permutation> = Vec::new();
    for i in (0..n).rev() {
        let beta = s.base[i];
        let mut orbit = orbit_of(n, beta, &gens);
        for gamma in 0..n {
            if orbit[gamma] || s.colour[gamma] != s.colour[beta] {
                continue;
            }
            if let Some(g) = s.find(i, gamma, blocks.len()) {
                gens.push(g);
                orbit = orbit_of(n, beta, &gens);
            }
        }
    }
    gens
}

/// The group of all permutations of 1..=n mapping the block list onto itself.
pub fn blocklist_stabilizer(n: usize, a: &[Block]) -> PermGroup {
    if a.is_empty() {
        return PermGroup::symmetric(n);
    }
    let gens = stabilizer_generators(n, a);
    group_from_generators(n, &gens).expect("generators have degree n")
}
