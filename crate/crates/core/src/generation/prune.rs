//! Necessary conditions for an admissible partial 2-partition to complete.

use crate::matroid::MultiplicityVector;

/// Most blocks of size ≥ 3 through a single atom.
pub fn atom_balance_bound(n: usize) -> u8 {
    ((n - 1) / 2) as u8
}

/// Deficiency of each atom (0-based) given per-atom coverage masks.
pub fn deficiencies(n: usize, cover: &[u32]) -> Vec<usize> {
    (0..n).map(|e| n - 1 - cover[e].count_ones() as usize).collect()
}

/// Parity obstruction for the levels k ≤ `level` that remain to be placed.
///
/// A block of size k lowers the deficiency of each of its atoms by k−1, so
/// odd sizes keep every parity and an even size flips k of them. Completion
/// needs all deficiencies 0, hence at most Σ_{k even} k·m_k odd atoms. When the
/// only even blocks left are one or two pairs, they form a forest and leave
/// exactly 2 or 2–4 atoms odd, so zero odd atoms is also impossible.
pub fn parity_obstructed(n: usize, mv: &MultiplicityVector, level: usize, cover: &[u32]) -> bool {
    let odd = deficiencies(n, cover).iter().filter(|&&d| d % 2 == 1).count();
    let mut cap = 0;
    let mut even_sizes_above_two = false;
    for (k, c) in mv.entries() {
        if k <= level && k % 2 == 0 {
            cap += k * c;
            if k > 2 {
                even_sizes_above_two = true;
            }
        }
    }
    if odd > cap {
        return true;
    }
    let m2 = if level >= 2 { mv.get(2) } else { 0 };
    !even_sizes_above_two && (m2 == 1 || m2 == 2) && odd == 0
}

/// Counting bound for placing `r` more blocks of size `k`: every such block
/// takes k−1 of the deficiency of each of its k atoms.
pub fn capacity_ok(n: usize, k: usize, r: usize, cover: &[u32], dep: &[u8], bound: Option<u8>) -> bool {
    if r == 0 {
        return true;
    }
    let mut slots = 0;
    for e in 0..n {
        let d = n - 1 - cover[e].count_ones() as usize;
        let mut s = d / (k - 1);
        if let Some(b) = bound {
            s = s.min(b.saturating_sub(dep[e]) as usize);
        }
        slots += s.min(r);
    }
    slots >= k * r
}
