use std::cmp::Ordering;
use std::fmt;

/// Largest supported atom count.
pub const MAX_ATOMS: usize = 32;

/// A set of atoms in 1..=32, bit a-1 standing for atom a.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Block(pub u32);

impl Block {
    pub const EMPTY: Block = Block(0);

    /// Panics on atoms outside 1..=32.
    pub fn from_atoms<I: IntoIterator<Item = usize>>(atoms: I) -> Block {
        let mut m = 0u32;
        for a in atoms {
            assert!((1..=MAX_ATOMS).contains(&a), "atom {a} out of range");
            m |= 1 << (a - 1);
        }
        Block(m)
    }

    pub fn singleton(a: usize) -> Block {
        Block(1 << (a - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, a: usize) -> bool {
        a >= 1 && a <= MAX_ATOMS && self.0 >> (a - 1) & 1 == 1
    }

    pub fn is_subset(self, other: Block) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meet(self, other: Block) -> Block {
        Block(self.0 & other.0)
    }

    pub fn join(self, other: Block) -> Block {
        Block(self.0 | other.0)
    }

    pub fn without(self, a: usize) -> Block {
        Block(self.0 & !(1 << (a - 1)))
    }

    /// Atoms in increasing order.
    pub fn atoms(self) -> Atoms {
        Atoms(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.atoms().collect()
    }

    /// Lexicographic comparison of the sorted atom sequences.
    pub fn lex_cmp(self, other: Block) -> Ordering {
        let d = self.0 ^ other.0;
        if d == 0 {
            return Ordering::Equal;
        }
        let low = d & d.wrapping_neg();
        let above = !((low << 1).wrapping_sub(1));
        // Sequences agree below the lowest differing atom x. The holder of x is
        // smaller unless the other sequence ends before reaching x.
        let (holder, other_set) = if self.0 & low != 0 { (true, other.0) } else { (false, self.0) };
        let holder_ord = if other_set & above != 0 { Ordering::Less } else { Ordering::Greater };
        if holder {
            holder_ord
        } else {
            holder_ord.reverse()
        }
    }
}

impl Ord for Block {
    /// Larger blocks first, lexicographic among blocks of equal size.
    fn cmp(&self, other: &Self) -> Ordering {
        other.len().cmp(&self.len()).then_with(|| self.lex_cmp(*other))
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

pub struct Atoms(u32);

impl Iterator for Atoms {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Atoms {}

/// Sorts into normal form (size-descending groups, lexicographic inside a
/// group) and removes duplicates.
pub fn normalize(blocks: &mut Vec<Block>) {
    blocks.sort_unstable();
    blocks.dedup();
}

pub fn normalized(mut blocks: Vec<Block>) -> Vec<Block> {
    normalize(&mut blocks);
    blocks
}

pub fn to_lists(blocks: &[Block]) -> Vec<Vec<usize>> {
    blocks.iter().map(|b| b.to_vec()).collect()
}

pub fn from_lists<S: AsRef<[usize]>>(lists: &[S]) -> Vec<Block> {
    lists
        .iter()
        .map(|l| Block::from_atoms(l.as_ref().iter().copied()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[usize]) -> Block {
        Block::from_atoms(v.iter().copied())
    }

    #[test]
    fn lex_matches_vec_order() {
        let sets: Vec<Vec<usize>> = vec![
            vec![1, 2, 3],
            vec![1, 2],
            vec![1, 3],
            vec![2],
            vec![1, 2, 4],
            vec![2, 3, 4],
            vec![1, 5],
            vec![],
            vec![5, 6],
            vec![1, 2, 3, 4],
        ];
        for x in &sets {
            for y in &sets {
                assert_eq!(b(x).lex_cmp(b(y)), x.cmp(y), "{x:?} vs {y:?}");
            }
        }
    }

    #[test]
    fn normal_form_groups_by_size() {
        let mut v = vec![b(&[3, 4]), b(&[1, 2, 4]), b(&[2, 5]), b(&[1, 3, 5]), b(&[1, 2, 4])];
        normalize(&mut v);
        assert_eq!(
            to_lists(&v),
            vec![vec![1, 2, 4], vec![1, 3, 5], vec![2, 5], vec![3, 4]]
        );
    }
}
