//! Normalized matrix patterns for rank-3 representations.

use crate::block::Block;
use crate::matroid::{rank, TwoPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    One,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepresentError {
    #[error("atoms {0:?} do not form a basis")]
    NotABasis([usize; 3]),
    #[error("matrix has {got} columns, expected {want}")]
    DimensionMismatch { got: usize, want: usize },
}

/// A 3×n pattern: the basis columns are the identity, each other column is
/// supported on its fundamental circuit, and the entries on a spanning forest
/// of the support graph are scaled to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationProblem {
    pub n: usize,
    pub basis: [usize; 3],
    /// `columns[k]` is the pattern of atom k+1, rows top to bottom.
    pub columns: Vec<[Entry; 3]>,
}

impl RepresentationProblem {
    pub fn free_count(&self) -> usize {
        self.columns
            .iter()
            .flatten()
            .filter(|&&e| e == Entry::Free)
            .count()
    }
}

/// First triple of atoms, in lexicographic order, of rank 3.
pub fn first_basis(m: &TwoPartition) -> [usize; 3] {
    let n = m.n();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                if rank(m, Block::from_atoms([a, b, c])) == 3 {
                    return [a, b, c];
                }
            }
        }
    }
    unreachable!("a proper 2-partition has rank 3")
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let up = parent[x];
        parent[x] = r;
        x = up;
    }
    r
}

pub fn projective_pattern(m: &TwoPartition, basis: [usize; 3]) -> Result<RepresentationProblem, RepresentError> {
    let n = m.n();
    if basis.iter().any(|&b| b == 0 || b > n) || rank(m, Block::from_atoms(basis)) != 3 {
        return Err(RepresentError::NotABasis(basis));
    }
    let mut columns = vec![[Entry::Zero; 3]; n];
    for (i, &b) in basis.iter().enumerate() {
        columns[b - 1][i] = Entry::One;
    }
    // Union-find over rows 0..3 and columns 3.. of the support graph.
    let mut parent: Vec<usize> = (0..3 + n).collect();
    for k in 1..=n {
        if basis.contains(&k) {
            continue;
        }
        for row in 0..3 {
            let (x, y) = (basis[(row + 1) % 3], basis[(row + 2) % 3]);
            // Coordinate `row` vanishes iff k lies on the line through the
            // other two basis atoms.
            if m.block_through(x, y).contains(k) {
                continue;
            }
            let (r, c) = (find(&mut parent, row), find(&mut parent, 3 + k - 1));
            columns[k - 1][row] = if r != c {
                parent[r] = c;
                Entry::One
            } else {
                Entry::Free
            };
        }
    }
    Ok(RepresentationProblem { n, basis, columns })
}
