use std::fmt;
use std::ops::Mul;

use crate::block::Block;

/// A permutation of 1..=n, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("image list {0:?} is not a permutation of 1..=n")]
    MalformedPermutation(Vec<usize>),
    #[error("generator of degree {got} in a group of degree {want}")]
    DegreeMismatch { got: usize, want: usize },
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            img: (0..n as u8).collect(),
        }
    }

    /// `images[i]` is the image of atom i+1.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] || n > 255 {
                return Err(PermError::MalformedPermutation(images.to_vec()));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation {
            img: images.iter().map(|&x| (x - 1) as u8).collect(),
        })
    }

    /// Product of disjoint cycles on 1..=n.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n + 1];
        for c in cycles {
            for (i, &a) in c.iter().enumerate() {
                if a == 0 || a > n || touched[a] {
                    return Err(PermError::MalformedPermutation(c.to_vec()));
                }
                touched[a] = true;
                images[a - 1] = c[(i + 1) % c.len()];
            }
        }
        Permutation::from_images(&images)
    }

    pub(crate) fn from_raw(img: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = img.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| x as usize == i)
        });
        Permutation { img }
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    /// Image of atom `a` (1-based).
    pub fn apply_point(&self, a: usize) -> usize {
        self.img[a - 1] as usize + 1
    }

    pub(crate) fn at(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.img.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| x as usize == i)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { img: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            img: other.img.iter().map(|&x| self.img[x as usize]).collect(),
        }
    }

    pub fn apply_block(&self, b: Block) -> Block {
        let mut out = 0u32;
        for a in b.atoms() {
            out |= 1 << self.img[a - 1];
        }
        Block(out)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Debug for Permutation {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.img.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for s in 0..n {
            if seen[s] || self.img[s] as usize == s {
                continue;
            }
            any = true;
            let mut c = vec![s + 1];
            seen[s] = true;
            let mut x = self.img[s] as usize;
            while x != s {
                seen[x] = true;
                c.push(x + 1);
                x = self.img[x] as usize;
            }
            let parts: Vec<String> = c.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Image of a block list, renormalized.
pub fn apply(p: &Permutation, a: &[Block]) -> Vec<Block> {
    let mut out: Vec<Block> = a.iter().map(|&b| p.apply_block(b)).collect();
    crate::block::normalize(&mut out);
    out
}
