//! Permutation groups acting on atoms and block lists.

mod chain;
mod image;
mod perm;
mod stabilizer;

pub use chain::{group_from_generators, PermGroup};
pub use image::{is_minimal_in_orbit, minimal_image, minimal_image_with_perm};
pub use perm::{apply, PermError, Permutation};
pub use stabilizer::{blocklist_stabilizer, stabilizer_generators};

use crate::block::Block;
use crate::matroid::TwoPartition;

/// Minimal image under the full symmetric group.
pub fn canonical_blocks(n: usize, blocks: &[Block]) -> Vec<Block> {
    minimal_image(&PermGroup::symmetric(n), blocks)
}

pub fn canonical_form(m: &TwoPartition) -> TwoPartition {
    TwoPartition::from_normalized_unchecked(m.n(), canonical_blocks(m.n(), m.blocks()))
}

/// Order of the automorphism group.
pub fn automorphism_order(m: &TwoPartition) -> num_bigint::BigUint {
    blocklist_stabilizer(m.n(), m.blocks()).order().clone()
}
