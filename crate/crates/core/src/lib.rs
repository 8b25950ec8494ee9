//! Simple rank-3 matroids as 2-partitions: invariants, freeness classes,
//! isomorph-free generation and finite-field representability.

pub mod block;
pub mod freeness;
pub mod generation;
pub mod matroid;
pub mod permgroup;
pub mod poly;
pub mod represent;

pub use block::Block;
pub use freeness::{
    balancedness, is_divisionally_free, is_inductively_free, is_supersolvable, Balancedness,
    IfCache, NotIntegrallySplitting,
};
pub use matroid::{
    contraction_summary, deficiency, deletion, make_matroid, multiplicity_vector, rank,
    ContractionSummary, Deletion, MatroidError, MultiplicityVector, TwoPartition,
};
pub use poly::{char_poly_via_tutte, characteristic_data, tutte, BivariatePolynomial, CharacteristicData};
